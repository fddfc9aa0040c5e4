mod common;

use common::*;
use dwsurgery::reps::enumerate_colorings;
use dwsurgery::Engine;

#[test]
fn figure8_matches_printed_delta_and_theta() {
    let d = fixture("figure8.morse");
    assert_eq!(d.num_components(), 1);
    assert_eq!(d.crossings().len(), 4);
    assert_eq!(d.wirtinger().writhes, vec![0]);
    let pres = d.wirtinger_with_basepoints(&[Some(FIGURE8_BASEPOINT)]).unwrap();
    for g in [cyclic(5), dihedral(5)] {
        let cols = enumerate_colorings(&pres, &g);
        for alpha in test_cocycles(&g, 2, 11) {
            let eng = Engine::new(alpha.clone()).unwrap();
            for c in &cols {
                let x = FIGURE8_ARCS.map(|i| c.color(i));
                let (pd, pt) = figure8_reference(&g, &alpha, x);
                let ext = eng.exterior(&d, &pres, c).unwrap();
                assert_eq!(ext.delta(), pd);
                assert_eq!(ext.total(), pd - pt);
            }
        }
    }
}

#[test]
fn chain3_matches_printed_delta_and_theta() {
    let d = fixture("chain3.morse");
    assert_eq!(d.num_components(), 3);
    let mut bases = vec![None; 3];
    for k in [0, 2, 4] {
        bases[d.component_of_arc(CHAIN3_ARCS[k])] = Some(CHAIN3_ARCS[k]);
    }
    let pres = d.wirtinger_with_basepoints(&bases).unwrap();
    for g in [cyclic(5), cyclic(6), group(dwsurgery::GroupSpec::Dihedral { n: 4 })] {
        let cols = enumerate_colorings(&pres, &g);
        for alpha in test_cocycles(&g, 3, 5) {
            let eng = Engine::new(alpha.clone()).unwrap();
            for c in &cols {
                let v = CHAIN3_ARCS.map(|i| c.color(i));
                let (pd, pt) = chain3_reference(&g, &alpha, v);
                let ext = eng.exterior(&d, &pres, c).unwrap();
                assert_eq!(ext.delta(), pd);
                assert_eq!(ext.theta(), pt);
            }
        }
    }
}
