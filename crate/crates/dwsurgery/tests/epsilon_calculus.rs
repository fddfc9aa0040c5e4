mod common;

use common::*;
use dwsurgery::bar::Cochain3;
use dwsurgery::torus::{build_fz, build_fz_linear, build_fz_recursive, epsilon};
use dwsurgery::{CoeffValue, FiniteGroup, GroupSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const R: i64 = 6;

fn groups() -> Vec<std::sync::Arc<FiniteGroup>> {
    vec![cyclic(5), cyclic(8), dihedral(5), group(GroupSpec::Quaternion)]
}

fn check_identities(alpha: &Cochain3) {
    let g = alpha.group();
    for z in g.elements() {
        let t = build_fz(alpha, z, 2 * R + 1).unwrap();
        assert_eq!(t.residual_violation(alpha), None);
        let e = |a, b| t.epsilon(a, b);
        for a in -R..=R {
            for b in -R..=R {
                assert_eq!(e(a, b), -e(b, a));
                assert_eq!(e(0, b), CoeffValue::ZERO);
                let za = g.pow(z, a);
                assert_eq!(alpha.get(za, g.pow(z, b), za), e(a, a + b) - e(a, b), "z={z} a={a} b={b}");
                assert_eq!(e(a, b), e(a + b, -a));
                assert_eq!(e(a, b), e(b, -a - b));
                assert_eq!(e(a, b), e(-a, -b));
            }
        }
    }
}

#[test]
fn epsilon_identities_hold_for_normalized_cocycles() {
    for g in groups() {
        for alpha in test_cocycles(&g, 2, 77) {
            check_identities(&alpha);
        }
    }
}

#[test]
fn recursion_agrees_with_linear_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    for g in groups() {
        let cocycles = test_cocycles(&g, 1, 8);
        for _ in 0..50 {
            let alpha = &cocycles[rng.gen_range(0..cocycles.len())];
            let z = g.elem(rng.gen_range(0..g.order())).unwrap();
            let (a, b) = (rng.gen_range(-R..=R), rng.gen_range(-R..=R));
            let rec = build_fz_recursive(alpha, z, R + 1);
            let lin = build_fz_linear(alpha, z, R + 1).unwrap();
            assert_eq!(lin.residual_violation(alpha), None);
            assert_eq!(rec.epsilon(a, b), lin.epsilon(a, b), "{} z={z} ({a},{b})", g.name());
            assert_eq!(epsilon(alpha, z, a, b).unwrap(), rec.epsilon(a, b));
            checked += 1;
        }
    }
    assert_eq!(checked, 200);
}

#[test]
fn lens_space_formula_matches_epsilon() {
    // p/q surgery on the unknot: the exterior value vanishes and F = ε(z; −q, p)
    use dwsurgery::diagram::{parse_diagram, SurgeryPresentation};
    use dwsurgery::torus::{complete_framing, FramingCoefficient};
    use dwsurgery::{DwOptions, Engine};
    let g = cyclic(5);
    let d = parse_diagram("cup ccw 0\ncap 0").unwrap();
    for alpha in test_cocycles(&g, 0, 1) {
        let eng = Engine::new(alpha.clone()).unwrap();
        for (p, q) in [(5, 1), (5, 2), (10, 3), (5, -4)] {
            let s = SurgeryPresentation::new(d.clone(), vec![FramingCoefficient::new(p, q).unwrap()]).unwrap();
            let r = eng.dw_invariant(&s, DwOptions { per_rep: true, ..Default::default() }).unwrap();
            let pp = complete_framing(p, q).unwrap().b;
            for rep in r.reps.unwrap() {
                let x = rep.coloring.color(0);
                let z = g.pow(x, pp);
                assert_eq!(rep.value, epsilon(&alpha, z, -q, p).unwrap());
            }
        }
    }
}

#[test]
fn non_normalized_input_falls_back_to_linear_solve() {
    let g = cyclic(4);
    let alpha = Cochain3::cyclic_standard(g.clone(), 1).unwrap();
    for z in g.elements() {
        let t = build_fz(&alpha, z, 6).unwrap();
        assert_eq!(t.residual_violation(&alpha), None);
    }
}
