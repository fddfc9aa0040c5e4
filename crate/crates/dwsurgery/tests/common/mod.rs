#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use dwsurgery::algebra::{CoeffValue, FiniteGroup, GroupElem, GroupSpec};
use dwsurgery::bar::{coboundary_2, h3_generators, strongly_normalize, Cochain2, Cochain3};
use dwsurgery::diagram::{parse_diagram, MorseDiagram};
use dwsurgery::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> MorseDiagram {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse_diagram(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn group(spec: GroupSpec) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::new(&spec).unwrap())
}

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    group(GroupSpec::Cyclic { n })
}

pub fn dihedral(n: usize) -> Arc<FiniteGroup> {
    group(GroupSpec::Dihedral { n })
}

pub fn random_beta(g: &Arc<FiniteGroup>, den: u64, rng: &mut ChaCha8Rng) -> Cochain2 {
    let n = g.order();
    let vals = (0..n * n).map(|_| rng.gen_range(0..den as i64)).collect();
    Cochain2::from_numerators(g.clone(), den, vals).unwrap()
}

/// Strongly normalized cocycles: every feasible multiple of every H³ generator, plus
/// representatives obtained by normalizing after adding a random coboundary.
pub fn test_cocycles(g: &Arc<FiniteGroup>, extra: usize, seed: u64) -> Vec<Cochain3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.order() as u64;
    let mut out = Vec::new();
    let mut classes = vec![Cochain3::zero(g.clone())];
    for gen in h3_generators(g, n).unwrap() {
        for k in 1..gen.order {
            let a = gen.cocycle.scale(k as i64);
            match strongly_normalize(&a) {
                Ok((sn, _)) => {
                    out.push(sn);
                    classes.push(a);
                }
                Err(Error::NoSolution(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    for i in 0..extra {
        let base = &classes[i % classes.len()];
        let shifted = base.add(&coboundary_2(&random_beta(g, n, &mut rng)));
        let (sn, _) = strongly_normalize(&shifted).unwrap();
        if !out.contains(&sn) {
            out.push(sn);
        }
    }
    out
}

pub fn a(alpha: &Cochain3, x: GroupElem, y: GroupElem, z: GroupElem) -> CoeffValue {
    alpha.get(x, y, z)
}

/// The nine-term δ and two-term θ of the figure-eight example, in the labels x₁..x₄.
pub fn figure8_reference(g: &FiniteGroup, al: &Cochain3, x: [GroupElem; 4]) -> (CoeffValue, CoeffValue) {
    let [x1, x2, x3, x4] = x;
    let i = |v| g.inv(v);
    let m = |u, v| g.mul(u, v);
    let delta = a(al, i(x4), x3, x1) - a(al, i(x4), x1, x4) - a(al, x2, i(x4), x1)
        + a(al, i(x2), x1, x3)
        - a(al, i(x2), x3, x2)
        - a(al, x4, i(x2), x3)
        + a(al, m(i(x4), x1), x4, m(i(x2), x3))
        - a(al, m(i(x4), x1), m(i(x2), x3), x2)
        - a(al, x2, m(i(x4), x1), m(i(x2), x3));
    let theta = a(al, m(i(x4), i(x1)), x1, x3) - a(al, m(i(x1), i(x3)), x3, x2);
    (delta, theta)
}

/// Arc ids of the figure-eight fixture carrying the labels x₁..x₄; x₂ is the basepoint.
pub const FIGURE8_ARCS: [usize; 4] = [0, 1, 2, 3];
pub const FIGURE8_BASEPOINT: usize = 1;

/// δ and θ of the three-chain example in the labels x₁,y₁,x₂,y₂,x₃,y₃.
pub fn chain3_reference(g: &FiniteGroup, al: &Cochain3, v: [GroupElem; 6]) -> (CoeffValue, CoeffValue) {
    let [x1, y1, x2, y2, x3, y3] = v;
    let i = |v| g.inv(v);
    let m = |u, v| g.mul(u, v);
    let delta = a(al, x2, y1, y3) - a(al, x2, y3, x1) - a(al, x1, x2, y3) + a(al, y1, y2, i(x3))
        - a(al, y1, i(x3), x2)
        - a(al, x2, y1, i(x3))
        + a(al, i(y2), y3, x1)
        - a(al, i(y2), x1, x3)
        - a(al, x3, i(y2), x1);
    let theta = a(al, m(y1, y2), i(y2), y3) - a(al, m(x1, x2), i(x2), x3);
    (delta, theta)
}

/// Arc ids of the chain fixture carrying x₁,y₁,x₂,y₂,x₃,y₃; the xᵢ arcs are the basepoints.
pub const CHAIN3_ARCS: [usize; 6] = [4, 5, 1, 0, 3, 2];
