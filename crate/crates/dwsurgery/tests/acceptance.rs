//! Acceptance run: one status line per criterion.
//!
//! A criterion is `PASS` when it holds as stated, `DEVIATION` when it holds only after a
//! documented correction of a printed formula (the line says which), and `FAIL` otherwise.
//! The process exits non-zero only on `FAIL`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use common::*;
use dwsurgery::bar::{
    allowed_support, coboundary_2, h3_generators, is_coboundary, is_cocycle, is_strongly_normalized, lemma_violation,
    strongly_normalize, Cochain3,
};
use dwsurgery::diagram::{parse_diagram, MorseDiagram, SurgeryPresentation};
use dwsurgery::reps::{enumerate_colorings, surgery_extension, surgery_filter, Coloring};
use dwsurgery::torus::{build_fz, build_fz_linear, build_fz_recursive, parse_surgery};
use dwsurgery::{CoeffValue, DwOptions, DwResult, Engine, Error, FiniteGroup, GroupElem, GroupSpec};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(PartialEq)]
enum Status {
    Pass,
    Deviation,
    Fail,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Pass, detail: detail.into() }
}

fn deviation(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Deviation, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Fail, detail: detail.into() }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return fail(format!($($msg)+));
        }
    };
}

fn criterion_groups() -> Vec<(GroupSpec, Arc<FiniteGroup>)> {
    let mut specs: Vec<GroupSpec> = (2..=8).map(|n| GroupSpec::Cyclic { n }).collect();
    specs.push(GroupSpec::Product { factors: vec![GroupSpec::Cyclic { n: 2 }, GroupSpec::Cyclic { n: 2 }] });
    specs.push(GroupSpec::Symmetric { n: 3 });
    specs.push(GroupSpec::Dihedral { n: 4 });
    specs.push(GroupSpec::Dihedral { n: 5 });
    specs.push(GroupSpec::Quaternion);
    specs.into_iter().map(|s| (s.clone(), group(s))).collect()
}

struct Normalized {
    group: Arc<FiniteGroup>,
    cocycle: Cochain3,
}

fn c1_cocycle_core(groups: &[(GroupSpec, Arc<FiniteGroup>)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut summary = Vec::new();
    for (_, g) in groups {
        let gens = h3_generators(g, g.order() as u64).unwrap();
        for gen in &gens {
            ensure!(is_cocycle(&gen.cocycle), "{}: generator of order {} is not a cocycle", g.name(), gen.order);
        }
        for _ in 0..100 {
            let beta = random_beta(g, g.order() as u64 * 2, &mut rng);
            ensure!(is_cocycle(&coboundary_2(&beta)), "{}: d(dβ) != 0", g.name());
        }
        summary.push(format!("{} {:?}", g.name(), gens.iter().map(|x| x.order).collect::<Vec<_>>()));
    }
    pass(format!("H3 generator orders: {}; 100 random d(dβ)=0 per group", summary.join(", ")))
}

/// All nonzero classes `Σ kᵢ·genᵢ`.
fn classes(g: &Arc<FiniteGroup>) -> Vec<Cochain3> {
    let gens = h3_generators(g, g.order() as u64).unwrap();
    let mut out = vec![Cochain3::zero(g.clone())];
    for gen in &gens {
        let mut next = Vec::new();
        for base in &out {
            for k in 0..gen.order {
                next.push(base.add(&gen.cocycle.scale(k as i64)));
            }
        }
        out = next;
    }
    out.remove(0);
    out
}

fn c2_normalization(groups: &[(GroupSpec, Arc<FiniteGroup>)], found: &mut Vec<Normalized>) -> Outcome {
    let mut survey = Vec::new();
    for (_, g) in groups {
        let (mut yes, mut no) = (0, 0);
        for alpha in classes(g) {
            match strongly_normalize(&alpha) {
                Ok((sn, beta)) => {
                    ensure!(is_strongly_normalized(&sn), "{}: output not strongly normalized", g.name());
                    ensure!(sn == alpha.add(&coboundary_2(&beta)), "{}: output differs by a non-coboundary", g.name());
                    found.push(Normalized { group: g.clone(), cocycle: sn });
                    yes += 1;
                }
                Err(Error::NoSolution(_)) => no += 1,
                Err(e) => return fail(format!("{}: {e}", g.name())),
            }
        }
        survey.push(format!("{} {yes}/{}", g.name(), yes + no));
    }
    let z2 = cyclic(2);
    let gen = &h3_generators(&z2, 2).unwrap()[0].cocycle;
    ensure!(allowed_support(&z2).is_empty(), "Z/2 allowed support is not empty");
    ensure!(matches!(strongly_normalize(gen), Err(Error::NoSolution(_))), "Z/2 nontrivial class was normalized");
    pass(format!("normalizable nonzero classes: {}; Z/2 returns NoSolution", survey.join(", ")))
}

fn c3_lemma(found: &[Normalized]) -> Outcome {
    let mut printed_first = 0;
    let mut printed_second = 0;
    for n in found {
        if let Some(t) = lemma_violation(&n.cocycle) {
            return fail(format!("{}: identity fails at {t:?}", n.group.name()));
        }
        let (g, a) = (&n.group, &n.cocycle);
        let mut bad1 = false;
        let mut bad2 = false;
        for x in g.elements() {
            for y in g.elements() {
                for z in g.elements() {
                    let xyz = g.product([x, y, z]);
                    let yz = g.mul(y, z);
                    bad1 |= a.get(x, y, z) != a.get(g.inv(xyz), x, y);
                    bad2 |= a.get(x, y, z) != a.get(xyz, g.inv(yz), z);
                }
            }
        }
        printed_first += usize::from(bad1);
        printed_second += usize::from(bad2);
    }
    let detail = format!(
        "(i) and the chain α(x,y,z) = −α((xyz)⁻¹,x,y) = α(xyz,(yz)⁻¹,y) = α(xy,z,(yz)⁻¹) = −α(x,yz,z⁻¹) hold for all {} \
         normalized cocycles; the printed forms +α((xyz)⁻¹,x,y) and α(xyz,(yz)⁻¹,z) fail for {} and {} of them",
        found.len(),
        printed_first,
        printed_second
    );
    if printed_first + printed_second > 0 {
        deviation(detail)
    } else {
        pass(detail)
    }
}

fn c4_epsilon(found: &[Normalized]) -> Outcome {
    const R: i64 = 6;
    let mut checks = 0usize;
    for n in found {
        let (g, alpha) = (&n.group, &n.cocycle);
        for z in g.elements() {
            let t = build_fz(alpha, z, 2 * R + 1).unwrap();
            ensure!(t.residual_violation(alpha).is_none(), "{}: f_z residual nonzero for z={z}", g.name());
            for a in -R..=R {
                for b in -R..=R {
                    let e = |u, v| t.epsilon(u, v);
                    let za = g.pow(z, a);
                    ensure!(e(a, b) == -e(b, a), "antisymmetry fails");
                    ensure!(e(0, b) == CoeffValue::ZERO, "ε(z;0,b) != 0");
                    ensure!(alpha.get(za, g.pow(z, b), za) == e(a, a + b) - e(a, b), "α(zᵃ,zᵇ,zᵃ) relation fails");
                    ensure!(
                        e(a, b) == e(a + b, -a) && e(a, b) == e(b, -a - b) && e(a, b) == e(-a, -b),
                        "symmetry chain fails"
                    );
                    checks += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n = &found[rng.gen_range(0..found.len())];
        let z = n.group.elem(rng.gen_range(0..n.group.order())).unwrap();
        let (a, b) = (rng.gen_range(-R..=R), rng.gen_range(-R..=R));
        let rec = build_fz_recursive(&n.cocycle, z, R + 1).epsilon(a, b);
        let lin = build_fz_linear(&n.cocycle, z, R + 1).unwrap().epsilon(a, b);
        ensure!(rec == lin, "recursion and linear solve disagree at z={z}, ({a},{b})");
    }
    pass(format!("{checks} (cocycle, z, a, b) checks with |a|,|b| ≤ {R}; 200 sampled recursion = linear-solve"))
}

fn reference_cocycles(g: &Arc<FiniteGroup>, found: &[Normalized]) -> Vec<Cochain3> {
    let mut out: Vec<Cochain3> =
        found.iter().filter(|n| Arc::ptr_eq(&n.group, g) || *n.group == **g).map(|n| n.cocycle.clone()).collect();
    for c in test_cocycles(g, 4, 55) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn c5_reference_vectors(found: &[Normalized]) -> Outcome {
    let f8 = fixture("figure8.morse");
    let pres = f8.wirtinger_with_basepoints(&[Some(FIGURE8_BASEPOINT)]).unwrap();
    let mut f8_checks = 0;
    let mut printed_broken = 0;
    for g in [cyclic(5), dihedral(5)] {
        let cocycles = reference_cocycles(&g, found);
        let cols = enumerate_colorings(&pres, &g);
        for alpha in &cocycles {
            let eng = Engine::new(alpha.clone()).unwrap();
            for c in &cols {
                let (pd, pt) = figure8_reference(&g, alpha, FIGURE8_ARCS.map(|i| c.color(i)));
                let ext = eng.exterior(&f8, &pres, c).unwrap();
                ensure!(ext.delta() == pd, "figure-eight δ differs over {}", g.name());
                ensure!(ext.total() == pd - pt, "figure-eight total differs from δ − θ over {}", g.name());
                f8_checks += 1;
            }
        }
        // the printed δ+θ changes under a strongly normalized coboundary, the engine value does not
        for (i, a1) in cocycles.iter().enumerate() {
            for a2 in &cocycles[i + 1..] {
                if !is_coboundary(&a1.add(&a2.neg())).unwrap() {
                    continue;
                }
                let (e1, e2) = (Engine::new(a1.clone()).unwrap(), Engine::new(a2.clone()).unwrap());
                for c in &cols {
                    ensure!(
                        e1.exterior_value(&f8, &pres, c).unwrap() == e2.exterior_value(&f8, &pres, c).unwrap(),
                        "engine exterior value not coboundary invariant"
                    );
                    let x = FIGURE8_ARCS.map(|i| c.color(i));
                    let (d1, t1) = figure8_reference(&g, a1, x);
                    let (d2, t2) = figure8_reference(&g, a2, x);
                    printed_broken += usize::from(d1 + t1 != d2 + t2);
                }
            }
        }
    }

    let chain = fixture("chain3.morse");
    let mut bases = vec![None; 3];
    for k in [0, 2, 4] {
        bases[chain.component_of_arc(CHAIN3_ARCS[k])] = Some(CHAIN3_ARCS[k]);
    }
    let cpres = chain.wirtinger_with_basepoints(&bases).unwrap();
    let mut chain_checks = 0;
    for g in [cyclic(5), cyclic(6), dihedral(4)] {
        let cols = enumerate_colorings(&cpres, &g);
        for alpha in reference_cocycles(&g, found) {
            let eng = Engine::new(alpha.clone()).unwrap();
            for c in &cols {
                let (pd, pt) = chain3_reference(&g, &alpha, CHAIN3_ARCS.map(|i| c.color(i)));
                let ext = eng.exterior(&chain, &cpres, c).unwrap();
                ensure!(ext.delta() == pd && ext.theta() == pt, "three-chain δ or θ differs over {}", g.name());
                chain_checks += 1;
            }
        }
    }
    deviation(format!(
        "three-chain δ and θ exact on {chain_checks} (cocycle, coloring) pairs over Z/5, Z/6, D4; figure-eight δ exact \
         and θ equal to the printed θ with opposite sign on {f8_checks} pairs over Z/5, D5; printed δ+θ changes \
         under a strongly normalized coboundary in {printed_broken} cases, so the printed sign is taken as a misprint"
    ))
}

fn unknot() -> MorseDiagram {
    parse_diagram("cup ccw 0\ncap 0").unwrap()
}

fn surgery(d: &MorseDiagram, s: &str) -> SurgeryPresentation {
    SurgeryPresentation::new(d.clone(), parse_surgery(s).unwrap()).unwrap()
}

fn dw(alpha: &Cochain3, s: &SurgeryPresentation) -> DwResult {
    Engine::new(alpha.clone()).unwrap().dw_invariant(s, DwOptions::default()).unwrap()
}

fn c6_closed_sanity() -> Outcome {
    for g in [cyclic(5), dihedral(5), group(GroupSpec::Quaternion)] {
        for alpha in test_cocycles(&g, 1, 6) {
            let empty = SurgeryPresentation::new(parse_diagram("").unwrap(), vec![]).unwrap();
            for s in [empty, surgery(&unknot(), "1/0"), surgery(&unknot(), "1/1")] {
                let r = dw(&alpha, &s);
                ensure!(r.values == vec![(CoeffValue::ZERO, 1)], "S³ over {} is not a single F = 0", g.name());
                ensure!((r.total - 1.0 / g.order() as f64).norm() < 1e-15, "S³ total off");
            }
            let r = dw(&alpha, &surgery(&unknot(), "0/1"));
            ensure!(r.values == vec![(CoeffValue::ZERO, g.order())], "S¹×S² over {} has nonzero F", g.name());
        }
    }
    let mut lens = 0;
    for n in 1..=8usize {
        let g = cyclic(n);
        let eng = Engine::new(Cochain3::zero(g.clone())).unwrap();
        for p in 1..=7i64 {
            for q in -p..=p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let r = eng.dw_invariant(&surgery(&unknot(), &format!("{p}/{q}")), DwOptions::default()).unwrap();
                let hom = (p as usize).gcd(&n);
                ensure!(r.values == vec![(CoeffValue::ZERO, hom)], "L({p},{q}) over Z/{n}: {:?}", r.values);
                ensure!((r.total.re - hom as f64 / n as f64).abs() < 1e-15 && r.total.im.abs() < 1e-15, "total off");
                lens += 1;
            }
        }
    }
    pass(format!(
        "S³ (empty, 1/0, +1 unknot) gives exactly one F=0; S¹×S² gives |Γ| zeros; {lens} zero-cocycle lens spaces \
         give gcd(p,n) zeros"
    ))
}

fn same_dw(a: &DwResult, b: &DwResult) -> bool {
    a.values == b.values && (a.total - b.total).norm() < 1e-12
}

fn c7_invariance() -> Outcome {
    let f8 = fixture("figure8.morse");
    let chain = fixture("chain3.morse");
    let mut counts = [0usize; 6];
    for g in [cyclic(5), dihedral(5)] {
        let cocycles = test_cocycles(&g, 4, 71);
        ensure!(cocycles.len() >= 2, "fewer than two cocycles for {}", g.name());
        for (d, s) in [(&f8, "5/1"), (&f8, "-10/3"), (&chain, "5/1,0/1,2/1")] {
            let s = surgery(d, s);
            let pres = d.wirtinger();
            let survivors = surgery_filter(&enumerate_colorings(&pres, &g), &pres, &g, &s.coefficients).unwrap();
            let engines: Vec<Engine> = cocycles.iter().map(|a| Engine::new(a.clone()).unwrap()).collect();
            for eng in &engines {
                for rep in &survivors {
                    let v = eng.closed_value(&s, &pres, rep).unwrap();
                    for h in g.elements() {
                        let c = rep.coloring.conjugate(&g, h);
                        let r2 = surgery_extension(&c, &pres, &g, &s.coefficients).unwrap().unwrap();
                        ensure!(eng.closed_value(&s, &pres, &r2).unwrap() == v, "conjugation changes F");
                        counts[0] += 1;
                    }
                }
            }
            for i in 0..cocycles.len() {
                for j in i + 1..cocycles.len() {
                    if !is_coboundary(&cocycles[i].add(&cocycles[j].neg())).unwrap() {
                        continue;
                    }
                    for rep in &survivors {
                        ensure!(
                            engines[i].closed_value(&s, &pres, rep).unwrap()
                                == engines[j].closed_value(&s, &pres, rep).unwrap(),
                            "cohomologous cocycles disagree"
                        );
                        counts[1] += 1;
                    }
                }
            }
        }
        for alpha in &cocycles {
            for p in [2i64, 3, 5, 7, 10] {
                for q in 1..p {
                    if p.gcd(&q) != 1 {
                        continue;
                    }
                    let base = dw(alpha, &surgery(&unknot(), &format!("{p}/{q}")));
                    ensure!(same_dw(&base, &dw(alpha, &surgery(&unknot(), &format!("{p}/{}", q + p)))), "q → q+p");
                    let qi = (1..p).find(|x| (x * q) % p == 1).unwrap();
                    ensure!(same_dw(&base, &dw(alpha, &surgery(&unknot(), &format!("{p}/{qi}")))), "qq' ≡ 1");
                    let mirror = dw(alpha, &surgery(&unknot(), &format!("{p}/{}", -q)));
                    ensure!((mirror.total - base.total.conj()).norm() < 1e-12, "mirror L({p},{q})");
                    counts[2] += 1;
                }
            }
            for s in ["1/0", "5/1", "-5/2", "10/3"] {
                let base = surgery(&f8, s);
                let r = dw(alpha, &base);
                for e in ["1", "-1"] {
                    let blown = parse_diagram(&format!("{f8}cup ccw 0\ncap 0\n")).unwrap();
                    ensure!(same_dw(&r, &dw(alpha, &surgery(&blown, &format!("{s},{e}")))), "blow-up {s},{e}");
                    counts[3] += 1;
                }
                let m = dw(alpha, &base.orientation_reversed());
                ensure!((m.total - r.total.conj()).norm() < 1e-12, "mirror figure-eight {s}");
                counts[4] += 1;
            }
        }
        counts[5] += cocycles.len();
    }
    pass(format!(
        "{} conjugation checks, {} cohomologous-pair checks, {} lens presentations (q+p, q', mirror), {} blow-ups, \
         {} mirror surgeries, {} cocycles over Z/5 and D5",
        counts[0], counts[1], counts[2], counts[3], counts[4], counts[5]
    ))
}

fn c8_robustness() -> Outcome {
    let g = dihedral(5);
    let cocycles = test_cocycles(&g, 2, 88);
    let mut moves = 0;
    for name in ["figure8.morse", "chain3.morse"] {
        let d = fixture(name);
        let pres = d.wirtinger();
        let cols = enumerate_colorings(&pres, &g);
        let choices: Vec<Vec<usize>> = d.components().iter().map(|c| c.arcs.clone()).collect();
        let mut combos: Vec<Vec<Option<usize>>> = vec![vec![]];
        for arcs in &choices {
            combos = combos.into_iter().flat_map(|p| arcs.iter().map(move |&a| [p.clone(), vec![Some(a)]].concat())).collect();
        }
        for alpha in &cocycles {
            let eng = Engine::new(alpha.clone()).unwrap();
            for c in &cols {
                let v = eng.exterior_value(&d, &pres, c).unwrap();
                for b in &combos {
                    let moved = d.wirtinger_with_basepoints(b).unwrap();
                    ensure!(eng.exterior_value(&d, &moved, c).unwrap() == v, "{name}: basepoint move changes value");
                    moves += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f8 = fixture("figure8.morse");
    let chain = fixture("chain3.morse");
    for trial in 0..100 {
        let d = if trial % 2 == 0 { &f8 } else { &chain };
        let cols = enumerate_colorings(&d.wirtinger(), &g);
        let c: &Coloring = &cols[rng.gen_range(0..cols.len())];
        let alpha = &cocycles[rng.gen_range(0..cocycles.len())];
        let eng = Engine::new(alpha.clone()).unwrap();
        let canonical = eng.interface_terms(d, c);
        let random = eng.interface_terms_random(d, c, &mut rng);
        ensure!(canonical.total() == random.total(), "random re-bracketing changes θ on trial {trial}");
    }
    pass(format!("{moves} basepoint relocations; 100 randomized re-bracketing paths agree with the left-comb path"))
}

fn c9_performance() -> Outcome {
    let start = Instant::now();
    let g = dihedral(5);
    let d = fixture("figure8.morse");
    let pres = d.wirtinger();
    let n = g.order();
    let mut brute = 0;
    for idx in 0..n.pow(4) {
        let c = Coloring((0..4).map(|k| GroupElem(((idx / n.pow(k)) % n) as u32)).collect());
        brute += usize::from(c.satisfies(&g, &pres.relations));
    }
    let cols = enumerate_colorings(&pres, &g);
    ensure!(brute == cols.len(), "enumeration {} vs brute force {brute}", cols.len());
    let gen = &h3_generators(&g, n as u64).unwrap()[0];
    let (alpha, _) = strongly_normalize(&gen.cocycle.scale(2)).unwrap();
    let r = dw(&alpha, &surgery(&d, "1/0"));
    ensure!(r.values == vec![(CoeffValue::ZERO, 1)], "S³ values wrong");
    ensure!((r.total - 0.1).norm() < 1e-15, "dw total {}", r.total);
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.2}s");
    pass(format!("{brute} colorings (brute force over 10⁴ agrees), dw = 1/10, {secs:.2}s including cohomology"))
}

fn main() {
    let groups = criterion_groups();
    let mut found = Vec::new();
    let mut lines: Vec<(&str, Outcome, f64)> = Vec::new();
    let mut run = |title: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        lines.push((title, o, t.elapsed().as_secs_f64()));
    };
    run("cocycle core", &mut || c1_cocycle_core(&groups));
    run("strong normalization", &mut || c2_normalization(&groups, &mut found));
    run("lemma identities", &mut || c3_lemma(&found));
    run("epsilon calculus", &mut || c4_epsilon(&found));
    run("reference vectors", &mut || c5_reference_vectors(&found));
    run("closed-manifold sanity", &mut || c6_closed_sanity());
    run("invariance suite", &mut || c7_invariance());
    run("basepoint and path robustness", &mut || c8_robustness());
    run("performance", &mut || c9_performance());

    let mut failed = false;
    for (i, (title, o, secs)) in lines.iter().enumerate() {
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Deviation => "DEVIATION",
            Status::Fail => {
                failed = true;
                "FAIL"
            }
        };
        println!("criterion {} [{tag}] {title} ({secs:.1}s): {}", i + 1, o.detail);
    }
    if failed {
        std::process::exit(1);
    }
}
