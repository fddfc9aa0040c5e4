//! Assembly of `F(M, ρ)`: layer chains and interface associators (θ), the per-component
//! torus corrections (δ), the surgery fillings, and the Dijkgraaf–Witten sum.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{CoeffValue, FiniteGroup, GroupElem};
use crate::bar::{is_cocycle, is_strongly_normalized, Cochain3, FormalChain3};
use crate::diagram::{Event, MorseDiagram, SurgeryPresentation, WirtingerPresentation};
use crate::error::{Error, Result};
use crate::reps::{conjugacy_representatives, enumerate_colorings, surgery_extension, Coloring, PeripheralData, Survivor};
use crate::torus::FzCache;

pub const DEFAULT_FZ_RANGE: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub sign: i64,
    pub triple: [GroupElem; 3],
}

/// A signed list of α-terms together with their running total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermLedger {
    terms: Vec<Term>,
    total: CoeffValue,
}

impl Default for TermLedger {
    fn default() -> Self {
        Self::new()
    }
}

impl TermLedger {
    pub fn new() -> Self {
        Self { terms: Vec::new(), total: CoeffValue::ZERO }
    }

    pub fn push(&mut self, alpha: &Cochain3, sign: i64, triple: [GroupElem; 3]) {
        self.total += alpha.get(triple[0], triple[1], triple[2]).scale(sign);
        self.terms.push(Term { sign, triple });
    }

    pub fn append(&mut self, other: TermLedger) {
        self.total += other.total;
        self.terms.extend(other.terms);
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn total(&self) -> CoeffValue {
        self.total
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Recomputes the total from the terms.
    pub fn evaluate(&self, alpha: &Cochain3) -> CoeffValue {
        self.terms.iter().map(|t| alpha.get(t.triple[0], t.triple[1], t.triple[2]).scale(t.sign)).sum()
    }

    pub fn to_chain(&self) -> FormalChain3 {
        let mut c = FormalChain3::new();
        for t in &self.terms {
            c.push(t.sign, t.triple);
        }
        c
    }
}

/// A full binary bracketing of the leaves `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracket {
    Leaf(usize),
    Node(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    fn node(a: Bracket, b: Bracket) -> Bracket {
        Bracket::Node(Box::new(a), Box::new(b))
    }

    /// `((x₀x₁)x₂)…`, optionally with leaves `j, j+1` first merged into a pair.
    pub fn comb(n: usize, merge: Option<usize>) -> Option<Bracket> {
        let mut items: Vec<Bracket> = (0..n).map(Bracket::Leaf).collect();
        if let Some(j) = merge {
            let r = items.remove(j + 1);
            let l = std::mem::replace(&mut items[j], Bracket::Leaf(0));
            items[j] = Bracket::node(l, r);
        }
        let mut it = items.into_iter();
        let first = it.next()?;
        Some(it.fold(first, Bracket::node))
    }

    /// A uniformly random shape among the splits at each node.
    pub fn random<R: Rng + ?Sized>(lo: usize, hi: usize, rng: &mut R) -> Bracket {
        if hi - lo == 1 {
            return Bracket::Leaf(lo);
        }
        let k = rng.gen_range(lo + 1..hi);
        Bracket::node(Bracket::random(lo, k, rng), Bracket::random(k, hi, rng))
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            Bracket::Leaf(i) => vec![*i],
            Bracket::Node(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }

    fn product(&self, g: &FiniteGroup, labels: &[GroupElem]) -> GroupElem {
        match self {
            Bracket::Leaf(i) => labels[*i],
            Bracket::Node(a, b) => g.mul(a.product(g, labels), b.product(g, labels)),
        }
    }

    fn is_leaf(&self) -> bool {
        matches!(self, Bracket::Leaf(_))
    }
}

/// Labels of the holes of a horizontal slice and the bracketing of its s-triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceState {
    pub labels: Vec<GroupElem>,
    pub tree: Bracket,
}

struct PathWriter<'a> {
    g: &'a FiniteGroup,
    alpha: &'a Cochain3,
    labels: &'a [GroupElem],
    sign: i64,
    ledger: TermLedger,
}

impl PathWriter<'_> {
    /// A rotation `A(BC) → (AB)C` contributes `−α(A, B, C)`.
    fn rotate(&mut self, a: &Bracket, b: &Bracket, c: &Bracket) {
        let t = [a.product(self.g, self.labels), b.product(self.g, self.labels), c.product(self.g, self.labels)];
        self.ledger.push(self.alpha, -self.sign, t);
    }

    fn to_left_comb(&mut self, t: Bracket) -> Bracket {
        match t {
            Bracket::Leaf(_) => t,
            Bracket::Node(l, r) => {
                let mut l = self.to_left_comb(*l);
                let mut r = *r;
                while let Bracket::Node(b, c) = r {
                    self.rotate(&l, &b, &c);
                    l = self.to_left_comb(Bracket::node(l, *b));
                    r = *c;
                }
                Bracket::node(l, r)
            }
        }
    }

    /// Rotates at a uniformly chosen eligible node until the tree is a left comb.
    fn to_left_comb_random<R: Rng + ?Sized>(&mut self, mut t: Bracket, rng: &mut R) -> Bracket {
        loop {
            let n = count_rotatable(&t);
            if n == 0 {
                return t;
            }
            let mut k = rng.gen_range(0..n);
            t = self.rotate_nth(t, &mut k);
        }
    }

    fn rotate_nth(&mut self, t: Bracket, k: &mut usize) -> Bracket {
        match t {
            Bracket::Leaf(_) => t,
            Bracket::Node(a, r) => {
                if !r.is_leaf() {
                    if *k == 0 {
                        let Bracket::Node(b, c) = *r else { unreachable!() };
                        self.rotate(&a, &b, &c);
                        *k = usize::MAX;
                        return Bracket::node(Bracket::Node(a, b), *c);
                    }
                    *k -= 1;
                }
                let a = self.rotate_nth(*a, k);
                let r = if *k == usize::MAX { *r } else { self.rotate_nth(*r, k) };
                Bracket::node(a, r)
            }
        }
    }
}

fn count_rotatable(t: &Bracket) -> usize {
    match t {
        Bracket::Leaf(_) => 0,
        Bracket::Node(a, b) => usize::from(!b.is_leaf()) + count_rotatable(a) + count_rotatable(b),
    }
}

/// Walks `tree` to the left comb and records the associators, with all signs multiplied by `sign`.
pub fn comb_path(g: &FiniteGroup, alpha: &Cochain3, labels: &[GroupElem], tree: &Bracket, sign: i64) -> TermLedger {
    let mut w = PathWriter { g, alpha, labels, sign, ledger: TermLedger::new() };
    w.to_left_comb(tree.clone());
    w.ledger
}

fn comb_path_random<R: Rng + ?Sized>(
    g: &FiniteGroup,
    alpha: &Cochain3,
    labels: &[GroupElem],
    tree: &Bracket,
    sign: i64,
    rng: &mut R,
) -> TermLedger {
    let mut w = PathWriter { g, alpha, labels, sign, ledger: TermLedger::new() };
    w.to_left_comb_random(tree.clone(), rng);
    w.ledger
}

fn check_states(lower: &InterfaceState, upper: &InterfaceState) -> Result<()> {
    let n = lower.labels.len();
    let ok = lower.labels == upper.labels
        && lower.tree.leaves() == (0..n).collect::<Vec<_>>()
        && upper.tree.leaves() == (0..n).collect::<Vec<_>>();
    if ok {
        Ok(())
    } else {
        Err(Error::LabelMismatch(format!("interface states {:?} and {:?} do not share holes", lower.labels, upper.labels)))
    }
}

/// Associators along the path `lower → left comb → upper`.
pub fn interface_theta(g: &FiniteGroup, alpha: &Cochain3, lower: &InterfaceState, upper: &InterfaceState) -> Result<TermLedger> {
    check_states(lower, upper)?;
    let mut led = comb_path(g, alpha, &lower.labels, &lower.tree, 1);
    led.append(comb_path(g, alpha, &upper.labels, &upper.tree, -1));
    Ok(led)
}

/// Associators along a random path `lower → comb → R → comb → upper` through a random
/// intermediate bracketing `R`, each leg rotating at randomly chosen nodes.
pub fn interface_theta_random<R: Rng + ?Sized>(
    g: &FiniteGroup,
    alpha: &Cochain3,
    lower: &InterfaceState,
    upper: &InterfaceState,
    rng: &mut R,
) -> Result<TermLedger> {
    check_states(lower, upper)?;
    let labels = &lower.labels;
    let mut led = comb_path_random(g, alpha, labels, &lower.tree, 1, rng);
    if !labels.is_empty() {
        let mid = Bracket::random(0, labels.len(), rng);
        led.append(comb_path_random(g, alpha, labels, &mid, -1, rng));
        led.append(comb_path_random(g, alpha, labels, &mid, 1, rng));
    }
    led.append(comb_path_random(g, alpha, labels, &upper.tree, -1, rng));
    Ok(led)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Letter {
    P(i64),
    Q(i64),
}

use Letter::{P, Q};

type Template = &'static [(i64, [&'static [Letter]; 3])];

const A11: Template = &[
    (-1, [&[P(-1)], &[Q(-1), P(1)], &[P(-1)]]),
    (1, [&[P(-1)], &[Q(1), P(1)], &[P(-1), Q(-1), P(1)]]),
    (1, [&[P(-1)], &[P(1)], &[P(-1)]]),
    (-1, [&[P(1)], &[P(-1)], &[Q(-1), P(1)]]),
    (1, [&[P(1)], &[P(-1)], &[Q(1), P(1)]]),
    (-1, [&[Q(-1)], &[P(1)], &[P(-1)]]),
    (-1, [&[Q(1)], &[Q(-1)], &[P(1)]]),
    (1, [&[Q(1)], &[P(1)], &[P(-1), Q(-1), P(1)]]),
];

const A01: Template = &[
    (1, [&[P(-1)], &[P(1)], &[Q(1), P(-1)]]),
    (-1, [&[P(-1)], &[P(1)], &[P(-1)]]),
    (-1, [&[P(1)], &[Q(-1), P(-1)], &[P(1)]]),
    (1, [&[P(1)], &[Q(1), P(-1)], &[P(1), Q(-1), P(-1)]]),
    (-1, [&[Q(-1)], &[P(-1)], &[P(1)]]),
    (-1, [&[Q(1)], &[Q(-1)], &[P(-1)]]),
    (1, [&[Q(1)], &[P(-1)], &[P(1), Q(-1), P(-1)]]),
    (-1, [&[P(-1)], &[P(1)], &[Q(-1), P(-1)]]),
];

const B11: Template = &[
    (-1, [&[P(1)], &[P(-1)], &[Q(-1)]]),
    (1, [&[Q(-1)], &[Q(1)], &[P(1), Q(-1)]]),
    (-1, [&[Q(-1)], &[Q(1)], &[Q(-1)]]),
    (1, [&[Q(1)], &[P(1), Q(-1)], &[Q(1), P(-1), Q(-1)]]),
    (1, [&[P(1)], &[Q(-1)], &[Q(1), P(-1), Q(-1)]]),
];

const B10: Template = &[
    (-1, [&[P(1)], &[P(-1)], &[Q(1)]]),
    (1, [&[Q(-1)], &[P(1), Q(1)], &[Q(-1), P(-1), Q(1)]]),
    (1, [&[P(1)], &[Q(1)], &[Q(-1), P(-1), Q(1)]]),
    (1, [&[Q(1)], &[Q(-1)], &[P(1), Q(1)]]),
    (1, [&[Q(-1)], &[Q(1)], &[Q(-1)]]),
];

const B01: Template = &[
    (1, [&[Q(-1)], &[Q(1)], &[P(1), Q(-1)]]),
    (1, [&[Q(1)], &[P(1), Q(-1)], &[Q(1)]]),
    (1, [&[P(1)], &[Q(-1)], &[Q(1)]]),
];

const B00: Template = &[
    (1, [&[Q(-1)], &[P(1), Q(1)], &[Q(-1)]]),
    (1, [&[P(1)], &[Q(1)], &[Q(-1)]]),
    (1, [&[Q(1)], &[Q(-1)], &[P(1), Q(1)]]),
];

/// Terms of a crossing layer. `p`, `q` are the colors of the strands entering at the
/// bottom left and bottom right; `up_l`, `up_r` their directions.
pub fn crossing_terms(g: &FiniteGroup, positive: bool, up_l: bool, up_r: bool, p: GroupElem, q: GroupElem) -> Vec<(i64, [GroupElem; 3])> {
    let template: Template = match (positive, up_l, up_r) {
        (true, true, true) => A11,
        (true, false, true) => A01,
        (true, _, _) => &[],
        (false, true, true) => B11,
        (false, true, false) => B10,
        (false, false, true) => B01,
        (false, false, false) => B00,
    };
    let word = |w: &[Letter]| {
        g.product(w.iter().map(|l| match *l {
            P(e) => g.pow(p, e),
            Q(e) => g.pow(q, e),
        }))
    };
    template.iter().map(|(s, [a, b, c])| (*s, [word(a), word(b), word(c)])).collect()
}

/// The torus correction of one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDelta {
    pub component: usize,
    pub ledger: TermLedger,
    /// `ε(m; 1, w)` with `w` the writhe.
    pub epsilon: CoeffValue,
    pub m: GroupElem,
    pub l: GroupElem,
}

impl ComponentDelta {
    pub fn total(&self) -> CoeffValue {
        self.ledger.total() + self.epsilon
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExteriorValue {
    pub layers: TermLedger,
    pub interfaces: TermLedger,
    pub deltas: Vec<ComponentDelta>,
}

impl ExteriorValue {
    pub fn theta(&self) -> CoeffValue {
        self.layers.total() + self.interfaces.total()
    }

    pub fn delta(&self) -> CoeffValue {
        self.deltas.iter().map(ComponentDelta::total).sum()
    }

    pub fn total(&self) -> CoeffValue {
        self.theta() + self.delta()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DwOptions {
    pub dedup_conjugacy: bool,
    pub per_rep: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepRecord {
    pub coloring: Coloring,
    pub peripheral: PeripheralData,
    #[serde(rename = "F")]
    pub value: CoeffValue,
    /// Number of representations this record stands for.
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DwResult {
    /// Colorings of the link exterior.
    pub colorings: usize,
    /// Colorings that extend over the filling, i.e. `|Hom(π₁M, Γ)|`.
    pub survivors: usize,
    /// Distinct values of `F` with multiplicities, sorted.
    pub values: Vec<(CoeffValue, usize)>,
    /// `(1/|Γ|)·Σ exp(2πi F)`.
    pub total: Complex64,
    pub reps: Option<Vec<RepRecord>>,
}

/// The evaluation context: a strongly normalized cocycle and its `f_z` tables.
#[derive(Debug)]
pub struct Engine {
    group: Arc<FiniteGroup>,
    alpha: Arc<Cochain3>,
    fz: FzCache,
}

impl Engine {
    /// Checks that `alpha` is a strongly normalized cocycle.
    pub fn new(alpha: Cochain3) -> Result<Self> {
        Self::with_range(alpha, DEFAULT_FZ_RANGE)
    }

    pub fn with_range(alpha: Cochain3, range: i64) -> Result<Self> {
        if !is_cocycle(&alpha) {
            return Err(Error::InvalidCochain("not a cocycle".into()));
        }
        if !is_strongly_normalized(&alpha) {
            return Err(Error::InvalidCochain("cocycle is not strongly normalized".into()));
        }
        let group = alpha.group().clone();
        let alpha = Arc::new(alpha);
        Ok(Self { group, fz: FzCache::new(alpha.clone(), range), alpha })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn alpha(&self) -> &Cochain3 {
        &self.alpha
    }

    /// Labels of slice `k`: the color of a down strand, the inverse color of an up strand.
    pub fn slice_labels(&self, d: &MorseDiagram, col: &Coloring, k: usize) -> Vec<GroupElem> {
        d.level(k)
            .iter()
            .map(|&s| {
                let seg = d.segment(s);
                let c = col.color(seg.arc);
                if seg.up {
                    self.group.inv(c)
                } else {
                    c
                }
            })
            .collect()
    }

    /// Terms contributed by the layers themselves.
    pub fn layer_terms(&self, d: &MorseDiagram, col: &Coloring) -> TermLedger {
        let g = &*self.group;
        let mut led = TermLedger::new();
        for (k, ev) in d.events().iter().enumerate() {
            match *ev {
                Event::Cup { pos, .. } | Event::Cap { pos } => {
                    let (level, sign) = if matches!(ev, Event::Cup { .. }) { (k + 1, 1) } else { (k, -1) };
                    let seg = d.segment(d.level(level)[pos]);
                    if seg.up {
                        let c = col.color(seg.arc);
                        led.push(&self.alpha, sign, [c, g.inv(c), c]);
                    }
                }
                Event::CrossPos { pos } | Event::CrossNeg { pos } => {
                    let (l, r) = (d.segment(d.level(k)[pos]), d.segment(d.level(k)[pos + 1]));
                    let positive = matches!(ev, Event::CrossPos { .. });
                    for (s, t) in crossing_terms(g, positive, l.up, r.up, col.color(l.arc), col.color(r.arc)) {
                        led.push(&self.alpha, s, t);
                    }
                }
            }
        }
        led
    }

    /// The pair of interface states between layer `k` and layer `k+1`.
    pub fn interface_states(&self, d: &MorseDiagram, col: &Coloring, k: usize) -> Option<(InterfaceState, InterfaceState)> {
        let labels = self.slice_labels(d, col, k + 1);
        let top_merge = match d.events()[k] {
            Event::Cap { .. } => None,
            e => Some(e.pos()),
        };
        let bottom_merge = match d.events()[k + 1] {
            Event::Cup { .. } => None,
            e => Some(e.pos()),
        };
        let lower = Bracket::comb(labels.len(), top_merge)?;
        let upper = Bracket::comb(labels.len(), bottom_merge)?;
        Some((InterfaceState { labels: labels.clone(), tree: lower }, InterfaceState { labels, tree: upper }))
    }

    /// Associators at every interface between consecutive layers.
    pub fn interface_terms(&self, d: &MorseDiagram, col: &Coloring) -> TermLedger {
        let mut led = TermLedger::new();
        for k in 0..d.events().len().saturating_sub(1) {
            if let Some((lo, up)) = self.interface_states(d, col, k) {
                led.append(interface_theta(&self.group, &self.alpha, &lo, &up).expect("states share holes"));
            }
        }
        led
    }

    /// As [`Engine::interface_terms`], along randomized re-bracketing paths.
    pub fn interface_terms_random<R: Rng + ?Sized>(&self, d: &MorseDiagram, col: &Coloring, rng: &mut R) -> TermLedger {
        let mut led = TermLedger::new();
        for k in 0..d.events().len().saturating_sub(1) {
            if let Some((lo, up)) = self.interface_states(d, col, k) {
                led.append(interface_theta_random(&self.group, &self.alpha, &lo, &up, rng).expect("states share holes"));
            }
        }
        led
    }

    /// Glues the crossing cylinders of component `c` along its walk from the basepoint,
    /// then corrects the result to the standard torus with Seifert framing.
    pub fn component_delta(&self, d: &MorseDiagram, pres: &WirtingerPresentation, col: &Coloring, c: usize) -> Result<ComponentDelta> {
        let g = &*self.group;
        let a = &*self.alpha;
        let m = col.color(pres.meridians[c]);
        let mut led = TermLedger::new();
        let mut acc = g.identity();
        for (j, &ci) in pres.walks[c].iter().enumerate() {
            let x = &d.crossings()[ci];
            let h = g.pow(col.color(x.over_arc), x.sign);
            let (u, u2) = (col.color(x.in_arc), col.color(x.out_arc));
            if j > 0 {
                led.push(a, 1, [acc, u, h]);
                led.push(a, -1, [m, acc, h]);
                led.push(a, -1, [acc, h, u2]);
            }
            acc = g.mul(acc, h);
        }
        let w = pres.writhes[c];
        let l = g.mul(acc, g.pow(m, -w));
        let mw = g.pow(m, w);
        led.push(a, -1, [l, m, mw]);
        led.push(a, 1, [m, l, mw]);
        led.push(a, 1, [l, mw, m]);
        let epsilon = self.fz.epsilon(m, 1, w)?;
        Ok(ComponentDelta { component: c, ledger: led, epsilon, m, l })
    }

    /// All pieces of the exterior value `F(E_L, ρ)(⊔ −ξ^st)`.
    pub fn exterior(&self, d: &MorseDiagram, pres: &WirtingerPresentation, col: &Coloring) -> Result<ExteriorValue> {
        let deltas = (0..d.num_components()).map(|c| self.component_delta(d, pres, col, c)).collect::<Result<_>>()?;
        Ok(ExteriorValue { layers: self.layer_terms(d, col), interfaces: self.interface_terms(d, col), deltas })
    }

    pub fn exterior_value(&self, d: &MorseDiagram, pres: &WirtingerPresentation, col: &Coloring) -> Result<CoeffValue> {
        Ok(self.exterior(d, pres, col)?.total())
    }

    /// `F(M, ρ)`: the exterior value plus `ε(zᵢ; −qᵢ, pᵢ)` for every filling.
    pub fn closed_value(&self, surgery: &SurgeryPresentation, pres: &WirtingerPresentation, rep: &Survivor) -> Result<CoeffValue> {
        let ext = self.exterior(&surgery.diagram, pres, &rep.coloring)?;
        let mut total = ext.total();
        for (i, (img, c)) in rep.peripheral.iter().zip(&surgery.coefficients).enumerate() {
            if img.l != ext.deltas[i].l {
                return Err(Error::Internal(format!("longitude mismatch on component {i}")));
            }
            let z = img.z.ok_or_else(|| Error::Internal(format!("missing core element on component {i}")))?;
            total += self.fz.epsilon(z, -c.q, c.p)?;
        }
        Ok(total)
    }

    /// The Dijkgraaf–Witten invariant together with the exact multiset of `F` values.
    pub fn dw_invariant(&self, surgery: &SurgeryPresentation, opts: DwOptions) -> Result<DwResult> {
        let g = &*self.group;
        let pres = surgery.diagram.wirtinger();
        let colorings = enumerate_colorings(&pres, g);
        let survivors: Vec<Survivor> = colorings
            .par_iter()
            .map(|c| surgery_extension(c, &pres, g, &surgery.coefficients))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let weighted: Vec<(Survivor, usize)> = if opts.dedup_conjugacy {
            let reps = conjugacy_representatives(&survivors.iter().map(|s| s.coloring.clone()).collect::<Vec<_>>(), g);
            reps.into_iter()
                .map(|(c, w)| {
                    let s = surgery_extension(&c, &pres, g, &surgery.coefficients)?
                        .ok_or_else(|| Error::Internal("conjugate of a survivor does not extend".into()))?;
                    Ok((s, w))
                })
                .collect::<Result<_>>()?
        } else {
            survivors.iter().cloned().map(|s| (s, 1)).collect()
        };
        let values: Vec<CoeffValue> =
            weighted.par_iter().map(|(s, _)| self.closed_value(surgery, &pres, s)).collect::<Result<_>>()?;
        let mut hist: BTreeMap<CoeffValue, usize> = BTreeMap::new();
        for ((_, w), v) in weighted.iter().zip(&values) {
            *hist.entry(*v).or_default() += w;
        }
        let total = hist
            .iter()
            .map(|(v, &mult)| Complex64::from_polar(mult as f64, TAU * v.to_f64()))
            .sum::<Complex64>()
            / g.order() as f64;
        let reps = opts.per_rep.then(|| {
            weighted
                .iter()
                .zip(&values)
                .map(|((s, w), v)| RepRecord { coloring: s.coloring.clone(), peripheral: s.peripheral.clone(), value: *v, weight: *w })
                .collect()
        });
        Ok(DwResult { colorings: colorings.len(), survivors: survivors.len(), values: hist.into_iter().collect(), total, reps })
    }
}
