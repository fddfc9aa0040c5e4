//! Representations of link groups into a finite group, as arc colorings of a Wirtinger
//! presentation, with their peripheral images and the surgery filter.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteGroup, GroupElem};
use crate::diagram::{Relation, WirtingerPresentation};
use crate::error::{Error, Result};
use crate::torus::{complete_framing, FramingCoefficient};

/// A color for every arc, indexed by arc id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(pub Vec<GroupElem>);

impl Coloring {
    pub fn color(&self, arc: usize) -> GroupElem {
        self.0[arc]
    }

    /// Whether every relation `out = over^(−s)·in·over^(s)` holds.
    pub fn satisfies(&self, g: &FiniteGroup, relations: &[Relation]) -> bool {
        relations.iter().all(|r| relation_holds(g, r, &self.0))
    }

    /// Conjugates every arc color by `h`.
    pub fn conjugate(&self, g: &FiniteGroup, h: GroupElem) -> Coloring {
        Coloring(self.0.iter().map(|&x| g.conj(h, x)).collect())
    }
}

fn relation_holds(g: &FiniteGroup, r: &Relation, c: &[GroupElem]) -> bool {
    let o = c[r.over_arc];
    c[r.out_arc] == g.product([g.pow(o, -r.sign), c[r.in_arc], g.pow(o, r.sign)])
}

/// Images of the meridian and Seifert longitude of each component, and the core element
/// of the filling when one has been computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralImage {
    pub m: GroupElem,
    pub l: GroupElem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<GroupElem>,
}

pub type PeripheralData = Vec<PeripheralImage>;

struct Search<'a> {
    g: &'a FiniteGroup,
    pres: &'a WirtingerPresentation,
    /// Relations touching each arc.
    touching: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Fills in every color forced by the relations; `false` on a contradiction.
    fn propagate(&self, c: &mut [Option<GroupElem>], start: usize) -> bool {
        let g = self.g;
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for &ri in &self.touching[a] {
                let r = &self.pres.relations[ri];
                let Some(o) = c[r.over_arc] else { continue };
                let (fwd, back) = (g.pow(o, r.sign), g.pow(o, -r.sign));
                let implied = match (c[r.in_arc], c[r.out_arc]) {
                    (Some(i), Some(out)) => {
                        if g.product([back, i, fwd]) != out {
                            return false;
                        }
                        None
                    }
                    (Some(i), None) => Some((r.out_arc, g.product([back, i, fwd]))),
                    (None, Some(out)) => Some((r.in_arc, g.product([fwd, out, back]))),
                    (None, None) => None,
                };
                if let Some((arc, v)) = implied {
                    c[arc] = Some(v);
                    stack.push(arc);
                }
            }
        }
        true
    }

    fn run(&self, c: &mut Vec<Option<GroupElem>>, out: &mut Vec<Coloring>) {
        let Some(next) = c.iter().position(Option::is_none) else {
            let col: Vec<GroupElem> = c.iter().map(|x| x.expect("assigned")).collect();
            if self.pres.relations.iter().all(|r| relation_holds(self.g, r, &col)) {
                out.push(Coloring(col));
            }
            return;
        };
        for x in self.g.elements() {
            let mut trial = c.clone();
            trial[next] = Some(x);
            if self.propagate(&mut trial, next) {
                self.run(&mut trial, out);
            }
        }
    }
}

/// All colorings satisfying the presentation, sorted.
///
/// Arcs are chosen in id order; every choice is propagated through the relations, so only
/// one free choice per bridge is made. The first choice is split across worker threads.
pub fn enumerate_colorings(pres: &WirtingerPresentation, g: &FiniteGroup) -> Vec<Coloring> {
    if pres.arcs == 0 {
        return vec![Coloring(Vec::new())];
    }
    let mut touching = vec![Vec::new(); pres.arcs];
    for (i, r) in pres.relations.iter().enumerate() {
        for a in [r.over_arc, r.in_arc, r.out_arc] {
            if !touching[a].contains(&i) {
                touching[a].push(i);
            }
        }
    }
    let search = Search { g, pres, touching };
    let elements: Vec<GroupElem> = g.elements().collect();
    let mut all: Vec<Coloring> = elements
        .par_iter()
        .flat_map_iter(|&x| {
            let mut c = vec![None; pres.arcs];
            c[0] = Some(x);
            let mut out = Vec::new();
            if search.propagate(&mut c, 0) {
                search.run(&mut c, &mut out);
            }
            out
        })
        .collect();
    all.sort();
    all
}

/// Evaluates an `(arc, exponent)` word on a coloring.
pub fn evaluate_word(g: &FiniteGroup, coloring: &Coloring, word: &[(usize, i64)]) -> GroupElem {
    g.product(word.iter().map(|&(a, e)| g.pow(coloring.color(a), e)))
}

/// Meridian and longitude images of each component.
pub fn peripheral_images(coloring: &Coloring, pres: &WirtingerPresentation, g: &FiniteGroup) -> Result<PeripheralData> {
    pres.meridians
        .iter()
        .zip(&pres.longitude_words)
        .enumerate()
        .map(|(i, (&b, word))| {
            let m = coloring.color(b);
            let l = evaluate_word(g, coloring, word);
            if g.mul(m, l) != g.mul(l, m) {
                return Err(Error::Internal(format!("meridian and longitude of component {i} do not commute")));
            }
            Ok(PeripheralImage { m, l, z: None })
        })
        .collect()
}

/// A coloring that extends over the surgery, with its peripheral data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub coloring: Coloring,
    pub peripheral: PeripheralData,
}

/// Checks `m^p·l^q = 1` on every component and computes `z = m^{p'}·l^{q'}`.
///
/// Returns `Ok(None)` when the coloring does not extend.
pub fn surgery_extension(
    coloring: &Coloring,
    pres: &WirtingerPresentation,
    g: &FiniteGroup,
    coefficients: &[FramingCoefficient],
) -> Result<Option<Survivor>> {
    if coefficients.len() != pres.meridians.len() {
        return Err(Error::Validation(format!(
            "{} surgery coefficients for {} components",
            coefficients.len(),
            pres.meridians.len()
        )));
    }
    let mut per = peripheral_images(coloring, pres, g)?;
    for (i, (img, c)) in per.iter_mut().zip(coefficients).enumerate() {
        if g.mul(g.pow(img.m, c.p), g.pow(img.l, c.q)) != g.identity() {
            return Ok(None);
        }
        let mat = complete_framing(c.p, c.q)?;
        let z = g.mul(g.pow(img.m, mat.b), g.pow(img.l, mat.d));
        if g.pow(z, c.p) != img.l || g.pow(z, -c.q) != img.m {
            return Err(Error::CharacterizationFailure(format!(
                "component {i}: z = {} does not satisfy z^{} = l, z^{} = m",
                z, c.p, -c.q
            )));
        }
        img.z = Some(z);
    }
    Ok(Some(Survivor { coloring: coloring.clone(), peripheral: per }))
}

/// Keeps the colorings that extend over the surgery, in input order.
pub fn surgery_filter(
    colorings: &[Coloring],
    pres: &WirtingerPresentation,
    g: &FiniteGroup,
    coefficients: &[FramingCoefficient],
) -> Result<Vec<Survivor>> {
    let mut out = Vec::new();
    for c in colorings {
        if let Some(s) = surgery_extension(c, pres, g, coefficients)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// One representative per orbit of simultaneous conjugation (the smallest coloring in
/// the orbit) with the orbit size, sorted by representative.
pub fn conjugacy_representatives(colorings: &[Coloring], g: &FiniteGroup) -> Vec<(Coloring, usize)> {
    let mut reps: BTreeSet<(Coloring, usize)> = BTreeSet::new();
    for c in colorings {
        let orbit: BTreeSet<Coloring> = g.elements().map(|h| c.conjugate(g, h)).collect();
        let rep = orbit.iter().next().expect("nonempty orbit").clone();
        reps.insert((rep, orbit.len()));
    }
    reps.into_iter().collect()
}
