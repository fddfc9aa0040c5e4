//! Cochains on the bar model of BΓ in degrees 2 and 3, coboundaries, cocycle and
//! strong-normalization checks, evaluation on formal 3-chains, and the integer linear
//! algebra that produces cohomology generators and strongly normalized representatives.

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{CoeffValue, FiniteGroup, GroupElem};
use crate::error::{Error, Result};
use crate::linalg::{hermite_mod, lex_min, smith_mod, solve_mod, ModMatrix, SmithOptions};

/// Upper bound on dense matrix entries the normalization and generator searches may allocate.
pub const MATRIX_ENTRY_CAP: usize = 60_000_000;

/// A 2-cochain `Γ² → ℚ/ℤ`, stored as numerators over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    group: Arc<FiniteGroup>,
    den: u64,
    vals: Vec<u64>,
}

/// A 3-cochain `Γ³ → ℚ/ℤ`, stored as numerators over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain3 {
    group: Arc<FiniteGroup>,
    den: u64,
    vals: Vec<u64>,
}

macro_rules! cochain_common {
    ($t:ty, $arity:expr) => {
        impl $t {
            pub fn zero(group: Arc<FiniteGroup>) -> Self {
                let len = group.order().pow($arity);
                Self { group, den: 1, vals: vec![0; len] }
            }

            /// Builds a cochain from numerators over `den`, in row-major index order.
            pub fn from_numerators(group: Arc<FiniteGroup>, den: u64, vals: Vec<i64>) -> Result<Self> {
                if den == 0 {
                    return Err(Error::ZeroDenominator);
                }
                if vals.len() != group.order().pow($arity) {
                    return Err(Error::InvalidCochain(format!(
                        "expected {} entries, found {}",
                        group.order().pow($arity),
                        vals.len()
                    )));
                }
                let d = den as i64;
                let vals = vals.into_iter().map(|v| v.rem_euclid(d) as u64).collect();
                Ok(Self { group, den, vals }.reduced())
            }

            pub fn from_values(group: Arc<FiniteGroup>, values: &[CoeffValue]) -> Result<Self> {
                let den = values.iter().fold(1u64, |acc, v| acc.lcm(&v.den()));
                let nums = values.iter().map(|v| v.numerator_over(den) as i64).collect();
                Self::from_numerators(group, den, nums)
            }

            pub fn group(&self) -> &Arc<FiniteGroup> {
                &self.group
            }

            /// Common denominator of all values (the lcm of the reduced denominators).
            pub fn den(&self) -> u64 {
                self.den
            }

            pub fn numerators(&self) -> &[u64] {
                &self.vals
            }

            pub fn values(&self) -> Vec<CoeffValue> {
                self.vals.iter().map(|&v| CoeffValue::frac(v as i64, self.den)).collect()
            }

            pub fn is_zero(&self) -> bool {
                self.vals.iter().all(|&v| v == 0)
            }

            /// Same values over the smallest common denominator.
            fn reduced(mut self) -> Self {
                let g = self.vals.iter().fold(self.den, |acc, &v| acc.gcd(&v));
                if g > 1 {
                    self.den /= g;
                    for v in self.vals.iter_mut() {
                        *v /= g;
                    }
                }
                self
            }

            /// Values re-expressed over a multiple of the current denominator.
            pub fn numerators_over(&self, den: u64) -> Vec<u64> {
                assert_eq!(den % self.den, 0, "denominator {den} is not a multiple of {}", self.den);
                let k = den / self.den;
                self.vals.iter().map(|&v| v * k).collect()
            }

            pub fn add(&self, other: &Self) -> Self {
                assert!(Arc::ptr_eq(&self.group, &other.group) || self.group == other.group);
                let den = self.den.lcm(&other.den);
                let (a, b) = (self.numerators_over(den), other.numerators_over(den));
                let vals = a.iter().zip(&b).map(|(x, y)| (x + y) % den).collect();
                Self { group: self.group.clone(), den, vals }.reduced()
            }

            pub fn scale(&self, k: i64) -> Self {
                let d = self.den as i64;
                let vals = self.vals.iter().map(|&v| ((v as i64 * k).rem_euclid(d)) as u64).collect();
                Self { group: self.group.clone(), den: self.den, vals }.reduced()
            }

            pub fn neg(&self) -> Self {
                self.scale(-1)
            }
        }
    };
}

cochain_common!(Cochain2, 2);
cochain_common!(Cochain3, 3);

impl Cochain2 {
    #[inline]
    fn idx(&self, x: GroupElem, y: GroupElem) -> usize {
        x.index() * self.group.order() + y.index()
    }

    pub fn get(&self, x: GroupElem, y: GroupElem) -> CoeffValue {
        CoeffValue::frac(self.vals[self.idx(x, y)] as i64, self.den)
    }
}

impl Cochain3 {
    #[inline]
    fn idx(&self, x: GroupElem, y: GroupElem, z: GroupElem) -> usize {
        let n = self.group.order();
        (x.index() * n + y.index()) * n + z.index()
    }

    pub fn get(&self, x: GroupElem, y: GroupElem, z: GroupElem) -> CoeffValue {
        CoeffValue::frac(self.raw(x, y, z) as i64, self.den)
    }

    /// Numerator of `α(x, y, z)` over [`Cochain3::den`].
    #[inline]
    pub fn raw(&self, x: GroupElem, y: GroupElem, z: GroupElem) -> u64 {
        self.vals[self.idx(x, y, z)]
    }

    /// The standard cocycle on ℤ/n, `α_k(a,b,c) = k·a·⌊(b+c)/n⌋ / n`, with `a,b,c` the
    /// residues in `[0, n)`. Requires a cyclic group whose element `i` is the residue `i`.
    pub fn cyclic_standard(group: Arc<FiniteGroup>, k: i64) -> Result<Self> {
        let n = group.order();
        let gen = GroupElem(if n > 1 { 1 } else { 0 });
        let is_standard_cyclic = (0..n).all(|i| group.pow(gen, i as i64) == GroupElem(i as u32));
        if !is_standard_cyclic {
            return Err(Error::InvalidCochain("cyclic_standard needs the group Z/n in residue order".into()));
        }
        let n64 = n as i64;
        let mut vals = Vec::with_capacity(n * n * n);
        for a in 0..n64 {
            for b in 0..n64 {
                for c in 0..n64 {
                    vals.push(k * a * ((b + c) / n64));
                }
            }
        }
        Self::from_numerators(group, n as u64, vals)
    }
}

/// A signed formal sum of bar simplices `[x|y|z]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalChain3 {
    pub terms: Vec<(i64, [GroupElem; 3])>,
}

impl FormalChain3 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coeff: i64, triple: [GroupElem; 3]) {
        self.terms.push((coeff, triple));
    }

    pub fn extend(&mut self, other: &FormalChain3) {
        self.terms.extend_from_slice(&other.terms);
    }

    /// The five-term chain whose value on a cochain is its cocycle defect at `(x,y,z,w)`.
    pub fn cocycle_relation(g: &FiniteGroup, x: GroupElem, y: GroupElem, z: GroupElem, w: GroupElem) -> Self {
        Self {
            terms: vec![
                (1, [y, z, w]),
                (-1, [g.mul(x, y), z, w]),
                (1, [x, g.mul(y, z), w]),
                (-1, [x, y, g.mul(z, w)]),
                (1, [x, y, z]),
            ],
        }
    }
}

/// `dβ(x,y,z) = β(y,z) − β(xy,z) + β(x,yz) − β(x,y)`.
pub fn coboundary_2(beta: &Cochain2) -> Cochain3 {
    let g = beta.group.clone();
    let n = g.order();
    let d = beta.den as i64;
    let mut vals = Vec::with_capacity(n * n * n);
    for x in g.elements() {
        for y in g.elements() {
            let xy = g.mul(x, y);
            for z in g.elements() {
                let yz = g.mul(y, z);
                let v = beta.vals[beta.idx(y, z)] as i64 - beta.vals[beta.idx(xy, z)] as i64
                    + beta.vals[beta.idx(x, yz)] as i64
                    - beta.vals[beta.idx(x, y)] as i64;
                vals.push(v.rem_euclid(d));
            }
        }
    }
    Cochain3::from_numerators(g, beta.den, vals).expect("table size matches")
}

/// A 2-cochain `β` with `dβ = α`, if `α` is a coboundary.
///
/// Any such `β` can be taken with denominator dividing `|Γ|·den(α)`, because `H²(Γ; ℚ/ℤ)`
/// is annihilated by `|Γ|`; the search is a linear system modulo that number.
pub fn coboundary_preimage(a: &Cochain3) -> Result<Option<Cochain2>> {
    let g = a.group.clone();
    let n = g.order();
    if n * n * n * n * n > MATRIX_ENTRY_CAP {
        return Err(Error::TooLarge(format!("coboundary system {}x{} exceeds cap", n * n * n, n * n)));
    }
    let modulus = n as u64 * a.den;
    let scale = (modulus / a.den) as i64;
    let mut mat = ModMatrix::zeros(n * n * n, n * n, modulus);
    let mut rhs = Vec::with_capacity(n * n * n);
    let col = |x: GroupElem, y: GroupElem| x.index() * n + y.index();
    let mut r = 0;
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                mat.add_to(r, col(y, z), 1);
                mat.add_to(r, col(g.mul(x, y), z), -1);
                mat.add_to(r, col(x, g.mul(y, z)), 1);
                mat.add_to(r, col(x, y), -1);
                rhs.push(a.raw(x, y, z) as i64 * scale);
                r += 1;
            }
        }
    }
    match solve_mod(&mat, &rhs) {
        None => Ok(None),
        Some(sol) => Ok(Some(Cochain2::from_numerators(g, modulus, sol.particular)?)),
    }
}

/// Whether `α` represents the zero class.
pub fn is_coboundary(a: &Cochain3) -> Result<bool> {
    Ok(coboundary_preimage(a)?.is_some())
}

/// Numerator (over `α.den()`) of the cocycle defect at `(x,y,z,w)`.
#[inline]
fn defect_raw(a: &Cochain3, g: &FiniteGroup, x: GroupElem, y: GroupElem, z: GroupElem, w: GroupElem) -> u64 {
    let d = a.den;
    let plus = a.raw(y, z, w) + a.raw(x, g.mul(y, z), w) + a.raw(x, y, z);
    let minus = a.raw(g.mul(x, y), z, w) + a.raw(x, y, g.mul(z, w));
    (plus + 2 * d - minus) % d
}

/// First quadruple at which the cocycle identity fails, if any.
pub fn cocycle_violation(a: &Cochain3) -> Option<[GroupElem; 4]> {
    let g = a.group.as_ref();
    let els: Vec<GroupElem> = g.elements().collect();
    els.par_iter()
        .find_map_first(|&x| {
            for &y in &els {
                for &z in &els {
                    for &w in &els {
                        if defect_raw(a, g, x, y, z, w) != 0 {
                            return Some([x, y, z, w]);
                        }
                    }
                }
            }
            None
        })
}

/// Exhaustive check of the five-term cocycle identity over Γ⁴.
pub fn is_cocycle(a: &Cochain3) -> bool {
    cocycle_violation(a).is_none()
}

/// Whether `(x,y,z)` has the identity among `x, y, z, xy, yz`.
#[inline]
pub fn is_degenerate_triple(g: &FiniteGroup, x: GroupElem, y: GroupElem, z: GroupElem) -> bool {
    let e = g.identity();
    x == e || y == e || z == e || g.mul(x, y) == e || g.mul(y, z) == e
}

/// True iff `α` vanishes on every triple with the identity among `x, y, z, xy, yz`.
pub fn is_strongly_normalized(a: &Cochain3) -> bool {
    let g = a.group.as_ref();
    g.elements().all(|x| {
        g.elements().all(|y| g.elements().all(|z| !is_degenerate_triple(g, x, y, z) || a.raw(x, y, z) == 0))
    })
}

/// Triples on which a strongly normalized cochain may be nonzero.
pub fn allowed_support(g: &FiniteGroup) -> Vec<[GroupElem; 3]> {
    let mut out = Vec::new();
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                if !is_degenerate_triple(g, x, y, z) {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// `Σ cᵢ·α(tᵢ)` in ℚ/ℤ.
pub fn evaluate(a: &Cochain3, chain: &FormalChain3) -> CoeffValue {
    let d = a.den as i64;
    let mut acc = 0i64;
    for (c, [x, y, z]) in &chain.terms {
        acc = (acc + c.rem_euclid(d) * a.raw(*x, *y, *z) as i64) % d;
    }
    CoeffValue::frac(acc, a.den)
}

/// First triple violating one of the identities satisfied by strongly normalized
/// cocycles: `α(x,y,(xy)⁻¹) = 0` and
/// `α(x,y,z) = −α((xyz)⁻¹,x,y) = α(xyz,(yz)⁻¹,y) = α(xy,z,(yz)⁻¹) = −α(x,yz,z⁻¹)`.
///
/// Each identity relabels the vertices of the tetrahedron `[x|y|z]`; the sign is the sign
/// of the vertex permutation.
pub fn lemma_violation(a: &Cochain3) -> Option<[GroupElem; 3]> {
    let g = a.group.as_ref();
    let d = a.den;
    for x in g.elements() {
        for y in g.elements() {
            let xy = g.mul(x, y);
            if a.raw(x, y, g.inv(xy)) != 0 {
                return Some([x, y, g.inv(xy)]);
            }
            for z in g.elements() {
                let yz = g.mul(y, z);
                let xyz = g.mul(xy, z);
                let v = a.raw(x, y, z);
                let others = [
                    (d - a.raw(g.inv(xyz), x, y)) % d,
                    a.raw(xyz, g.inv(yz), y),
                    a.raw(xy, z, g.inv(yz)),
                    (d - a.raw(x, yz, g.inv(z))) % d,
                ];
                if others.iter().any(|&o| o != v) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

/// A cohomologous strongly normalized representative `α' = α + dβ`.
///
/// Solves for `β` with values in `(1/N)ℤ/ℤ`, `N = |Γ|·den(α)`, vanishing of `α + dβ` on
/// every degenerate triple. Among all solutions the one whose table (read in index order,
/// numerators in `[0, N)`) is lexicographically smallest is returned.
pub fn strongly_normalize(a: &Cochain3) -> Result<(Cochain3, Cochain2)> {
    if let Some(q) = cocycle_violation(a) {
        return Err(Error::InvalidCochain(format!("not a cocycle: defect at {q:?}")));
    }
    let g = a.group.clone();
    let n = g.order();
    let modulus = n as u64 * a.den;
    let degenerate: Vec<[GroupElem; 3]> = {
        let mut v = Vec::new();
        for x in g.elements() {
            for y in g.elements() {
                for z in g.elements() {
                    if is_degenerate_triple(&g, x, y, z) {
                        v.push([x, y, z]);
                    }
                }
            }
        }
        v
    };
    if degenerate.len() * n * n > MATRIX_ENTRY_CAP {
        return Err(Error::TooLarge(format!("normalization system {}x{} exceeds cap", degenerate.len(), n * n)));
    }
    let mut mat = ModMatrix::zeros(degenerate.len(), n * n, modulus);
    let mut rhs = Vec::with_capacity(degenerate.len());
    let scale = (modulus / a.den) as i64;
    let col = |x: GroupElem, y: GroupElem| x.index() * n + y.index();
    for (r, &[x, y, z]) in degenerate.iter().enumerate() {
        mat.add_to(r, col(y, z), 1);
        mat.add_to(r, col(g.mul(x, y), z), -1);
        mat.add_to(r, col(x, g.mul(y, z)), 1);
        mat.add_to(r, col(x, y), -1);
        rhs.push(-(a.raw(x, y, z) as i64) * scale);
    }
    let sol = solve_mod(&mat, &rhs).ok_or_else(|| {
        Error::NoSolution(format!("no strongly normalized representative with denominator dividing {modulus}"))
    })?;
    let hnf = hermite_mod(&sol.kernel, n * n, modulus);
    let b = lex_min(&sol.particular, &hnf, modulus);
    let beta = Cochain2::from_numerators(g, modulus, b)?;
    let normalized = a.add(&coboundary_2(&beta));
    debug_assert!(is_strongly_normalized(&normalized));
    Ok((normalized, beta))
}

/// A generator of a cyclic summand of H³(Γ; (1/m)ℤ/ℤ).
#[derive(Clone, Debug)]
pub struct H3Generator {
    pub cocycle: Cochain3,
    pub order: u64,
}

/// Cocycles whose classes generate H³(Γ; (1/m)ℤ/ℤ), one per nontrivial invariant factor.
///
/// Works in the normalized cochain complex (cochains vanishing when any argument is the
/// identity), which computes the same cohomology.
pub fn h3_generators(group: &Arc<FiniteGroup>, m: u64) -> Result<Vec<H3Generator>> {
    if m == 0 {
        return Err(Error::Validation("coefficient modulus must be positive".into()));
    }
    let g = group.as_ref();
    let n = g.order();
    if n == 1 || m == 1 {
        return Ok(Vec::new());
    }
    let k = n - 1;
    let (c2, c3, c4) = (k * k, k * k * k, k * k * k * k);
    if c4 * c3 > MATRIX_ENTRY_CAP {
        return Err(Error::TooLarge(format!("degree-3 coboundary matrix {c4}x{c3} exceeds cap")));
    }
    // non-identity elements are relabeled 0..k
    let e = g.identity();
    let nonid: Vec<GroupElem> = g.elements().filter(|&x| x != e).collect();
    let pos = |x: GroupElem| -> Option<usize> {
        if x == e {
            None
        } else {
            Some(if x.index() < e.index() { x.index() } else { x.index() - 1 })
        }
    };
    let idx3 = |x: GroupElem, y: GroupElem, z: GroupElem| -> Option<usize> { Some((pos(x)? * k + pos(y)?) * k + pos(z)?) };
    let idx2 = |x: GroupElem, y: GroupElem| -> Option<usize> { Some(pos(x)? * k + pos(y)?) };

    let mut d3 = ModMatrix::zeros(c4, c3, m);
    let mut r = 0;
    for &x in &nonid {
        for &y in &nonid {
            for &z in &nonid {
                for &w in &nonid {
                    let terms = [
                        (1, idx3(y, z, w)),
                        (-1, idx3(g.mul(x, y), z, w)),
                        (1, idx3(x, g.mul(y, z), w)),
                        (-1, idx3(x, y, g.mul(z, w))),
                        (1, idx3(x, y, z)),
                    ];
                    for (s, c) in terms {
                        if let Some(c) = c {
                            d3.add_to(r, c, s);
                        }
                    }
                    r += 1;
                }
            }
        }
    }
    let sf = smith_mod(&d3, SmithOptions { track_cols: true, track_col_inverse: true, ..Default::default() });
    let v = sf.v.expect("tracked");
    let v_inv = sf.v_inv.expect("tracked");
    let mi = m as i64;
    // kernel in w = V⁻¹x coordinates: w_i ∈ t_i·ℤ/m, a cyclic module of order k_i
    let mut kernel_coords = Vec::new();
    for i in 0..c3 {
        let d = sf.diag.get(i).copied().unwrap_or(0) as i64;
        let ki = if d == 0 { mi } else { d.gcd(&mi) };
        if ki > 1 {
            kernel_coords.push((i, mi / ki, ki));
        }
    }
    if kernel_coords.is_empty() {
        return Ok(Vec::new());
    }
    // coboundaries of normalized 2-cochains, in kernel coordinates
    let mut d2_cols: Vec<Vec<i64>> = Vec::with_capacity(c2);
    for &a in &nonid {
        for &b in &nonid {
            let mut col = vec![0i64; c3];
            // dβ for β the indicator of (a, b)
            for &x in &nonid {
                for &y in &nonid {
                    for &z in &nonid {
                        let i = idx3(x, y, z).expect("non-identity");
                        let hit = |p: GroupElem, q: GroupElem| (idx2(p, q) == idx2(a, b)) as i64;
                        col[i] += hit(y, z) - hit(g.mul(x, y), z) + hit(x, g.mul(y, z)) - hit(x, y);
                    }
                }
            }
            d2_cols.push(col);
        }
    }
    let rows = kernel_coords.len();
    let mut rel = ModMatrix::zeros(rows, rows + c2, m);
    for (row, &(_, _, ki)) in kernel_coords.iter().enumerate() {
        rel.set(row, row, ki);
    }
    for (j, col) in d2_cols.iter().enumerate() {
        let w = v_inv.mul_vec(col);
        for (row, &(i, ti, ki)) in kernel_coords.iter().enumerate() {
            if w[i] % ti != 0 {
                return Err(Error::Internal("coboundary outside the cocycle module".into()));
            }
            rel.set(row, rows + j, (w[i] / ti).rem_euclid(ki));
        }
    }
    let rf = smith_mod(&rel, SmithOptions { track_row_inverse: true, ..Default::default() });
    let u_inv = rf.u_inv.expect("tracked");
    let mut out = Vec::new();
    for l in 0..rows {
        let d = rf.diag.get(l).copied().unwrap_or(0) as i64;
        let order = if d == 0 { mi } else { d.gcd(&mi) };
        if order == 1 {
            continue;
        }
        // generator in kernel coordinates is column l of U⁻¹
        let mut w = vec![0i64; c3];
        for (row, &(i, ti, _)) in kernel_coords.iter().enumerate() {
            w[i] = (u_inv.get(row, l) * ti).rem_euclid(mi);
        }
        let x = v.mul_vec(&w);
        let mut vals = vec![0i64; n * n * n];
        for &a in &nonid {
            for &b in &nonid {
                for &c in &nonid {
                    vals[(a.index() * n + b.index()) * n + c.index()] = x[idx3(a, b, c).expect("non-identity")];
                }
            }
        }
        let cocycle = Cochain3::from_numerators(group.clone(), m, vals)?;
        out.push(H3Generator { cocycle, order: order as u64 });
    }
    Ok(out)
}
