//! Solid-torus corrections: the trivialization `f_z` of a cocycle pulled back along
//! `ℤ → Γ, a ↦ zᵃ`, its skew part `ε(z; a, b)`, and SL(2,ℤ) completion of surgery
//! coefficients.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{CoeffValue, GroupElem};
use crate::bar::Cochain3;
use crate::error::{Error, Result};
use crate::linalg::{solve_mod, ModMatrix};

/// A matrix `[[a, b], [c, d]]` with `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlTwoMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SlTwoMatrix {
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }
}

/// A surgery coefficient `p/q` with `gcd(p, q) = 1`; `1/0` is the trivial filling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FramingCoefficient {
    pub p: i64,
    pub q: i64,
}

impl FramingCoefficient {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(Self { p, q })
    }

    /// The same slope with the orientation of the filling reversed.
    pub fn mirrored(&self) -> Self {
        Self { p: self.p, q: -self.q }
    }
}

impl std::fmt::Display for FramingCoefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for FramingCoefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid surgery coefficient {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.parse().map_err(|_| bad())?, 1),
        };
        Self::new(p, q)
    }
}

/// Parses `"p1/q1,p2/q2,..."`; an empty string is the empty list.
pub fn parse_surgery(s: &str) -> Result<Vec<FramingCoefficient>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

/// Completes `(p, q)` to `[[p, p'], [q, q']] ∈ SL(2,ℤ)`.
///
/// Among all completions the one with `0 ≤ p' < |p|` is chosen; for `p = 0` (so `q = ±1`)
/// the completion is `[[0, −q], [q, 0]]`.
pub fn complete_framing(p: i64, q: i64) -> Result<SlTwoMatrix> {
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    if p == 0 {
        return Ok(SlTwoMatrix { a: 0, b: -q, c: q, d: 0 });
    }
    // p q' − q p' = 1  ⇔  q p' ≡ −1 (mod p)
    let m = p.abs();
    let qinv = q.rem_euclid(m).extended_gcd(&m).x;
    let pp = (-qinv).rem_euclid(m);
    let qq = (1 + q * pp) / p;
    let mat = SlTwoMatrix { a: p, b: pp, c: q, d: qq };
    debug_assert_eq!(mat.det(), 1);
    Ok(mat)
}

/// Values of `f_z(a, b)` for `a, b ∈ [−R, R]`, numerators over the cocycle denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FzTable {
    pub z: GroupElem,
    pub range: i64,
    den: u64,
    vals: Vec<u64>,
}

impl FzTable {
    #[inline]
    fn idx(&self, a: i64, b: i64) -> usize {
        let w = (2 * self.range + 1) as usize;
        (a + self.range) as usize * w + (b + self.range) as usize
    }

    fn raw(&self, a: i64, b: i64) -> u64 {
        self.vals[self.idx(a, b)]
    }

    pub fn get(&self, a: i64, b: i64) -> CoeffValue {
        CoeffValue::frac(self.raw(a, b) as i64, self.den)
    }

    /// `ε(z; a, b) = f_z(a, b) − f_z(b, a)`.
    pub fn epsilon(&self, a: i64, b: i64) -> CoeffValue {
        assert!(a.abs() <= self.range && b.abs() <= self.range, "({a},{b}) outside range {}", self.range);
        CoeffValue::frac(self.raw(a, b) as i64 - self.raw(b, a) as i64, self.den)
    }

    /// First in-range `(a, b, c)` where `f(b,c) − f(a+b,c) + f(a,b+c) − f(a,b) ≠ α(zᵃ,zᵇ,zᶜ)`.
    pub fn residual_violation(&self, alpha: &Cochain3) -> Option<(i64, i64, i64)> {
        let g = alpha.group();
        let r = self.range;
        let powers: Vec<GroupElem> = (-r..=r).map(|k| g.pow(self.z, k)).collect();
        let pw = |k: i64| powers[(k + r) as usize];
        let d = self.den as i64;
        let scale = (self.den / alpha.den()) as i64;
        for a in -r..=r {
            for b in -r..=r {
                if (a + b).abs() > r {
                    continue;
                }
                for c in -r..=r {
                    if (b + c).abs() > r {
                        continue;
                    }
                    let lhs = self.raw(b, c) as i64 - self.raw(a + b, c) as i64 + self.raw(a, b + c) as i64
                        - self.raw(a, b) as i64;
                    let rhs = alpha.raw(pw(a), pw(b), pw(c)) as i64 * scale;
                    if (lhs - rhs).rem_euclid(d) != 0 {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// Builds `f_z` on `[−R, R]²` from `f(1,·) = 0` and `f(a+1,b) = f(a,b) − α(z, zᵃ, zᵇ)`,
/// verifies the defining identity on the whole grid, and falls back to an exact linear
/// solve if verification fails.
pub fn build_fz(alpha: &Cochain3, z: GroupElem, range: i64) -> Result<FzTable> {
    let table = build_fz_recursive(alpha, z, range);
    if table.residual_violation(alpha).is_none() {
        return Ok(table);
    }
    let table = build_fz_linear(alpha, z, range)?;
    match table.residual_violation(alpha) {
        None => Ok(table),
        Some(_) => Err(Error::NoTrivialization(z.0)),
    }
}

/// The recursion alone, without verification.
pub fn build_fz_recursive(alpha: &Cochain3, z: GroupElem, range: i64) -> FzTable {
    let r = range.max(2);
    let g = alpha.group();
    let d = alpha.den() as i64;
    let powers: Vec<GroupElem> = (-r..=r).map(|k| g.pow(z, k)).collect();
    let pw = |k: i64| powers[(k + r) as usize];
    let w = (2 * r + 1) as usize;
    let mut t = FzTable { z, range: r, den: alpha.den(), vals: vec![0; w * w] };
    for a in 1..r {
        for b in -r..=r {
            let v = t.raw(a, b) as i64 - alpha.raw(z, pw(a), pw(b)) as i64;
            let i = t.idx(a + 1, b);
            t.vals[i] = v.rem_euclid(d) as u64;
        }
    }
    for a in (-r + 1..=1).rev() {
        for b in -r..=r {
            let v = t.raw(a, b) as i64 + alpha.raw(z, pw(a - 1), pw(b)) as i64;
            let i = t.idx(a - 1, b);
            t.vals[i] = v.rem_euclid(d) as u64;
        }
    }
    t
}

/// Solves the defining identity of `f_z` on the grid directly, as a linear system over
/// `ℤ/N` with `N` the cocycle denominator. Independent of the recursion.
pub fn build_fz_linear(alpha: &Cochain3, z: GroupElem, range: i64) -> Result<FzTable> {
    let r = range.max(2);
    let g = alpha.group();
    let den = alpha.den();
    let w = (2 * r + 1) as usize;
    let powers: Vec<GroupElem> = (-r..=r).map(|k| g.pow(z, k)).collect();
    let pw = |k: i64| powers[(k + r) as usize];
    let var = |a: i64, b: i64| (a + r) as usize * w + (b + r) as usize;
    let mut rows: Vec<[(usize, i64); 4]> = Vec::new();
    let mut rhs = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            if (a + b).abs() > r {
                continue;
            }
            for c in -r..=r {
                if (b + c).abs() > r {
                    continue;
                }
                rows.push([(var(b, c), 1), (var(a + b, c), -1), (var(a, b + c), 1), (var(a, b), -1)]);
                rhs.push(alpha.raw(pw(a), pw(b), pw(c)) as i64);
            }
        }
    }
    let mut m = ModMatrix::zeros(rows.len(), w * w, den);
    for (i, row) in rows.iter().enumerate() {
        for &(j, s) in row {
            m.add_to(i, j, s);
        }
    }
    let sol = solve_mod(&m, &rhs).ok_or(Error::NoTrivialization(z.0))?;
    let vals = sol.particular.iter().map(|&v| v.rem_euclid(den as i64) as u64).collect();
    Ok(FzTable { z, range: r, den, vals })
}

/// `ε(z; a, b)` for a strongly normalized cocycle, on a freshly built table.
pub fn epsilon(alpha: &Cochain3, z: GroupElem, a: i64, b: i64) -> Result<CoeffValue> {
    let range = a.abs().max(b.abs()).max((a + b).abs()) + 1;
    Ok(build_fz(alpha, z, range)?.epsilon(a, b))
}

/// Verified `f_z` tables shared across threads, keyed by `z` and rebuilt when a larger
/// range is requested.
#[derive(Debug)]
pub struct FzCache {
    alpha: Arc<Cochain3>,
    min_range: i64,
    tables: RwLock<HashMap<GroupElem, Arc<FzTable>>>,
}

impl FzCache {
    pub fn new(alpha: Arc<Cochain3>, min_range: i64) -> Self {
        Self { alpha, min_range, tables: RwLock::new(HashMap::new()) }
    }

    pub fn alpha(&self) -> &Arc<Cochain3> {
        &self.alpha
    }

    pub fn table(&self, z: GroupElem, range: i64) -> Result<Arc<FzTable>> {
        if let Some(t) = self.tables.read().expect("cache lock").get(&z) {
            if t.range >= range {
                return Ok(t.clone());
            }
        }
        let t = Arc::new(build_fz(&self.alpha, z, range.max(self.min_range))?);
        let mut guard = self.tables.write().expect("cache lock");
        let entry = guard.entry(z).or_insert_with(|| t.clone());
        if entry.range < t.range {
            *entry = t.clone();
        }
        Ok(entry.clone())
    }

    pub fn epsilon(&self, z: GroupElem, a: i64, b: i64) -> Result<CoeffValue> {
        let range = a.abs().max(b.abs()).max((a + b).abs()) + 1;
        Ok(self.table(z, range)?.epsilon(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framing_examples() {
        assert_eq!(complete_framing(1, 0).unwrap(), SlTwoMatrix { a: 1, b: 0, c: 0, d: 1 });
        assert_eq!(complete_framing(3, 1).unwrap(), SlTwoMatrix { a: 3, b: 2, c: 1, d: 1 });
        assert_eq!(complete_framing(2, 4), Err(Error::NotCoprime { p: 2, q: 4 }));
        for p in -9..=9i64 {
            for q in -9..=9i64 {
                if p.gcd(&q) == 1 {
                    let m = complete_framing(p, q).unwrap();
                    assert_eq!(m.det(), 1, "{p}/{q}");
                    assert_eq!((m.a, m.c), (p, q));
                }
            }
        }
    }

    #[test]
    fn surgery_strings() {
        let v = parse_surgery("1/0, -3/2,5").unwrap();
        assert_eq!(v, vec![FramingCoefficient { p: 1, q: 0 }, FramingCoefficient { p: -3, q: 2 }, FramingCoefficient { p: 5, q: 1 }]);
        assert!(parse_surgery("2/4").is_err());
        assert!(parse_surgery("").unwrap().is_empty());
    }
}
