//! Finite groups given by multiplication tables, and exact arithmetic in ℚ/ℤ.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on group order. Dense Γ³ tables grow cubically.
pub const DEFAULT_ORDER_CAP: usize = 64;

/// An element of a [`FiniteGroup`], stored as its index in the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElem(pub u32);

impl GroupElem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Recipe for building a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    /// Dihedral group of order `2n`.
    Dihedral { n: usize },
    Symmetric { n: usize },
    /// Quaternion group of order 8.
    Quaternion,
    Product { factors: Vec<GroupSpec> },
    Table { mul: Vec<Vec<usize>> },
}

/// A finite group with verified axioms. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: GroupElem,
    name: String,
    spec: GroupSpec,
}

impl FiniteGroup {
    /// Builds a group from a spec with the default order cap.
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        Self::with_cap(spec, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(spec: &GroupSpec, cap: usize) -> Result<Self> {
        let (table, name) = raw_table(spec, cap)?;
        let group = Self::from_table(table, name, spec.clone(), cap)?;
        Ok(group)
    }

    fn from_table(table: Vec<Vec<usize>>, name: String, spec: GroupSpec, cap: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > cap {
            return Err(Error::TooLarge(format!("group order {n} exceeds cap {cap}")));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidGroup("table is not a square table of element indices".into()));
        }
        let mul: Vec<u32> = table.iter().flatten().map(|&v| v as u32).collect();
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        let mut inv = vec![0u32; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inv[g] = h as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(Self { order: n, mul, inv, identity: GroupElem(identity as u32), name, spec })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn identity(&self) -> GroupElem {
        self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.order as u32).map(GroupElem)
    }

    #[inline]
    pub fn mul(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        GroupElem(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn inv(&self, a: GroupElem) -> GroupElem {
        GroupElem(self.inv[a.index()])
    }

    /// Product of a sequence, left to right.
    pub fn product<I: IntoIterator<Item = GroupElem>>(&self, it: I) -> GroupElem {
        it.into_iter().fold(self.identity, |acc, g| self.mul(acc, g))
    }

    /// `g^k`, with negative exponents through inverses.
    pub fn pow(&self, g: GroupElem, k: i64) -> GroupElem {
        let mut base = if k < 0 { self.inv(g) } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `h g h⁻¹`.
    pub fn conj(&self, h: GroupElem, g: GroupElem) -> GroupElem {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn elem_order(&self, g: GroupElem) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elem(&self, index: usize) -> Result<GroupElem> {
        if index < self.order {
            Ok(GroupElem(index as u32))
        } else {
            Err(Error::InvalidGroup(format!("element index {index} out of range for order {}", self.order)))
        }
    }

    /// Full multiplication table, as it would be serialized.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul[a * self.order + b] as usize).collect())
            .collect()
    }
}

fn raw_table(spec: &GroupSpec, cap: usize) -> Result<(Vec<Vec<usize>>, String)> {
    let check = |n: usize| {
        if n > cap {
            Err(Error::TooLarge(format!("group order {n} exceeds cap {cap}")))
        } else {
            Ok(())
        }
    };
    match spec {
        GroupSpec::Cyclic { n } => {
            if *n == 0 {
                return Err(Error::InvalidGroup("cyclic group needs n >= 1".into()));
            }
            check(*n)?;
            let t = (0..*n).map(|a| (0..*n).map(|b| (a + b) % n).collect()).collect();
            Ok((t, format!("Z/{n}")))
        }
        GroupSpec::Dihedral { n } => {
            if *n == 0 {
                return Err(Error::InvalidGroup("dihedral group needs n >= 1".into()));
            }
            check(2 * n)?;
            // element r^i s^f has index f*n + i
            let n = *n;
            let t = (0..2 * n)
                .map(|a| {
                    let (fa, ra) = (a / n, a % n);
                    (0..2 * n)
                        .map(|b| {
                            let (fb, rb) = (b / n, b % n);
                            let r = if fa == 1 { (ra + n - rb) % n } else { (ra + rb) % n };
                            (fa ^ fb) * n + r
                        })
                        .collect()
                })
                .collect();
            Ok((t, format!("D{n}")))
        }
        GroupSpec::Symmetric { n } => {
            if *n == 0 {
                return Err(Error::InvalidGroup("symmetric group needs n >= 1".into()));
            }
            let order: usize = (1..=*n).product();
            check(order)?;
            let perms = permutations(*n);
            let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed under composition");
            // (a*b)(i) = a(b(i))
            let t = perms
                .iter()
                .map(|a| perms.iter().map(|b| index(&b.iter().map(|&i| a[i]).collect())).collect())
                .collect();
            Ok((t, format!("S{n}")))
        }
        GroupSpec::Quaternion => {
            // ±1, ±i, ±j, ±k encoded as sign*4 + unit
            let unit_mul = |a: usize, b: usize| -> (bool, usize) {
                match (a, b) {
                    (0, x) | (x, 0) => (false, x),
                    (x, y) if x == y => (true, 0),
                    (1, 2) => (false, 3),
                    (2, 3) => (false, 1),
                    (3, 1) => (false, 2),
                    (2, 1) => (true, 3),
                    (3, 2) => (true, 1),
                    (1, 3) => (true, 2),
                    _ => unreachable!(),
                }
            };
            let t = (0..8)
                .map(|a: usize| {
                    (0..8)
                        .map(|b: usize| {
                            let (neg, u) = unit_mul(a % 4, b % 4);
                            let sign = (a / 4) ^ (b / 4) ^ (neg as usize);
                            sign * 4 + u
                        })
                        .collect()
                })
                .collect();
            Ok((t, "Q8".to_string()))
        }
        GroupSpec::Product { factors } => {
            if factors.is_empty() {
                return Ok((vec![vec![0]], "1".to_string()));
            }
            let parts = factors.iter().map(|f| raw_table(f, cap)).collect::<Result<Vec<_>>>()?;
            let order = parts.iter().try_fold(1usize, |acc, (t, _)| {
                let o = acc * t.len();
                check(o).map(|_| o)
            })?;
            let sizes: Vec<usize> = parts.iter().map(|(t, _)| t.len()).collect();
            let split = |mut x: usize| -> Vec<usize> {
                let mut out = vec![0; sizes.len()];
                for k in (0..sizes.len()).rev() {
                    out[k] = x % sizes[k];
                    x /= sizes[k];
                }
                out
            };
            let join = |xs: &[usize]| xs.iter().zip(&sizes).fold(0, |acc, (&x, &s)| acc * s + x);
            let t = (0..order)
                .map(|a| {
                    let ca = split(a);
                    (0..order)
                        .map(|b| {
                            let cb = split(b);
                            let c: Vec<usize> = (0..sizes.len()).map(|k| parts[k].0[ca[k]][cb[k]]).collect();
                            join(&c)
                        })
                        .collect()
                })
                .collect();
            let name = parts.iter().map(|(_, n)| n.as_str()).collect::<Vec<_>>().join("x");
            Ok((t, name))
        }
        GroupSpec::Table { mul } => {
            check(mul.len())?;
            Ok((mul.clone(), format!("table{}", mul.len())))
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// An element of ℚ/ℤ, kept as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffValue(Ratio<i64>);

impl CoeffValue {
    pub const ZERO: CoeffValue = CoeffValue(Ratio::new_raw(0, 1));

    pub fn zero() -> Self {
        Self::ZERO
    }

    /// The class of `num/den` modulo 1.
    pub fn from_fraction(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(Ratio::new(num, den)))
    }

    /// Fast path for `k/den` with a known positive denominator.
    pub fn frac(num: i64, den: u64) -> Self {
        let d = den as i64;
        Self(Ratio::new(num.rem_euclid(d), d))
    }

    fn reduce(r: Ratio<i64>) -> Self {
        let d = *r.denom();
        Self(Ratio::new(r.numer().rem_euclid(d), d))
    }

    pub fn num(&self) -> u64 {
        *self.0.numer() as u64
    }

    pub fn den(&self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn scale(self, k: i64) -> Self {
        let d = *self.0.denom();
        let n = ((*self.0.numer() as i128 * k as i128).rem_euclid(d as i128)) as i64;
        Self(Ratio::new(n, d))
    }

    /// Numerator over the given denominator, which must be a multiple of `den()`.
    pub fn numerator_over(&self, den: u64) -> u64 {
        debug_assert_eq!(den % self.den(), 0);
        self.num() * (den / self.den())
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl Default for CoeffValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for CoeffValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let l = a.denom().lcm(b.denom());
        let n = a.numer() * (l / a.denom()) + b.numer() * (l / b.denom());
        Self::reduce(Ratio::new(n, l))
    }
}

impl AddAssign for CoeffValue {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Neg for CoeffValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self::reduce(-self.0)
    }
}

impl Sub for CoeffValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl SubAssign for CoeffValue {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for CoeffValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for CoeffValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for CoeffValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CoeffValue {
    type Err = Error;

    /// Accepts `"n/d"` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid fraction {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                Self::from_fraction(n, d)
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Self::from_fraction(n, 1)
            }
        }
    }
}

impl Serialize for CoeffValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CoeffValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
