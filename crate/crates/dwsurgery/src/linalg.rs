//! Exact linear algebra over ℤ/N: Smith normal form with transforms, linear solving,
//! and Hermite bases of solution lattices.
//!
//! Every routine works with representatives in `[0, N)`. Unimodular integer operations
//! stay unimodular after reduction, so elimination over ℤ/N needs no rational
//! arithmetic and entries never grow.

use num_integer::Integer;

/// Largest supported modulus. Products of two residues must fit in `i64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Dense row-major matrix of residues modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<i64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        assert!(modulus >= 1 && modulus <= MAX_MODULUS, "modulus {modulus} out of range");
        Self { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], modulus: u64) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols, modulus);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        let n = self.modulus as i64;
        self.data[i * self.cols + j] = v.rem_euclid(n);
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        let n = self.modulus as i64;
        let k = i * self.cols + j;
        self.data[k] = (self.data[k] + v.rem_euclid(n)) % n;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        let n = self.modulus as i64;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(0i64, |acc, (&a, &b)| (acc + a * b.rem_euclid(n)) % n))
            .collect()
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let n = self.modulus as i64;
        let mut out = ModMatrix::zeros(self.rows, other.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let base = i * out.cols;
                for j in 0..other.cols {
                    let v = out.data[base + j] + a * other.get(k, j);
                    out.data[base + j] = v % n;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Rows `(a, b) ← (p·a + q·b, r·a + s·b)`.
    fn combine_rows(&mut self, a: usize, b: usize, [p, q, r, s]: [i64; 4]) {
        let n = self.modulus as i64;
        let (p, q, r, s) = (p.rem_euclid(n), q.rem_euclid(n), r.rem_euclid(n), s.rem_euclid(n));
        for j in 0..self.cols {
            let x = self.data[a * self.cols + j];
            let y = self.data[b * self.cols + j];
            if x == 0 && y == 0 {
                continue;
            }
            self.data[a * self.cols + j] = (p * x + q * y) % n;
            self.data[b * self.cols + j] = (r * x + s * y) % n;
        }
    }

    /// Columns `(a, b) ← (p·a + q·b, r·a + s·b)`.
    fn combine_cols(&mut self, a: usize, b: usize, [p, q, r, s]: [i64; 4]) {
        let n = self.modulus as i64;
        let (p, q, r, s) = (p.rem_euclid(n), q.rem_euclid(n), r.rem_euclid(n), s.rem_euclid(n));
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a];
            let y = self.data[i * self.cols + b];
            if x == 0 && y == 0 {
                continue;
            }
            self.data[i * self.cols + a] = (p * x + q * y) % n;
            self.data[i * self.cols + b] = (r * x + s * y) % n;
        }
    }
}

/// Inverse of a 2×2 determinant-one integer matrix `[p q; r s]`.
fn inverse2([p, q, r, s]: [i64; 4]) -> [i64; 4] {
    [s, -q, -r, p]
}

/// Bezout combination sending `(x, y)` to `(gcd, 0)` with a determinant-one matrix.
fn bezout(x: i64, y: i64) -> [i64; 4] {
    let e = x.extended_gcd(&y);
    let g = e.gcd;
    [e.x, e.y, -y / g, x / g]
}

/// A unit `u` modulo `n` with `u·a ≡ gcd(a, n) (mod n)`.
fn normalizing_unit(a: i64, n: i64) -> i64 {
    let g = a.gcd(&n);
    let m = n / g;
    let a1 = a / g;
    // inverse of a1 modulo m, then lift to a unit modulo n
    let inv = if m == 1 { 0 } else { a1.extended_gcd(&m).x.rem_euclid(m) };
    let mut u = inv;
    while u.gcd(&n) != 1 {
        u += m;
    }
    u
}

/// Result of [`smith_mod`]: `U·A·V = diag(d)` modulo N, with each `d_i` a divisor of N
/// (zero standing for N itself) and `d_i | d_{i+1}` as ideals.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<u64>,
    /// `V`, when column tracking was requested.
    pub v: Option<ModMatrix>,
    /// `V⁻¹`, when requested.
    pub v_inv: Option<ModMatrix>,
    /// `U⁻¹`, when requested.
    pub u_inv: Option<ModMatrix>,
    /// Right-hand sides after the row operations, i.e. `U·B`.
    pub rhs: Option<ModMatrix>,
}

impl SmithForm {
    /// Number of pivots that are units or proper divisors of N (entries equal to N count as zero).
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|&&d| d != 0).count()
    }
}

/// Options for [`smith_mod`].
#[derive(Clone, Debug, Default)]
pub struct SmithOptions {
    pub track_cols: bool,
    pub track_col_inverse: bool,
    pub track_row_inverse: bool,
    pub rhs: Option<ModMatrix>,
}

/// Smith normal form over ℤ/N.
pub fn smith_mod(a: &ModMatrix, opts: SmithOptions) -> SmithForm {
    let n = a.modulus as i64;
    let mut m = a.clone();
    let mut v = opts.track_cols.then(|| ModMatrix::identity(a.cols, a.modulus));
    let mut v_inv = opts.track_col_inverse.then(|| ModMatrix::identity(a.cols, a.modulus));
    let mut u_inv = opts.track_row_inverse.then(|| ModMatrix::identity(a.rows, a.modulus));
    let mut rhs = opts.rhs;
    if let Some(b) = &rhs {
        assert_eq!(b.rows, a.rows, "rhs row count");
        assert_eq!(b.modulus, a.modulus, "rhs modulus");
    }
    let mut diag = Vec::new();

    let row_op = |m: &mut ModMatrix, rhs: &mut Option<ModMatrix>, u_inv: &mut Option<ModMatrix>, x: usize, y: usize, c: [i64; 4]| {
        m.combine_rows(x, y, c);
        if let Some(b) = rhs.as_mut() {
            b.combine_rows(x, y, c);
        }
        if let Some(ui) = u_inv.as_mut() {
            // U ← E·U, so U⁻¹ ← U⁻¹·E⁻¹; right multiplication acts on columns by the transpose.
            let [p, q, r, s] = inverse2(c);
            ui.combine_cols(x, y, [p, r, q, s]);
        }
    };
    let col_op = |m: &mut ModMatrix, v: &mut Option<ModMatrix>, v_inv: &mut Option<ModMatrix>, x: usize, y: usize, c: [i64; 4]| {
        m.combine_cols(x, y, c);
        if let Some(vv) = v.as_mut() {
            vv.combine_cols(x, y, c);
        }
        if let Some(vi) = v_inv.as_mut() {
            // V ← V·F, so V⁻¹ ← F⁻¹·V⁻¹
            let [p, q, r, s] = c;
            vi.combine_rows(x, y, [s, -r, -q, p]);
        }
    };

    let steps = a.rows.min(a.cols);
    for t in 0..steps {
        // pivot: entry generating the largest ideal
        let mut best: Option<(i64, usize, usize)> = None;
        'search: for i in t..m.rows {
            let row = &m.data[i * m.cols..(i + 1) * m.cols];
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = x.gcd(&n);
                    if best.map_or(true, |(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                        if g == 1 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        if pi != t {
            m.swap_rows(t, pi);
            if let Some(b) = rhs.as_mut() {
                b.swap_rows(t, pi);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.swap_cols(t, pi);
            }
        }
        if pj != t {
            m.swap_cols(t, pj);
            if let Some(vv) = v.as_mut() {
                vv.swap_cols(t, pj);
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.swap_rows(t, pj);
            }
        }
        loop {
            // make the pivot the ideal generator gcd(pivot, N)
            let p = m.get(t, t);
            let u = normalizing_unit(p, n);
            if u != 1 {
                let uinv = normalizing_unit_inverse(u, n);
                // scaling row t by u is the 2x2 op with rows (t,t); do it directly
                scale_row(&mut m, t, u);
                if let Some(b) = rhs.as_mut() {
                    scale_row(b, t, u);
                }
                if let Some(ui) = u_inv.as_mut() {
                    scale_col(ui, t, uinv);
                }
            }
            let p = m.get(t, t);
            let mut dirty = false;
            for i in t + 1..m.rows {
                let x = m.get(i, t);
                if x == 0 {
                    continue;
                }
                if x % p == 0 {
                    row_op(&mut m, &mut rhs, &mut u_inv, t, i, [1, 0, -(x / p), 1]);
                } else {
                    row_op(&mut m, &mut rhs, &mut u_inv, t, i, bezout(p, x));
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            let p = m.get(t, t);
            for j in t + 1..m.cols {
                let x = m.get(t, j);
                if x == 0 {
                    continue;
                }
                if x % p == 0 {
                    col_op(&mut m, &mut v, &mut v_inv, t, j, [1, 0, -(x / p), 1]);
                } else {
                    col_op(&mut m, &mut v, &mut v_inv, t, j, bezout(p, x));
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = m.get(t, t);
            let mut offender = None;
            'div: for i in (t + 1..m.rows).filter(|_| p != 1) {
                for j in t + 1..m.cols {
                    if m.get(i, j) % p != 0 {
                        offender = Some(i);
                        break 'div;
                    }
                }
            }
            match offender {
                Some(i) => row_op(&mut m, &mut rhs, &mut u_inv, t, i, [1, 1, 0, 1]),
                None => break,
            }
        }
        diag.push(m.get(t, t) as u64);
    }
    diag.resize(steps, 0);
    SmithForm { diag, v, v_inv, u_inv, rhs }
}

fn scale_row(m: &mut ModMatrix, i: usize, u: i64) {
    let n = m.modulus as i64;
    for j in 0..m.cols {
        let k = i * m.cols + j;
        m.data[k] = (m.data[k] * u) % n;
    }
}

fn scale_col(m: &mut ModMatrix, j: usize, u: i64) {
    let n = m.modulus as i64;
    for i in 0..m.rows {
        let k = i * m.cols + j;
        m.data[k] = (m.data[k] * u) % n;
    }
}

fn normalizing_unit_inverse(u: i64, n: i64) -> i64 {
    if n == 1 {
        return 0;
    }
    u.extended_gcd(&n).x.rem_euclid(n)
}

/// Solution set of `A·x ≡ b (mod N)`: a particular solution plus generators of the
/// homogeneous solutions (which together with `N·ℤⁿ` span the solution lattice).
#[derive(Clone, Debug)]
pub struct ModSolution {
    pub particular: Vec<i64>,
    pub kernel: Vec<Vec<i64>>,
}

/// Solves `A·x ≡ b (mod N)`, or returns `None` when inconsistent.
pub fn solve_mod(a: &ModMatrix, b: &[i64]) -> Option<ModSolution> {
    let n = a.modulus as i64;
    let mut rhs = ModMatrix::zeros(a.rows, 1, a.modulus);
    for (i, &x) in b.iter().enumerate() {
        rhs.set(i, 0, x);
    }
    let sf = smith_mod(a, SmithOptions { track_cols: true, rhs: Some(rhs), ..Default::default() });
    let c = sf.rhs.expect("rhs tracked");
    let v = sf.v.expect("cols tracked");
    let mut y = vec![0i64; a.cols];
    let mut kernel_y: Vec<Vec<i64>> = Vec::new();
    for i in 0..a.rows {
        let ci = c.get(i, 0);
        let d = sf.diag.get(i).copied().unwrap_or(0) as i64;
        let g = if d == 0 { n } else { d };
        if ci % g != 0 {
            return None;
        }
        if i < a.cols {
            y[i] = if d == 0 { 0 } else { ci / g };
        }
    }
    for i in 0..a.cols {
        let d = sf.diag.get(i).copied().unwrap_or(0) as i64;
        let g = if d == 0 { n } else { d };
        let step = n / g;
        if step % n != 0 || n == 1 {
            let mut e = vec![0i64; a.cols];
            e[i] = step;
            kernel_y.push(e);
        }
    }
    let apply = |w: &[i64]| v.mul_vec(w);
    Some(ModSolution { particular: apply(&y), kernel: kernel_y.iter().map(|w| apply(w)).collect() })
}

/// Triangular basis of the lattice spanned by `gens` together with `N·ℤ^dim`.
///
/// Entry `i` of the result has zeros before position `i` and a positive divisor of N at
/// position `i`; later coordinates are reduced modulo N.
pub fn hermite_mod(gens: &[Vec<i64>], dim: usize, modulus: u64) -> Vec<Vec<i64>> {
    let n = modulus as i64;
    let mut pool: Vec<Vec<i64>> = gens.iter().map(|g| g.iter().map(|x| x.rem_euclid(n)).collect()).collect();
    let mut basis = Vec::with_capacity(dim);
    for i in 0..dim {
        // h starts as N·e_i and absorbs every generator's i-th entry by Bezout steps
        let mut h = vec![0i64; dim];
        h[i] = n;
        for g in pool.iter_mut() {
            let x = g[i];
            if x == 0 {
                continue;
            }
            let [p, q, r, s] = bezout(h[i], x);
            for k in i..dim {
                let (a, b) = (h[k], g[k]);
                h[k] = p * a + q * b;
                g[k] = r * a + s * b;
            }
            for k in i + 1..dim {
                h[k] = h[k].rem_euclid(n);
                g[k] = g[k].rem_euclid(n);
            }
            debug_assert_eq!(g[i], 0);
        }
        if h[i] < 0 {
            for x in h.iter_mut() {
                *x = -*x;
            }
            for x in h.iter_mut().skip(i + 1) {
                *x = x.rem_euclid(n);
            }
        }
        // (N / d)·h has N at position i; subtracting N·e_i leaves a lattice vector for later columns
        let d = h[i];
        let mut extra: Vec<i64> = h.iter().map(|&x| (x * (n / d)).rem_euclid(n)).collect();
        extra[i] = 0;
        if extra.iter().any(|&x| x != 0) {
            pool.push(extra);
        }
        pool.retain(|g| g.iter().any(|&x| x != 0));
        basis.push(h);
    }
    basis
}

/// Lexicographically smallest representative, with entries in `[0, N)`, of `x` modulo a
/// lattice given by [`hermite_mod`].
pub fn lex_min(x: &[i64], hnf: &[Vec<i64>], modulus: u64) -> Vec<i64> {
    let n = modulus as i64;
    let mut x: Vec<i64> = x.iter().map(|v| v.rem_euclid(n)).collect();
    for (i, h) in hnf.iter().enumerate() {
        let d = h[i];
        let k = x[i].div_euclid(d);
        if k != 0 {
            for j in i..x.len() {
                x[j] = (x[j] - k * h[j]).rem_euclid(n);
            }
        }
    }
    x
}
