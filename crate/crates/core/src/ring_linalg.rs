//! Exact linear algebra over GF(2), Z_N and Z_2N.
//!
//! Row-echelon forms, the Howell form over a residue ring, kernels and
//! linear congruence solving. Matrices are small (tens of columns), so
//! everything is dense and uses machine integers.

use crate::error::{Error, Result};

/// Dense matrix over `Z_modulus`, row-major, every entry in `[0, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(Self { rows, cols, modulus, data: vec![0; rows * cols] })
    }

    /// Builds a matrix from signed rows, reducing every entry.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], cols: usize, modulus: u64) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols, modulus)?;
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = reduce(v, modulus);
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self> {
        let mut m = Self::zeros(n, n, modulus)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
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

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = reduce(v, self.modulus);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Column index of the first nonzero entry of row `i`.
    pub fn pivot(&self, i: usize) -> Option<usize> {
        self.row(i).iter().position(|&v| v != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `xᵀ · self`, reduced.
    pub fn left_mul(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", x.len(), self.rows)));
        }
        let m = self.modulus;
        let mut out = vec![0u64; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = (*o + xi % m * a) % m;
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn push_row(&mut self, row: &[u64]) {
        debug_assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    fn retain_nonzero_rows(&mut self) {
        let cols = self.cols;
        let mut data = Vec::with_capacity(self.data.len());
        let mut rows = 0;
        for i in 0..self.rows {
            let r = &self.data[i * cols..(i + 1) * cols];
            if r.iter().any(|&v| v != 0) {
                data.extend_from_slice(r);
                rows += 1;
            }
        }
        self.data = data;
        self.rows = rows;
    }

    /// Replaces rows `a`, `b` by `(s·ra + t·rb, u·ra + v·rb)`.
    fn combine_rows(&mut self, a: usize, b: usize, s: i64, t: i64, u: i64, v: i64) {
        let m = self.modulus as i64;
        for j in 0..self.cols {
            let x = self.data[a * self.cols + j] as i64;
            let y = self.data[b * self.cols + j] as i64;
            self.data[a * self.cols + j] = (s * x + t * y).rem_euclid(m) as u64;
            self.data[b * self.cols + j] = (u * x + v * y).rem_euclid(m) as u64;
        }
    }

    fn scale_row(&mut self, i: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let e = &mut self.data[i * self.cols + j];
            *e = *e * c % m;
        }
    }

    /// `row_i -= c · row_k`.
    fn sub_row(&mut self, i: usize, k: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let rk = self.data[k * self.cols + j];
            let e = &mut self.data[i * self.cols + j];
            *e = (*e + m - c % m * rk % m) % m;
        }
    }
}

pub fn reduce(v: i64, modulus: u64) -> u64 {
    v.rem_euclid(modulus as i64) as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = xgcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

/// A unit `u` of `Z_m` with `u·a ≡ gcd(a, m) (mod m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    (1..m).find(|&u| gcd(u, m) == 1 && u * a % m == g).expect("a normalizing unit always exists")
}

/// Reduced row echelon form over GF(2). Zero rows are kept at the bottom.
pub fn rref_gf2(m: &ModMatrix) -> Result<(ModMatrix, Vec<usize>)> {
    if m.modulus != 2 {
        return Err(Error::InvalidModulus(m.modulus));
    }
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| a.get(i, c) == 1) else { continue };
        a.swap_rows(r, p);
        for i in 0..a.rows {
            if i != r && a.get(i, c) == 1 {
                a.sub_row(i, r, 1);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok((a, pivots))
}

/// Howell form: the unique echelon basis of the row module over `Z_modulus`.
/// Zero rows are dropped.
pub fn howell_form(m: &ModMatrix) -> ModMatrix {
    let modulus = m.modulus;
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r >= a.rows {
            break;
        }
        // Gather the gcd of column c (rows r..) into row r.
        let mut i = r + 1;
        while i < a.rows {
            let y = a.get(i, c);
            if y != 0 {
                let x = a.get(r, c);
                if x == 0 {
                    a.swap_rows(r, i);
                } else {
                    let (g, s, t) = xgcd(x as i64, y as i64);
                    let (u, v) = (-(y as i64 / g), x as i64 / g);
                    a.combine_rows(r, i, s, t, u, v);
                }
            }
            i += 1;
        }
        if a.get(r, c) == 0 {
            continue;
        }
        let unit = normalizing_unit(a.get(r, c), modulus);
        a.scale_row(r, unit);
        let g = a.get(r, c);
        for i in 0..r {
            let q = a.get(i, c) / g;
            if q != 0 {
                a.sub_row(i, r, q);
            }
        }
        let ann: Vec<u64> = a.row(r).iter().map(|&v| v * (modulus / g) % modulus).collect();
        if ann.iter().any(|&v| v != 0) {
            a.push_row(&ann);
        }
        r += 1;
    }
    a.retain_nonzero_rows();
    a
}

/// Reduces `v` against a matrix in Howell form. Returns the remainder and the
/// multipliers `q` with `v = qᵀ·h + remainder`.
pub fn reduce_by_howell(h: &ModMatrix, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let m = h.modulus;
    let mut rem: Vec<u64> = v.iter().map(|&x| x % m).collect();
    let mut q = vec![0u64; h.rows];
    for i in 0..h.rows {
        let Some(c) = h.pivot(i) else { continue };
        let g = h.get(i, c);
        let k = rem[c] / g;
        if k != 0 {
            q[i] = k;
            for (x, &hv) in rem.iter_mut().zip(h.row(i)) {
                *x = (*x + m - k * hv % m) % m;
            }
        }
    }
    (rem, q)
}

/// True iff `v` lies in the row module of `m`.
pub fn span_contains(m: &ModMatrix, v: &[u64]) -> bool {
    let h = howell_form(m);
    reduce_by_howell(&h, v).0.iter().all(|&x| x == 0)
}

/// `[a | I]`, the bookkeeping matrix used by kernel and solve.
fn augmented(a: &ModMatrix) -> ModMatrix {
    let cols = a.cols + a.rows;
    let mut aug = ModMatrix { rows: a.rows, cols, modulus: a.modulus, data: vec![0; a.rows * cols] };
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.data[i * cols + j] = a.get(i, j);
        }
        aug.data[i * cols + a.cols + i] = 1;
    }
    aug
}

/// Generators of the left kernel `{x : xᵀ·a = 0}` as rows.
pub fn left_kernel(a: &ModMatrix) -> ModMatrix {
    let h = howell_form(&augmented(a));
    let mut out = ModMatrix { rows: 0, cols: a.rows, modulus: a.modulus, data: Vec::new() };
    for i in 0..h.rows {
        if h.row(i)[..a.cols].iter().all(|&v| v == 0) {
            out.push_row(&h.row(i)[a.cols..]);
        }
    }
    out
}

/// Solves `xᵀ·a = b` over `Z_modulus`. Returns `None` when no solution exists.
pub fn solve_linear_mod(a: &ModMatrix, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if b.len() != a.cols {
        return Err(Error::Dimension(format!("right-hand side has {} entries, matrix has {} columns", b.len(), a.cols)));
    }
    let m = a.modulus;
    let h = howell_form(&augmented(a));
    let mut v = vec![0u64; a.cols + a.rows];
    for (x, &y) in v.iter_mut().zip(b) {
        *x = y % m;
    }
    let (rem, _) = reduce_by_howell(&h, &v);
    if rem[..a.cols].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    Ok(Some(rem[a.cols..].iter().map(|&x| (m - x) % m).collect()))
}

/// Reusable solver for `xᵀ·a = b` with many right-hand sides.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    howell: ModMatrix,
    rows: usize,
    cols: usize,
}

impl LinearSolver {
    pub fn new(a: &ModMatrix) -> Self {
        Self { howell: howell_form(&augmented(a)), rows: a.rows, cols: a.cols }
    }

    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let m = self.howell.modulus;
        let mut v = vec![0u64; self.cols + self.rows];
        for (x, &y) in v.iter_mut().zip(b) {
            *x = y % m;
        }
        let (rem, _) = reduce_by_howell(&self.howell, &v);
        if rem[..self.cols].iter().any(|&x| x != 0) {
            return None;
        }
        Some(rem[self.cols..].iter().map(|&x| (m - x) % m).collect())
    }
}

/// Like [`solve_linear_mod`] but returns the lexicographically smallest solution.
pub fn solve_linear_mod_lexmin(a: &ModMatrix, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if solve_linear_mod(a, b)?.is_none() {
        return Ok(None);
    }
    let m = a.modulus;
    let mut fixed: Vec<u64> = Vec::with_capacity(a.rows);
    let mut rhs: Vec<u64> = b.iter().map(|&x| x % m).collect();
    for i in 0..a.rows {
        let rest = ModMatrix {
            rows: a.rows - i - 1,
            cols: a.cols,
            modulus: m,
            data: a.data[(i + 1) * a.cols..].to_vec(),
        };
        let mut chosen = None;
        for val in 0..m {
            let trial: Vec<u64> = rhs.iter().zip(a.row(i)).map(|(&r, &ai)| (r + m - val * ai % m) % m).collect();
            let ok = if rest.rows == 0 { trial.iter().all(|&x| x == 0) } else { solve_linear_mod(&rest, &trial)?.is_some() };
            if ok {
                chosen = Some((val, trial));
                break;
            }
        }
        let (val, trial) = chosen.ok_or_else(|| Error::Inconsistent("lexicographic solve lost feasibility".into()))?;
        fixed.push(val);
        rhs = trial;
    }
    Ok(Some(fixed))
}
