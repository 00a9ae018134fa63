//! Dense state-vector backend used as an oracle for every symbolic claim.
//!
//! Qubit `i` of an `n`-qubit register is bit `n-1-i` of the basis index, so
//! basis labels print in the same order as check-matrix columns.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::code::XpGroup;
use crate::error::{Error, Result};
use crate::xp::XpOperator;

pub const DENSE_LIMIT: usize = 12;
pub const TOL_STATE: f64 = 1e-9;
pub const TOL_GROUP: f64 = 1e-12;

pub type Mat2 = [[C64; 2]; 2];

/// `ω^k` with `ω = e^{iπ/N}`, computed from the reduced integer exponent.
pub fn omega_pow(precision: u32, k: i64) -> C64 {
    let m = k.rem_euclid(2 * precision as i64);
    C64::from_polar(1.0, PI * m as f64 / precision as f64)
}

pub fn bit(e: u64, n: usize, q: usize) -> u8 {
    ((e >> (n - 1 - q)) & 1) as u8
}

pub fn bits(e: u64, n: usize) -> Vec<u8> {
    (0..n).map(|q| bit(e, n, q)).collect()
}

pub fn index_of(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

pub fn bitstring(e: u64, n: usize) -> String {
    (0..n).map(|q| if bit(e, n, q) == 1 { '1' } else { '0' }).collect()
}

pub fn mat2_identity() -> Mat2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[o, z], [z, o]]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn mat2_diag(a: C64, b: C64) -> Mat2 {
    let z = C64::new(0.0, 0.0);
    [[a, z], [z, b]]
}

pub fn pauli_mat(k: usize) -> Mat2 {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    match k {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// Single-qubit factor `X^x P^z` at precision `N`, without global phase.
pub fn xp_factor(precision: u32, x: u8, z: u32) -> Mat2 {
    let pz = mat2_diag(C64::new(1.0, 0.0), omega_pow(precision, 2 * z as i64));
    if x == 1 {
        mat2_mul(&pauli_mat(1), &pz)
    } else {
        pz
    }
}

fn mat2_is_unitary(u: &Mat2, tol: f64) -> bool {
    let p = mat2_mul(&mat2_adjoint(u), u);
    let id = mat2_identity();
    (0..2).all(|i| (0..2).all(|j| (p[i][j] - id[i][j]).norm() <= tol))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub amps: Vec<C64>,
}

impl DenseState {
    pub fn zero(n: usize) -> Self {
        Self { n, amps: vec![C64::new(0.0, 0.0); 1 << n] }
    }

    pub fn basis(n: usize, e: u64) -> Self {
        let mut s = Self::zero(n);
        s.amps[e as usize] = C64::new(1.0, 0.0);
        s
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { n: self.n + other.n, amps }
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { n: self.n, amps: self.amps.iter().map(|a| a * c).collect() }
    }

    pub fn normalized(&self) -> Self {
        let nrm = self.norm();
        self.scaled(C64::new(1.0 / nrm, 0.0))
    }

    /// Applies a 2×2 matrix to qubit `q`.
    pub fn apply_single(&self, q: usize, u: &Mat2) -> Self {
        let mut out = self.clone();
        apply_single_vec(&mut out.amps, self.n, q, u);
        out
    }

    /// True iff two states agree up to a global complex scale factor.
    pub fn proportional(&self, other: &Self, tol: f64) -> bool {
        let (na, nb) = (self.norm(), other.norm());
        if na <= tol || nb <= tol {
            return na <= tol && nb <= tol;
        }
        let ov = self.inner(other).norm() / (na * nb);
        (1.0 - ov).abs() <= tol
    }
}

pub fn apply_single_vec(v: &mut [C64], n: usize, q: usize, u: &Mat2) {
    let stride = 1usize << (n - 1 - q);
    for base in 0..v.len() {
        if base & stride != 0 {
            continue;
        }
        let (a, b) = (v[base], v[base | stride]);
        v[base] = u[0][0] * a + u[0][1] * b;
        v[base | stride] = u[1][0] * a + u[1][1] * b;
    }
}

/// Applies an XP operator to a state through its one-nonzero-per-column action.
pub fn apply_xp(op: &XpOperator, s: &DenseState) -> DenseState {
    let mut out = DenseState::zero(s.n);
    for (e, a) in s.amps.iter().enumerate() {
        if *a == C64::new(0.0, 0.0) {
            continue;
        }
        let (f, ph) = op.act_on_basis(e as u64);
        out.amps[f as usize] += a * omega_pow(op.precision(), ph as i64);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub n: usize,
    /// Row-major `2^n × 2^n` entries.
    pub data: Vec<C64>,
}

impl DenseOperator {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::new(0.0, 0.0); 1 << (2 * n)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..(1 << n) {
            m.data[i * (1 << n) + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim() + j]
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let d = self.dim();
        let mut out = Self::zeros(self.n);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * d..(k + 1) * d];
                let dst = &mut out.data[i * d..(i + 1) * d];
                for (o, b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut out = Self::zeros(self.n);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Frobenius norm of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn column(&self, j: usize) -> DenseState {
        let d = self.dim();
        DenseState { n: self.n, amps: (0..d).map(|i| self.data[i * d + j]).collect() }
    }

    pub fn apply(&self, s: &DenseState) -> DenseState {
        let d = self.dim();
        let mut out = DenseState::zero(self.n);
        for i in 0..d {
            out.amps[i] = (0..d).map(|j| self.data[i * d + j] * s.amps[j]).sum();
        }
        out
    }

    /// `U_q · self` for a single-qubit `U` on qubit `q`.
    pub fn left_single(&mut self, q: usize, u: &Mat2) {
        let d = self.dim();
        let stride = 1usize << (self.n - 1 - q);
        for r in 0..d {
            if r & stride != 0 {
                continue;
            }
            for c in 0..d {
                let (a, b) = (self.data[r * d + c], self.data[(r | stride) * d + c]);
                self.data[r * d + c] = u[0][0] * a + u[0][1] * b;
                self.data[(r | stride) * d + c] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    /// `self · U_q`.
    pub fn right_single(&mut self, q: usize, u: &Mat2) {
        let d = self.dim();
        let stride = 1usize << (self.n - 1 - q);
        for r in 0..d {
            let row = &mut self.data[r * d..(r + 1) * d];
            for c in 0..d {
                if c & stride != 0 {
                    continue;
                }
                let (a, b) = (row[c], row[c | stride]);
                row[c] = a * u[0][0] + b * u[1][0];
                row[c | stride] = a * u[0][1] + b * u[1][1];
            }
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.distance(&self.adjoint()) <= tol
    }

    pub fn outer(s: &DenseState) -> Self {
        let d = s.amps.len();
        let mut m = Self::zeros(s.n);
        for i in 0..d {
            for j in 0..d {
                m.data[i * d + j] = s.amps[i] * s.amps[j].conj();
            }
        }
        m
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::SizeOverflow(n));
    }
    Ok(())
}

pub fn render_operator(op: &XpOperator) -> Result<DenseOperator> {
    check_size(op.n())?;
    let n = op.n();
    let mut m = DenseOperator::zeros(n);
    let d = 1usize << n;
    for e in 0..d {
        let (f, ph) = op.act_on_basis(e as u64);
        m.data[f as usize * d + e] = omega_pow(op.precision(), ph as i64);
    }
    Ok(m)
}

/// Dense matrix of `⊗ U_i`.
pub fn render_product(factors: &[Mat2]) -> Result<DenseOperator> {
    check_size(factors.len())?;
    let mut m = DenseOperator::identity(factors.len());
    for (q, u) in factors.iter().enumerate() {
        m.left_single(q, u);
    }
    Ok(m)
}

/// `Π = ∏(½ Σ_m S_X^m) · ∏((1/N) Σ_l S_Z^l)`, applied column by column.
pub fn projector(g: &XpGroup) -> Result<DenseOperator> {
    check_size(g.n())?;
    let n = g.n();
    let d = 1usize << n;
    let nn = g.precision();
    let (sx, sz) = g.split();
    let mut out = DenseOperator::zeros(n);
    for e in 0..d {
        let eb = bits(e as u64, n);
        let mut w = C64::new(1.0, 0.0);
        for s in &sz {
            let ph = s.diagonal_phase(&eb) as i64;
            let sum: C64 = (0..nn as i64).map(|l| omega_pow(nn, l * ph)).sum();
            w *= sum / nn as f64;
        }
        if w.norm() < 1e-14 {
            continue;
        }
        let mut col = DenseState::zero(n);
        col.amps[e] = w;
        for a in sx.iter().rev() {
            let moved = apply_xp(a, &col);
            col = DenseState { n, amps: col.amps.iter().zip(&moved.amps).map(|(u, v)| (u + v) * 0.5).collect() };
        }
        for (i, v) in col.amps.iter().enumerate() {
            out.data[i * d + e] = *v;
        }
    }
    if out.frobenius() < TOL_STATE {
        return Err(Error::EmptyCode);
    }
    Ok(out)
}

/// Every element of `⟨gens⟩`, by breadth-first closure. Fails above `limit`.
pub fn enumerate_group(gens: &[XpOperator], n: usize, precision: u32, limit: usize) -> Result<Vec<XpOperator>> {
    let id = XpOperator::identity(n, precision);
    let mut seen: HashSet<XpOperator> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.multiply(s)?;
            if seen.insert(h.clone()) {
                if seen.len() > limit {
                    return Err(Error::Unsupported(format!("group larger than {limit} elements")));
                }
                queue.push_back(h);
            }
        }
    }
    let mut v: Vec<_> = seen.into_iter().collect();
    v.sort();
    Ok(v)
}

/// `(1/|G|) Σ_{g∈G} g` over the fully enumerated group.
pub fn group_average(gens: &[XpOperator], n: usize, precision: u32, limit: usize) -> Result<DenseOperator> {
    check_size(n)?;
    let elems = enumerate_group(gens, n, precision, limit)?;
    let d = 1usize << n;
    let mut out = DenseOperator::zeros(n);
    for g in &elems {
        for e in 0..d {
            let (f, ph) = g.act_on_basis(e as u64);
            out.data[f as usize * d + e] += omega_pow(precision, ph as i64);
        }
    }
    Ok(out.scale(C64::new(1.0 / elems.len() as f64, 0.0)))
}

/// A single bond of a contraction: legs `a` and `b` of the combined register,
/// with an optional single-qubit operator applied to leg `b` first.
#[derive(Clone, Debug)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub insertion: Option<Mat2>,
}

/// `⟨Φ⁺|_{ab} (I ⊗ U_b) |V⟩` with the unnormalized `|Φ⁺⟩ = |00⟩ + |11⟩`.
pub fn self_contract(s: &DenseState, a: usize, b: usize, insertion: Option<&Mat2>) -> Result<DenseState> {
    if a == b || a >= s.n || b >= s.n {
        return Err(Error::Leg(format!("cannot contract legs {a} and {b} of a {}-leg state", s.n)));
    }
    let src = match insertion {
        Some(u) => s.apply_single(b, u),
        None => s.clone(),
    };
    let n = s.n;
    let m = n - 2;
    let keep: Vec<usize> = (0..n).filter(|&q| q != a && q != b).collect();
    let mut out = DenseState::zero(m);
    for r in 0..(1usize << m) {
        let mut acc = C64::new(0.0, 0.0);
        for v in 0..2u64 {
            let mut idx = 0u64;
            for (pos, &q) in keep.iter().enumerate() {
                idx |= (bit(r as u64, m, pos) as u64) << (n - 1 - q);
            }
            idx |= v << (n - 1 - a);
            idx |= v << (n - 1 - b);
            acc += src.amps[idx as usize];
        }
        out.amps[r] = acc;
    }
    Ok(out)
}

/// Contracts a tensor network: states are joined by Kronecker product (legs
/// numbered consecutively), then each bond is traced. Remaining legs keep
/// their relative order.
pub fn contract(states: &[DenseState], bonds: &[Bond]) -> Result<DenseState> {
    let total: usize = states.iter().map(|s| s.n).sum();
    check_size(total)?;
    let mut cur = states.iter().skip(1).fold(states[0].clone(), |acc, s| acc.kron(s));
    let mut alive: Vec<usize> = (0..total).collect();
    let mut used = HashSet::new();
    for bond in bonds {
        if !used.insert(bond.a) || !used.insert(bond.b) {
            return Err(Error::Leg(format!("leg used twice in bonds ({}, {})", bond.a, bond.b)));
        }
        let pa = alive.iter().position(|&l| l == bond.a).ok_or_else(|| Error::Leg(format!("leg {}", bond.a)))?;
        let pb = alive.iter().position(|&l| l == bond.b).ok_or_else(|| Error::Leg(format!("leg {}", bond.b)))?;
        cur = self_contract(&cur, pa, pb, bond.insertion.as_ref())?;
        alive.retain(|&l| l != bond.a && l != bond.b);
    }
    Ok(cur)
}

/// `‖a·s − s‖ ≤ tol·‖s‖`.
pub fn stabilizes(op: &XpOperator, s: &DenseState, tol: f64) -> bool {
    let t = apply_xp(op, s);
    let diff: f64 = t.amps.iter().zip(&s.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    diff <= tol * s.norm()
}

pub fn stabilizes_dense(op: &DenseOperator, s: &DenseState, tol: f64) -> bool {
    let t = op.apply(s);
    let diff: f64 = t.amps.iter().zip(&s.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    diff <= tol * s.norm()
}

/// `(⊗U_i) p (⊗U_i)†`.
pub fn lu_conjugate(p: &DenseOperator, factors: &[Mat2]) -> Result<DenseOperator> {
    if factors.len() != p.n {
        return Err(Error::Dimension(format!("{} factors for {} qubits", factors.len(), p.n)));
    }
    for (q, u) in factors.iter().enumerate() {
        if !mat2_is_unitary(u, 1e-9) {
            return Err(Error::InvalidUnitary(format!("factor on qubit {q}")));
        }
    }
    let mut out = p.clone();
    for (q, u) in factors.iter().enumerate() {
        out.left_single(q, u);
        out.right_single(q, &mat2_adjoint(u));
    }
    Ok(out)
}

/// Full XP stabilizer group of `s` at precision `N`, found by solving for
/// every operator `XP_N(x|z|p)` with `XP|s⟩ = |s⟩`. Returns `None` unless `s`
/// is an XP state, i.e. the stabilizer group fixes exactly the ray of `s`.
pub fn xp_certificate(s: &DenseState, precision: u32) -> Result<Option<XpGroup>> {
    let n = s.n;
    check_size(n)?;
    let modulus = 2 * precision as u64;
    let amax = s.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if amax == 0.0 {
        return Ok(None);
    }
    let support: Vec<u64> = (0..s.amps.len() as u64).filter(|&e| s.amps[e as usize].norm() > 1e-6 * amax).collect();
    if support.iter().any(|&e| (s.amps[e as usize].norm() - amax).abs() > TOL_STATE * amax) {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(XpGroup::empty(0, precision)));
    }
    let in_support: HashSet<u64> = support.iter().copied().collect();
    // Unknowns (z_1..z_n, p) over Z_2N; one equation p + 2z·e = k_e per support element.
    let mut a = crate::ring_linalg::ModMatrix::zeros(n + 1, support.len(), modulus)?;
    for (c, &e) in support.iter().enumerate() {
        for i in 0..n {
            a.set(i, c, 2 * bit(e, n, i) as i64);
        }
        a.set(n, c, 1);
    }
    let solver = crate::ring_linalg::LinearSolver::new(&a);
    let to_op = |x: u64, sol: &[u64]| {
        let xs: Vec<i64> = (0..n).map(|i| bit(x, n, i) as i64).collect();
        let zs: Vec<i64> = sol[..n].iter().map(|&v| (v % precision as u64) as i64).collect();
        XpOperator::new(precision, &xs, &zs, sol[n] as i64)
    };
    let step = PI / precision as f64;
    let mut gens = Vec::new();
    let mut x_basis: Vec<u64> = Vec::new();
    for &e in &support {
        let x = e ^ support[0];
        if x == 0 || in_gf2_span(&x_basis, x) {
            continue;
        }
        let mut rhs = Vec::with_capacity(support.len());
        let mut ok = true;
        for &f in &support {
            if !in_support.contains(&(f ^ x)) {
                ok = false;
                break;
            }
            let r = s.amps[(f ^ x) as usize] / s.amps[f as usize];
            let k = (r.arg() / step).round();
            if (r - C64::from_polar(1.0, k * step)).norm() > 1e-6 {
                ok = false;
                break;
            }
            rhs.push((k as i64).rem_euclid(modulus as i64) as u64);
        }
        if !ok {
            continue;
        }
        if let Some(sol) = solver.solve(&rhs) {
            gens.push(to_op(x, &sol)?);
            x_basis.push(x);
        }
    }
    let kernel = crate::ring_linalg::left_kernel(&a);
    for r in 0..kernel.rows() {
        gens.push(to_op(0, kernel.row(r))?);
    }
    let group = XpGroup::new(n, precision, gens)?.canonical_form()?;
    let table = match group.codewords() {
        Ok(t) => t,
        Err(Error::EmptyCode) => return Ok(None),
        Err(e) => return Err(e),
    };
    if table.codewords.len() != 1 {
        return Ok(None);
    }
    Ok(Some(group))
}

fn in_gf2_span(basis: &[u64], v: u64) -> bool {
    let mut rows: Vec<u64> = Vec::new();
    for &b in basis {
        let mut r = b;
        for &q in &rows {
            r = r.min(r ^ q);
        }
        if r != 0 {
            rows.push(r);
        }
    }
    let mut r = v;
    for &q in &rows {
        r = r.min(r ^ q);
    }
    r == 0
}

/// Orthonormal basis of the range of a projector, by Gram-Schmidt on its columns.
pub fn range_basis(p: &DenseOperator, tol: f64) -> Vec<DenseState> {
    let mut basis: Vec<DenseState> = Vec::new();
    for j in 0..p.dim() {
        let mut v = p.column(j);
        for b in &basis {
            let c = b.inner(&v);
            for (x, y) in v.amps.iter_mut().zip(&b.amps) {
                *x -= c * y;
            }
        }
        let nrm = v.norm();
        if nrm > tol.sqrt() {
            basis.push(v.scaled(C64::new(1.0 / nrm, 0.0)));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magic_state_is_stabilized() {
        let h = DenseState { n: 1, amps: vec![C64::new(1.0, 0.0), C64::from_polar(1.0, PI / 4.0)] };
        let op = XpOperator::new(8, &[1], &[6], 2).unwrap();
        assert!(stabilizes(&op, &h, TOL_GROUP));
        // XP_8(1|3|2) squares to ω^10·I, so it has no +1 eigenvector.
        let odd = XpOperator::new(8, &[1], &[3], 2).unwrap();
        assert_eq!(odd.power(2), XpOperator::new(8, &[0], &[0], 10).unwrap());
        assert!(!stabilizes(&odd, &h, TOL_STATE));
        let x = XpOperator::new(8, &[1], &[0], 0).unwrap();
        assert!(!stabilizes(&x, &DenseState::basis(1, 0), TOL_STATE));
    }

    #[test]
    fn bell_self_contraction_is_two() {
        let bell = DenseState { n: 2, amps: vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)] };
        let s = contract(&[bell.clone(), bell], &[Bond { a: 0, b: 2, insertion: None }, Bond { a: 1, b: 3, insertion: None }]).unwrap();
        assert_eq!(s.n, 0);
        assert!((s.amps[0] - C64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lu_rejects_non_unitary() {
        let p = DenseOperator::identity(1);
        let bad = mat2_diag(C64::new(2.0, 0.0), C64::new(1.0, 0.0));
        assert!(matches!(lu_conjugate(&p, &[bad]), Err(Error::InvalidUnitary(_))));
        assert_eq!(lu_conjugate(&p, &[mat2_identity()]).unwrap(), p);
    }
}
