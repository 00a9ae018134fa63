//! Weight enumerators, distances and coset scalars by brute force over Pauli
//! strings.

use std::fmt;

use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::decoder::ProcessCoefficients;
use crate::dense::{self, DenseOperator, DenseState, Mat2};
use crate::error::{Error, Result};

/// Pauli string with symbols 0=I, 1=X, 2=Y, 3=Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub ops: Vec<u8>,
}

impl PauliString {
    /// Decodes `index = Σ ops[q]·4^{n-1-q}`.
    pub fn from_index(index: usize, n: usize) -> Self {
        Self { ops: (0..n).map(|q| ((index >> (2 * (n - 1 - q))) & 3) as u8).collect() }
    }

    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&o| o != 0).count()
    }

    /// `(x mask, z mask, number of Y)`; the operator is `i^{#Y} X^x Z^z`.
    fn masks(&self) -> (u64, u64, u32) {
        let n = self.ops.len();
        let (mut x, mut z, mut ny) = (0u64, 0u64, 0u32);
        for (q, &o) in self.ops.iter().enumerate() {
            let b = 1u64 << (n - 1 - q);
            if o == 1 || o == 2 {
                x |= b;
            }
            if o == 2 || o == 3 {
                z |= b;
            }
            if o == 2 {
                ny += 1;
            }
        }
        (x, z, ny)
    }

    pub fn factors(&self) -> Vec<Mat2> {
        self.ops.iter().map(|&o| dense::pauli_mat(o as usize)).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &o in &self.ops {
            write!(f, "{}", ['I', 'X', 'Y', 'Z'][o as usize])?;
        }
        Ok(())
    }
}

fn i_pow(k: u32) -> C64 {
    [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][(k % 4) as usize]
}

/// Sparse Pauli action: `(P v)[e ⊕ x] = i^{#Y} (−1)^{|e∧z|} v[e]`.
fn apply_pauli(x: u64, z: u64, ny: u32, v: &[C64]) -> Vec<C64> {
    let ph = i_pow(ny);
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (e, &a) in v.iter().enumerate() {
        let s = if (e as u64 & z).count_ones() % 2 == 1 { -ph } else { ph };
        out[(e as u64 ^ x) as usize] = s * a;
    }
    out
}

/// `Tr[P M] = Σ_f phase(f)·M[f, f⊕x]`.
fn pauli_trace(x: u64, z: u64, ny: u32, m: &DenseOperator) -> C64 {
    let ph = i_pow(ny);
    let mut acc = C64::new(0.0, 0.0);
    for f in 0..m.dim() {
        let s = if (f as u64 & z).count_ones() % 2 == 1 { -ph } else { ph };
        acc += s * m.get(f, (f as u64 ^ x) as usize);
    }
    acc
}

/// Enumerator coefficients indexed by weight, with the code dimension `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratorPoly {
    pub coeffs: Vec<Ratio<i64>>,
    pub k: usize,
}

impl EnumeratorPoly {
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn from_integers(coeffs: &[i64], k: usize) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| Ratio::from_integer(c)).collect(), k }
    }
}

impl fmt::Display for EnumeratorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (d, c) in self.coeffs.iter().enumerate() {
            if *c.numer() == 0 {
                continue;
            }
            let coef = if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) };
            terms.push(match d {
                0 => coef,
                1 if coef == "1" => "z".to_string(),
                1 => format!("{coef}z"),
                _ if coef == "1" => format!("z^{d}"),
                _ => format!("{coef}z^{d}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Nearest rational with denominator `2^{2n}`, reduced.
fn snap(value: f64, n: usize) -> Result<Ratio<i64>> {
    let den = 1i64 << (2 * n).min(40);
    let num = (value * den as f64).round();
    let residual = (value - num / den as f64).abs();
    if residual > 1e-6 {
        return Err(Error::Snap { value, residual });
    }
    Ok(Ratio::new(num as i64, den))
}

/// Orthonormal basis of the range of a projector, after checking it is one.
fn code_basis(p: &DenseOperator) -> Result<Vec<DenseState>> {
    if !p.is_hermitian(1e-9) {
        return Err(Error::NotProjector("not Hermitian".into()));
    }
    let basis = dense::range_basis(p, 1e-9);
    let tr = p.trace();
    if (tr - C64::new(basis.len() as f64, 0.0)).norm() > 1e-6 {
        return Err(Error::NotProjector(format!("trace {tr} differs from rank {}", basis.len())));
    }
    let mut rebuilt = DenseOperator::zeros(p.n);
    for b in &basis {
        rebuilt = rebuilt.add(&DenseOperator::outer(b));
    }
    if rebuilt.distance(p) > 1e-6 {
        return Err(Error::NotProjector("not idempotent".into()));
    }
    if basis.is_empty() {
        return Err(Error::EmptyCode);
    }
    Ok(basis)
}

/// `G_E = V† E V` for every Pauli string, in index order.
fn restricted_paulis<T: Send>(basis: &[DenseState], n: usize, f: impl Fn(usize, &[Vec<C64>]) -> T + Sync) -> Vec<T> {
    let k = basis.len();
    (0..1usize << (2 * n))
        .into_par_iter()
        .map(|idx| {
            let (x, z, ny) = PauliString::from_index(idx, n).masks();
            let mut g = vec![vec![C64::new(0.0, 0.0); k]; k];
            for (j, vj) in basis.iter().enumerate() {
                let ev = apply_pauli(x, z, ny, &vj.amps);
                for (i, vi) in basis.iter().enumerate() {
                    g[i][j] = vi.amps.iter().zip(&ev).map(|(a, b)| a.conj() * b).sum();
                }
            }
            f(idx, &g)
        })
        .collect()
}

/// `A_d = (1/K²) Σ_{wt E = d} |Tr EΠ|²` and `B_d = (1/K) Σ_{wt E = d} Tr EΠEΠ`.
pub fn enumerators(p: &DenseOperator) -> Result<(EnumeratorPoly, EnumeratorPoly)> {
    let n = p.n;
    if n > 10 {
        return Err(Error::SizeOverflow(n));
    }
    let basis = code_basis(p)?;
    let k = basis.len();
    let terms = restricted_paulis(&basis, n, |idx, g| {
        let tr: C64 = (0..g.len()).map(|i| g[i][i]).sum();
        let fro: f64 = g.iter().flatten().map(|c| c.norm_sqr()).sum();
        (PauliString::from_index(idx, n).weight(), tr.norm_sqr(), fro)
    });
    let mut a = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    for (w, ta, tb) in terms {
        a[w] += ta;
        b[w] += tb;
    }
    let kf = k as f64;
    let a = EnumeratorPoly { coeffs: a.iter().map(|v| snap(v / (kf * kf), n)).collect::<Result<_>>()?, k };
    let b = EnumeratorPoly { coeffs: b.iter().map(|v| snap(v / kf, n)).collect::<Result<_>>()?, k };
    Ok((a, b))
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `B(x, y) = K · A((x + 3y)/2, (x − y)/2)` with `A(x, y) = Σ A_d x^{n−d} y^d`.
pub fn macwilliams(a: &EnumeratorPoly) -> EnumeratorPoly {
    let n = a.n();
    let mut out = vec![Ratio::from_integer(0i64); n + 1];
    for (d, ad) in a.coeffs.iter().enumerate() {
        if *ad.numer() == 0 {
            continue;
        }
        // Coefficients in y of (x+3y)^{n-d} (x-y)^d, then divide by 2^n.
        for i in 0..=(n - d) {
            for j in 0..=d {
                let c = binomial(n - d, i) * 3i64.pow(i as u32) * binomial(d, j) * if j % 2 == 1 { -1 } else { 1 };
                out[i + j] += *ad * Ratio::new(c, 1i64 << n);
            }
        }
    }
    EnumeratorPoly { coeffs: out.into_iter().map(|c| c * Ratio::from_integer(a.k as i64)).collect(), k: a.k }
}

/// Smallest `d` with `B_d − A_d > 0`, or `n + 1` when there is none.
pub fn distance(a: &EnumeratorPoly, b: &EnumeratorPoly) -> usize {
    let n = a.n();
    (1..=n).find(|&d| b.coeffs[d] > a.coeffs[d]).unwrap_or(n + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

/// Minimum weight of a string over `{I, axis}` that preserves the code space
/// without acting on it as a global phase. Returns `n + 1` when none exists.
pub fn biased_distance(p: &DenseOperator, axis: Axis) -> Result<usize> {
    let n = p.n;
    if n > dense::DENSE_LIMIT {
        return Err(Error::SizeOverflow(n));
    }
    let basis = code_basis(p)?;
    let k = basis.len() as f64;
    let sym = match axis {
        Axis::X => 1u8,
        Axis::Z => 3u8,
    };
    let best = (1u64..1u64 << n)
        .into_par_iter()
        .filter_map(|mask| {
            let ops: Vec<u8> = (0..n).map(|q| if (mask >> (n - 1 - q)) & 1 == 1 { sym } else { 0 }).collect();
            let (x, z, ny) = PauliString { ops }.masks();
            let mut tr = C64::new(0.0, 0.0);
            let mut fro = 0.0;
            for (j, vj) in basis.iter().enumerate() {
                let ev = apply_pauli(x, z, ny, &vj.amps);
                for (i, vi) in basis.iter().enumerate() {
                    let g: C64 = vi.amps.iter().zip(&ev).map(|(a, b)| a.conj() * b).sum();
                    fro += g.norm_sqr();
                    if i == j {
                        tr += g;
                    }
                }
            }
            let preserves = (fro - k).abs() < 1e-9;
            let nontrivial = tr.norm() < k - 1e-9;
            (preserves && nontrivial).then_some(mask.count_ones() as usize)
        })
        .min();
    Ok(best.unwrap_or(n + 1))
}

fn pauli_index_trace_vector(m: &DenseOperator) -> Vec<C64> {
    let n = m.n;
    (0..1usize << (2 * n))
        .into_par_iter()
        .map(|idx| {
            let (x, z, ny) = PauliString::from_index(idx, n).masks();
            pauli_trace(x, z, ny, m)
        })
        .collect()
}

/// Applies the single-qubit superoperator `ρ ↦ Σ k_{PP'} P ρ P'` on every qubit.
pub fn apply_channel(k: &ProcessCoefficients, rho: &DenseOperator) -> DenseOperator {
    let mut cur = rho.clone();
    for q in 0..rho.n {
        let mut next = DenseOperator::zeros(rho.n);
        for (a, row) in k.k.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c.norm() < 1e-15 {
                    continue;
                }
                let mut t = cur.clone();
                t.left_single(q, &dense::pauli_mat(a));
                t.right_single(q, &dense::pauli_mat(b));
                next = next.add(&t.scale(c));
            }
        }
        cur = next;
    }
    cur
}

/// `(a, b)` with `b = Tr[N(Π) ẼΠẼ†]` and `a = Σ_i Tr[K_i ΠẼ†] Tr[K_i† ẼΠ]`,
/// for a product operator `Ẽ` given by its single-qubit factors.
pub fn coset_scalars(k: &ProcessCoefficients, p: &DenseOperator, e_tilde: &[Mat2]) -> Result<(C64, C64)> {
    let n = p.n;
    if e_tilde.len() != n {
        return Err(Error::Unsupported(format!("Ẽ must be a product of {n} single-qubit factors")));
    }
    let mut ep = p.clone();
    let mut pe_dag = p.clone();
    for (q, u) in e_tilde.iter().enumerate() {
        ep.left_single(q, u);
        pe_dag.right_single(q, &dense::mat2_adjoint(u));
    }
    let mut pi_s = ep.clone();
    for (q, u) in e_tilde.iter().enumerate() {
        pi_s.right_single(q, &dense::mat2_adjoint(u));
    }
    let np = apply_channel(k, p);
    let b: C64 = (0..p.dim()).flat_map(|i| (0..p.dim()).map(move |j| (i, j))).map(|(i, j)| np.get(i, j) * pi_s.get(j, i)).sum();

    let t1 = pauli_index_trace_vector(&pe_dag);
    let mut t2 = pauli_index_trace_vector(&ep);
    // t2 ← k^{⊗n} t2, one qubit axis at a time.
    for q in 0..n {
        let stride = 1usize << (2 * (n - 1 - q));
        let mut next = vec![C64::new(0.0, 0.0); t2.len()];
        for (idx, out) in next.iter_mut().enumerate() {
            let sym = (idx / stride) % 4;
            let base = idx - sym * stride;
            *out = (0..4).map(|s2| k.k[sym][s2] * t2[base + s2 * stride]).sum();
        }
        t2 = next;
    }
    let a: C64 = t1.iter().zip(&t2).map(|(x, y)| x * y).sum();
    Ok((a, b))
}
