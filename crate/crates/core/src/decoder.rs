//! Two-round syndrome extraction and maximum-likelihood decoding for regular
//! XP codes under i.i.d. single-qubit channels, with a Monte-Carlo harness.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{gf2_nullspace, XpGroup};
use crate::dense::{self, DenseOperator, DenseState, Mat2};
use crate::enumerator::coset_scalars;
use crate::error::{Error, Result};
use crate::ring_linalg::{rref_gf2, ModMatrix};
use crate::xp::XpOperator;

#[derive(Clone, Debug)]
pub struct Channel {
    pub kraus: Vec<Mat2>,
}

impl Channel {
    pub fn new(kraus: Vec<Mat2>) -> Result<Self> {
        let mut sum = [[C64::new(0.0, 0.0); 2]; 2];
        for k in &kraus {
            let kk = dense::mat2_mul(&dense::mat2_adjoint(k), k);
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] += kk[i][j];
                }
            }
        }
        let id = dense::mat2_identity();
        let err: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (sum[i][j] - id[i][j]).norm()).sum();
        if err > 1e-9 {
            return Err(Error::InvalidChannel(format!("Σ K†K deviates from I by {err:e}")));
        }
        Ok(Self { kraus })
    }

    pub fn identity() -> Self {
        Self { kraus: vec![dense::mat2_identity()] }
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("probability {p}")));
        }
        let s = |m: Mat2, c: f64| m.map(|r| r.map(|v| v * c));
        Self::new(vec![
            s(dense::pauli_mat(0), (1.0 - p).sqrt()),
            s(dense::pauli_mat(1), (p / 3.0).sqrt()),
            s(dense::pauli_mat(2), (p / 3.0).sqrt()),
            s(dense::pauli_mat(3), (p / 3.0).sqrt()),
        ])
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidChannel(format!("damping {gamma}")));
        }
        let c = |v: f64| C64::new(v, 0.0);
        Self::new(vec![[[c(1.0), c(0.0)], [c(0.0), c((1.0 - gamma).sqrt())]], [[c(0.0), c(gamma.sqrt())], [c(0.0), c(0.0)]]])
    }

    /// `depolarizing:P`, `damping:G`, or `kraus:PATH` where the file holds a
    /// JSON list of 2x2 matrices of `[re, im]` pairs.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("channel '{spec}'")))?;
        let num = || arg.parse::<f64>().map_err(|e| Error::Parse(format!("channel parameter '{arg}': {e}")));
        match kind {
            "depolarizing" => Self::depolarizing(num()?),
            "damping" => Self::amplitude_damping(num()?),
            "kraus" => {
                let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
                let raw: Vec<[[[f64; 2]; 2]; 2]> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                Self::new(raw.iter().map(|m| m.map(|r| r.map(|v| C64::new(v[0], v[1])))).collect())
            }
            _ => Err(Error::Parse(format!("unknown channel kind '{kind}'"))),
        }
    }
}

/// `k_{PP'}` with `Σ_m K_m ρ K_m† = Σ_{PP'} k_{PP'} P ρ P'`, Paulis ordered I, X, Y, Z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProcessCoefficients {
    pub k: [[C64; 4]; 4],
}

pub fn pauli_process_coeffs(c: &Channel) -> Result<ProcessCoefficients> {
    let c = Channel::new(c.kraus.clone())?;
    let mut k = [[C64::new(0.0, 0.0); 4]; 4];
    for m in &c.kraus {
        let coef: Vec<C64> = (0..4)
            .map(|p| {
                let pm = dense::mat2_mul(&dense::pauli_mat(p), m);
                (pm[0][0] + pm[1][1]) / 2.0
            })
            .collect();
        for a in 0..4 {
            for b in 0..4 {
                k[a][b] += coef[a] * coef[b].conj();
            }
        }
    }
    Ok(ProcessCoefficients { k })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Syndrome {
    pub s_z: Vec<u8>,
    pub s_x: Vec<u8>,
}

impl std::fmt::Display for Syndrome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = |v: &[u8]| v.iter().map(|b| b.to_string()).collect::<String>();
        write!(f, "{}|{}", s(&self.s_z), s(&self.s_x))
    }
}

#[derive(Clone, Debug)]
pub struct LogicalClass {
    pub name: &'static str,
    pub factors: Vec<Mat2>,
    pub weight: usize,
}

#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub class: usize,
    /// Single-qubit factors of `Ẽ_s†`.
    pub correction: Vec<Mat2>,
    /// Joint probabilities `p(L̄ ∩ s)`, one per logical class.
    pub probabilities: Vec<f64>,
}

fn gf2_solve(rows: &[Vec<u8>], rhs: &[u8], n: usize) -> Option<Vec<u8>> {
    // Augmented [rows | rhs] reduced over GF(2); unknowns are the n columns.
    let aug: Vec<Vec<i64>> = rows.iter().zip(rhs).map(|(r, &b)| r.iter().map(|&v| v as i64).chain([b as i64]).collect()).collect();
    if aug.is_empty() {
        return Some(vec![0; n]);
    }
    let m = ModMatrix::from_rows(&aug, n + 1, 2).ok()?;
    let (r, piv) = rref_gf2(&m).ok()?;
    let mut x = vec![0u8; n];
    for (i, &p) in piv.iter().enumerate() {
        if p == n {
            return None;
        }
        x[p] = r.get(i, n) as u8;
    }
    Some(x)
}

/// Minimum-weight solution (ties: smallest as a bit vector) of a GF(2) system.
fn gf2_solve_min_weight(rows: &[Vec<u8>], rhs: &[u8], n: usize) -> Option<Vec<u8>> {
    let x0 = gf2_solve(rows, rhs, n)?;
    let null = if rows.is_empty() {
        (0..n).map(|i| (0..n).map(|j| (i == j) as u8).collect()).collect()
    } else {
        let m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
        gf2_nullspace(&ModMatrix::from_rows(&m, n, 2).ok()?).ok()?
    };
    let mut best = x0.clone();
    let key = |v: &[u8]| (v.iter().filter(|&&b| b == 1).count(), v.to_vec());
    for mask in 1u64..(1u64 << null.len()) {
        let mut v = x0.clone();
        for (i, b) in null.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                for (a, c) in v.iter_mut().zip(b) {
                    *a ^= c;
                }
            }
        }
        if key(&v) < key(&best) {
            best = v;
        }
    }
    Some(best)
}

fn xp_factors(op: &XpOperator) -> Vec<Mat2> {
    let mut f: Vec<Mat2> = (0..op.n()).map(|i| dense::xp_factor(op.precision(), op.x()[i], op.z()[i])).collect();
    if let Some(first) = f.first_mut() {
        let ph = dense::omega_pow(op.precision(), op.p() as i64);
        *first = first.map(|r| r.map(|v| v * ph));
    }
    f
}

fn product_weight(f: &[Mat2]) -> usize {
    f.iter().filter(|m| !mat2_is_scalar(m)).count()
}

fn mat2_is_scalar(m: &Mat2) -> bool {
    m[0][1].norm() < 1e-12 && m[1][0].norm() < 1e-12 && (m[0][0] - m[1][1]).norm() < 1e-12
}

/// Everything the decoder needs about one code, precomputed.
#[derive(Debug)]
pub struct XpDecoder {
    pub group: XpGroup,
    pub projector: DenseOperator,
    pub basis: Vec<DenseState>,
    pub r_z: Vec<XpOperator>,
    r_bits: Vec<Vec<u8>>,
    pub s_x: Vec<XpOperator>,
    z_support: Vec<bool>,
    pub classes: Vec<LogicalClass>,
    cache: Mutex<HashMap<Syndrome, DecodeResult>>,
}

impl XpDecoder {
    pub fn new(group: &XpGroup) -> Result<Self> {
        let group = if group.is_canonical() { group.clone() } else { group.canonical_form()? };
        let n = group.n();
        let projector = dense::projector(&group)?;
        let basis = dense::range_basis(&projector, 1e-9);
        let r_z = group.r_z_generators()?;
        let half = group.precision() / 2;
        let r_bits: Vec<Vec<u8>> = r_z.iter().map(|r| r.z().iter().map(|&v| (v / half) as u8).collect()).collect();
        let support = group.z_support()?;
        let mut z_support = vec![false; 1 << n];
        for e in support {
            z_support[e as usize] = true;
        }
        let s_x = group.s_x();
        let classes = if basis.len() == 2 { Self::logical_classes(&group, &s_x)? } else { Vec::new() };
        Ok(Self { group, projector, basis, r_z, r_bits, s_x, z_support, classes, cache: Mutex::new(HashMap::new()) })
    }

    /// `{I, X̄, Z̄, X̄Z̄}` as tensor products, ordered by weight then name.
    fn logical_classes(group: &XpGroup, s_x: &[XpOperator]) -> Result<Vec<LogicalClass>> {
        let n = group.n();
        let lx = group.logical_x_operators()?;
        let xbar = lx.first().ok_or_else(|| Error::Unsupported("code has no logical X".into()))?;
        let mut rows: Vec<Vec<u8>> = s_x.iter().map(|a| a.x().to_vec()).collect();
        let mut rhs = vec![0u8; rows.len()];
        rows.push(xbar.x().to_vec());
        rhs.push(1);
        let r = gf2_solve(&rows, &rhs, n).ok_or_else(|| Error::Inconsistent("no Pauli Z logical".into()))?;
        let zf: Vec<Mat2> = r.iter().map(|&b| dense::pauli_mat(if b == 1 { 3 } else { 0 })).collect();
        let xf = xp_factors(xbar);
        let xz: Vec<Mat2> = xf.iter().zip(&zf).map(|(a, b)| dense::mat2_mul(a, b)).collect();
        let id = vec![dense::mat2_identity(); n];
        let mut classes = vec![
            LogicalClass { name: "I", weight: 0, factors: id },
            LogicalClass { name: "X", weight: product_weight(&xf), factors: xf },
            LogicalClass { name: "Z", weight: product_weight(&zf), factors: zf },
            LogicalClass { name: "XZ", weight: product_weight(&xz), factors: xz },
        ];
        classes.sort_by(|a, b| (a.weight, a.name).cmp(&(b.weight, b.name)));
        Ok(classes)
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    /// `E_{s_z}` as an X mask and `E_{s_x}` as a Z mask, each of minimum weight.
    /// For N > 2 the shifted checks only act as ±1 on a corrupted codeword when
    /// `E_{s_z}` matches the error's X-part, so the lightest coset leader is used.
    pub fn representative_errors(&self, s: &Syndrome) -> Result<(Vec<u8>, Vec<u8>)> {
        let n = self.n();
        if s.s_z.len() != self.r_z.len() || s.s_x.len() != self.s_x.len() {
            return Err(Error::Dimension("syndrome length".into()));
        }
        let ez = gf2_solve_min_weight(&self.r_bits, &s.s_z, n).ok_or_else(|| Error::Inconsistent("no X-type representative for s_z".into()))?;
        let rows: Vec<Vec<u8>> = self.s_x.iter().map(|a| a.x().to_vec()).collect();
        let ex = gf2_solve_min_weight(&rows, &s.s_x, n).ok_or_else(|| Error::Inconsistent("no Z-type representative for s_x".into()))?;
        Ok((ez, ex))
    }

    /// `E_{s_z} S_X E_{s_z}†` for the given X mask.
    fn shifted_checks(&self, ez: &[u8]) -> Result<Vec<XpOperator>> {
        let n = self.n();
        let xs: Vec<i64> = ez.iter().map(|&b| b as i64).collect();
        let e = XpOperator::new(self.group.precision(), &xs, &vec![0; n], 0)?;
        self.s_x.iter().map(|a| XpOperator::conjugate(&e, a)).collect()
    }

    fn shifted_support(&self, ez: &[u8]) -> Vec<bool> {
        let shift = dense::index_of(ez) as usize;
        (0..self.z_support.len()).map(|e| self.z_support[e ^ shift]).collect()
    }

    fn r_sign(&self, j: usize, e: usize) -> u8 {
        let n = self.n();
        let ph = self.r_z[j].diagonal_phase(&dense::bits(e as u64, n));
        if ph == 0 {
            0
        } else {
            1
        }
    }

    /// Deterministic syndrome of a state that lies in a single sector.
    pub fn extract_syndrome(&self, s: &DenseState) -> Result<Syndrome> {
        let norm2: f64 = s.amps.iter().map(|a| a.norm_sqr()).sum();
        let mut s_z = Vec::with_capacity(self.r_z.len());
        for j in 0..self.r_z.len() {
            let minus: f64 = s.amps.iter().enumerate().filter(|(e, _)| self.r_sign(j, *e) == 1).map(|(_, a)| a.norm_sqr()).sum();
            let bit = if minus < 1e-9 * norm2 {
                0
            } else if minus > (1.0 - 1e-9) * norm2 {
                1
            } else {
                return Err(Error::Nondeterministic(format!("R_Z check {j} has outcome probability {:.3}", minus / norm2)));
            };
            s_z.push(bit);
        }
        let ez = gf2_solve_min_weight(&self.r_bits, &s_z, self.n()).ok_or_else(|| Error::Inconsistent("s_z".into()))?;
        let checks = self.shifted_checks(&ez)?;
        let mask = self.shifted_support(&ez);
        let mut s_x = Vec::with_capacity(checks.len());
        for (i, a) in checks.iter().enumerate() {
            let t = dense::apply_xp(a, s);
            let ov: C64 = s.amps.iter().zip(&t.amps).enumerate().filter(|(e, _)| mask[*e]).map(|(_, (u, v))| u.conj() * v).sum();
            let r = ov.re / norm2;
            let bit = if (r - 1.0).abs() < 1e-9 {
                0
            } else if (r + 1.0).abs() < 1e-9 {
                1
            } else {
                return Err(Error::Nondeterministic(format!("S_X check {i} has expectation {r:.3}")));
            };
            s_x.push(bit);
        }
        Ok(Syndrome { s_z, s_x })
    }

    /// `Ẽ_s = E_{s_z} E_{s_x} L̄` as single-qubit factors.
    pub fn coset_operator(&self, s: &Syndrome, class: usize) -> Result<Vec<Mat2>> {
        let (ez, ex) = self.representative_errors(s)?;
        let l = &self.classes.get(class).ok_or_else(|| Error::Unsupported("logical classes are only tabulated for k = 1".into()))?.factors;
        Ok((0..self.n())
            .map(|q| {
                let x = dense::pauli_mat(if ez[q] == 1 { 1 } else { 0 });
                let z = dense::pauli_mat(if ex[q] == 1 { 3 } else { 0 });
                dense::mat2_mul(&dense::mat2_mul(&x, &z), &l[q])
            })
            .collect())
    }

    /// Joint probabilities `(b + a) / (K(K+1))` per class and the argmax.
    pub fn ml_decode(&self, s: &Syndrome, k: &ProcessCoefficients) -> Result<DecodeResult> {
        if self.classes.is_empty() {
            return Err(Error::Unsupported("maximum-likelihood decoding needs a k = 1 code".into()));
        }
        let kf = self.k() as f64;
        let mut probabilities = Vec::with_capacity(self.classes.len());
        for c in 0..self.classes.len() {
            let e = self.coset_operator(s, c)?;
            let (a, b) = coset_scalars(k, &self.projector, &e)?;
            probabilities.push((a + b).re / (kf * (kf + 1.0)));
        }
        let best = probabilities.iter().cloned().fold(f64::MIN, f64::max);
        let class = probabilities.iter().position(|&p| p >= best - 1e-12 * best.abs().max(1e-300)).unwrap_or(0);
        let correction = self.coset_operator(s, class)?.iter().map(dense::mat2_adjoint).collect();
        Ok(DecodeResult { class, correction, probabilities })
    }

    fn cached_decode(&self, s: &Syndrome, k: &ProcessCoefficients) -> Result<DecodeResult> {
        if let Some(r) = self.cache.lock().expect("cache lock").get(s) {
            return Ok(r.clone());
        }
        let r = self.ml_decode(s, k)?;
        self.cache.lock().expect("cache lock").insert(s.clone(), r.clone());
        Ok(r)
    }

    /// Dense projector onto the Z-support.
    pub fn z_support_projector(&self) -> DenseOperator {
        let mut p = DenseOperator::zeros(self.n());
        let d = p.dim();
        for (e, &inside) in self.z_support.iter().enumerate() {
            if inside {
                p.data[e * d + e] = C64::new(1.0, 0.0);
            }
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Kraus trajectories with Born-rule branching per qubit.
    Exact,
    /// Pauli-twirled channel: Pauli `P` with probability `k_{PP}`.
    Twirl,
}

#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub rate: f64,
    pub ci95: f64,
    pub shots: usize,
    pub seed: u64,
    /// Shots and mean loss per observed syndrome.
    pub per_syndrome: BTreeMap<String, (usize, f64)>,
    #[serde(skip)]
    pub losses: Vec<f64>,
}

fn norm2(cols: &[Vec<C64>]) -> f64 {
    cols.iter().flatten().map(|a| a.norm_sqr()).sum()
}

fn pick(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// One shot: corrupt the code space, measure, decode, correct, and return
/// `(syndrome, loss)` with loss `1 − F_e` (0 when `F_e` is within 1e-9 of 1).
fn run_shot(dec: &XpDecoder, c: &Channel, k: &ProcessCoefficients, mode: SampleMode, rng: &mut ChaCha8Rng) -> Result<(Syndrome, f64)> {
    let n = dec.n();
    let mut cols: Vec<Vec<C64>> = dec.basis.iter().map(|b| b.amps.clone()).collect();
    let ops: Vec<Mat2> = match mode {
        SampleMode::Exact => c.kraus.clone(),
        SampleMode::Twirl => (0..4).map(dense::pauli_mat).collect(),
    };
    for q in 0..n {
        let weights: Vec<f64> = match mode {
            SampleMode::Exact => ops
                .iter()
                .map(|m| {
                    cols.iter()
                        .map(|v| {
                            let mut t = v.clone();
                            dense::apply_single_vec(&mut t, n, q, m);
                            t.iter().map(|a| a.norm_sqr()).sum::<f64>()
                        })
                        .sum()
                })
                .collect(),
            SampleMode::Twirl => (0..4).map(|p| k.k[p][p].re.max(0.0)).collect(),
        };
        let i = pick(rng, &weights);
        for v in cols.iter_mut() {
            dense::apply_single_vec(v, n, q, &ops[i]);
        }
    }
    // First round: the diagonal Pauli checks.
    let mut s_z = Vec::with_capacity(dec.r_z.len());
    for j in 0..dec.r_z.len() {
        let total = norm2(&cols);
        let minus: f64 = cols.iter().flat_map(|v| v.iter().enumerate()).filter(|(e, _)| dec.r_sign(j, *e) == 1).map(|(_, a)| a.norm_sqr()).sum();
        let bit = if rng.gen::<f64>() * total < minus { 1 } else { 0 };
        for v in cols.iter_mut() {
            for (e, a) in v.iter_mut().enumerate() {
                if dec.r_sign(j, e) != bit {
                    *a = C64::new(0.0, 0.0);
                }
            }
        }
        s_z.push(bit);
    }
    // Second round: the shifted non-diagonal checks on the s_z sector.
    let ez = gf2_solve_min_weight(&dec.r_bits, &s_z, n).ok_or_else(|| Error::Inconsistent("s_z".into()))?;
    let checks = dec.shifted_checks(&ez)?;
    let mask = dec.shifted_support(&ez);
    let mut s_x = Vec::with_capacity(checks.len());
    for a in &checks {
        let moved: Vec<Vec<C64>> = cols
            .iter()
            .map(|v| {
                let t = dense::apply_xp(a, &DenseState { n, amps: v.clone() });
                t.amps.iter().enumerate().map(|(e, x)| if mask[e] { *x } else { C64::new(0.0, 0.0) }).collect()
            })
            .collect();
        let plus: Vec<Vec<C64>> = cols.iter().zip(&moved).map(|(v, m)| v.iter().zip(m).map(|(x, y)| (x + y) * 0.5).collect()).collect();
        let minus: Vec<Vec<C64>> = cols.iter().zip(&moved).map(|(v, m)| v.iter().zip(m).map(|(x, y)| (x - y) * 0.5).collect()).collect();
        let (wp, wm) = (norm2(&plus), norm2(&minus));
        if rng.gen::<f64>() * (wp + wm) < wm {
            cols = minus;
            s_x.push(1);
        } else {
            cols = plus;
            s_x.push(0);
        }
    }
    let syndrome = Syndrome { s_z, s_x };
    let r = dec.cached_decode(&syndrome, k)?;
    for v in cols.iter_mut() {
        for (q, u) in r.correction.iter().enumerate() {
            dense::apply_single_vec(v, n, q, u);
        }
    }
    let tr: C64 = dec.basis.iter().zip(&cols).map(|(b, v)| b.amps.iter().zip(v).map(|(x, y)| x.conj() * y).sum::<C64>()).sum();
    let fe = tr.norm_sqr() / (dec.k() as f64 * norm2(&cols));
    let loss = if fe > 1.0 - 1e-9 { 0.0 } else { 1.0 - fe };
    Ok((syndrome, loss))
}

/// Logical error rate estimate. Shot `i` draws from the ChaCha8 stream `i`
/// of `seed`, so results do not depend on the thread count.
pub fn monte_carlo(dec: &XpDecoder, c: &Channel, shots: usize, seed: u64, mode: SampleMode) -> Result<McReport> {
    if shots == 0 {
        return Err(Error::Unsupported("shots must be at least 1".into()));
    }
    let k = pauli_process_coeffs(c)?;
    let results: Vec<(Syndrome, f64)> = (0..shots)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            run_shot(dec, c, &k, mode, &mut rng)
        })
        .collect::<Result<_>>()?;
    let losses: Vec<f64> = results.iter().map(|r| r.1).collect();
    let rate = losses.iter().sum::<f64>() / shots as f64;
    let var = losses.iter().map(|l| (l - rate).powi(2)).sum::<f64>() / (shots.max(2) - 1) as f64;
    let mut per_syndrome: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for (s, l) in &results {
        let e = per_syndrome.entry(s.to_string()).or_insert((0, 0.0));
        e.0 += 1;
        e.1 += l;
    }
    for v in per_syndrome.values_mut() {
        v.1 /= v.0 as f64;
    }
    Ok(McReport { rate, ci95: 1.96 * (var / shots as f64).sqrt(), shots, seed, per_syndrome, losses })
}
