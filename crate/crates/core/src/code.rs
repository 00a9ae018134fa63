//! XP groups as codes: canonical form, Z-support and orbit structure,
//! diagonal Pauli generators, logical X operators, codewords and the
//! counting certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::dense::{bits, index_of};
use crate::error::{Error, Result};
use crate::ring_linalg::{howell_form, reduce_by_howell, rref_gf2, solve_linear_mod, ModMatrix};
use crate::xp::XpOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LegRole {
    #[serde(rename = "P")]
    Physical,
    #[serde(rename = "L")]
    Logical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XpGroup {
    n: usize,
    precision: u32,
    generators: Vec<XpOperator>,
    canonical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Lexicographically smallest representative of each `⟨S_X⟩` orbit.
    pub e_m: Vec<u64>,
    /// Representatives of the orbits under `⟨S_X, L_X⟩`.
    pub e_q: Vec<u64>,
    /// X-parts of the logical X operators, reduced modulo the S_X X-parts.
    pub l_x: Vec<Vec<u8>>,
    pub regular: bool,
}

/// Symbolic codewords `κ_i = O_{S_X}|m_i⟩`: per codeword, `(e, phase)` pairs
/// with amplitude `ω^phase` on `|e⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordTable {
    pub codewords: Vec<Vec<(u64, u32)>>,
    pub e_m: Vec<u64>,
    pub e_q: Vec<u64>,
}

pub fn is_power_of_two(n: u32) -> bool {
    n >= 2 && n & (n - 1) == 0
}

/// `(2z | p)` over `Z_2N`: the vector on which diagonal actions are linear.
pub(crate) fn diag_vector(op: &XpOperator) -> Vec<i64> {
    let mut v: Vec<i64> = op.z().iter().map(|&z| 2 * z as i64).collect();
    v.push(op.p() as i64);
    v
}

pub(crate) fn diag_from_vector(v: &[u64], precision: u32) -> XpOperator {
    let n = v.len() - 1;
    let z: Vec<i64> = v[..n].iter().map(|&a| (a / 2) as i64).collect();
    XpOperator::new(precision, &vec![0; n], &z, v[n] as i64).expect("valid precision")
}

pub(crate) fn diag_matrix(diag: &[XpOperator], n: usize, precision: u32) -> ModMatrix {
    let rows: Vec<Vec<i64>> = diag.iter().map(diag_vector).collect();
    ModMatrix::from_rows(&rows, n + 1, 2 * precision as u64).expect("modulus ≥ 4")
}

/// Howell basis of the diagonal subgroup generated by `diag`.
pub(crate) fn diag_howell(diag: &[XpOperator], n: usize, precision: u32) -> Vec<XpOperator> {
    let h = howell_form(&diag_matrix(diag, n, precision));
    (0..h.rows()).map(|i| diag_from_vector(h.row(i), precision)).collect()
}

/// GF(2) row reduction of non-diagonal generators using the group law.
/// Returns the pivot rows and the rows whose X-part vanished.
fn rref_group(ops: &[XpOperator], n: usize) -> (Vec<XpOperator>, Vec<XpOperator>) {
    let mut rows = ops.to_vec();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].x()[c] == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].x()[c] == 1 {
                rows[i] = rows[i].multiply(&rows[r]).expect("same shape");
            }
        }
        r += 1;
    }
    let diag = rows.split_off(r);
    (rows, diag)
}

impl XpGroup {
    pub fn new(n: usize, precision: u32, generators: Vec<XpOperator>) -> Result<Self> {
        if precision < 2 {
            return Err(Error::UnsupportedPrecision(precision));
        }
        for g in &generators {
            if g.n() != n || g.precision() != precision {
                return Err(Error::Incompatible(format!("generator {g} in a group with n={n}, N={precision}")));
            }
        }
        Ok(Self { n, precision, generators, canonical: false })
    }

    /// Builds a group from `(x, z, p)` integer rows.
    pub fn from_rows(precision: u32, rows: &[(Vec<i64>, Vec<i64>, i64)]) -> Result<Self> {
        let n = rows.first().map(|r| r.0.len()).unwrap_or(0);
        let gens = rows.iter().map(|(x, z, p)| XpOperator::new(precision, x, z, *p)).collect::<Result<Vec<_>>>()?;
        Self::new(n, precision, gens)
    }

    /// Parses rows written as `"x|z|p"` digit strings (single-digit entries).
    pub fn from_strs(precision: u32, rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| format!("XP_{precision}({r})").parse::<XpOperator>())
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map(|g| g.n()).unwrap_or(0);
        Self::new(n, precision, parsed)
    }

    pub fn empty(n: usize, precision: u32) -> Self {
        Self { n, precision, generators: Vec::new(), canonical: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn generators(&self) -> &[XpOperator] {
        &self.generators
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Non-diagonal and diagonal generators, in order.
    pub fn split(&self) -> (Vec<XpOperator>, Vec<XpOperator>) {
        self.generators.iter().cloned().partition(|g| !g.is_diagonal())
    }

    pub fn s_x(&self) -> Vec<XpOperator> {
        self.split().0
    }

    pub fn s_z(&self) -> Vec<XpOperator> {
        self.split().1
    }

    fn require_canonical(&self) -> Result<()> {
        if !self.canonical {
            return Err(Error::Unsupported("operation requires a canonical group".into()));
        }
        Ok(())
    }

    /// Canonical form: S_X with X-part in RREF, then the diagonal subgroup in
    /// Howell form over the `(2z | p)` embedding.
    pub fn canonical_form(&self) -> Result<XpGroup> {
        let (n, nn) = (self.n, self.precision);
        let (mut xs, diag0) = self.split();
        let mut diag = diag_howell(&diag0, n, nn);
        loop {
            let (reduced, dropped) = rref_group(&xs, n);
            xs = reduced;
            let mut cand = diag.clone();
            cand.extend(dropped);
            for (i, a) in xs.iter().enumerate() {
                cand.push(a.multiply(a)?);
                for b in xs.iter().skip(i + 1) {
                    cand.push(XpOperator::commutator(a, b)?);
                }
                for d in &diag {
                    cand.push(XpOperator::commutator(a, d)?);
                }
            }
            let next = diag_howell(&cand, n, nn);
            if next == diag {
                break;
            }
            diag = next;
        }
        let h = diag_matrix(&diag, n, nn);
        let mut gens = Vec::with_capacity(xs.len() + diag.len());
        for a in &xs {
            let v: Vec<u64> = diag_vector(a).iter().map(|&t| t as u64).collect();
            let (rem, _) = reduce_by_howell(&h, &v);
            let z: Vec<i64> = rem[..n].iter().map(|&t| (t / 2) as i64).collect();
            let x: Vec<i64> = a.x().iter().map(|&t| t as i64).collect();
            gens.push(XpOperator::new(nn, &x, &z, rem[n] as i64)?);
        }
        gens.extend(diag);
        Ok(XpGroup { n, precision: nn, generators: gens, canonical: true })
    }

    /// `E = { e : every diagonal generator acts on |e⟩ with phase ω⁰ }`, sorted.
    pub fn z_support(&self) -> Result<Vec<u64>> {
        self.require_canonical()?;
        let sz = self.s_z();
        let e: Vec<u64> = (0..(1u64 << self.n)).filter(|&e| {
            let eb = bits(e, self.n);
            sz.iter().all(|s| s.diagonal_phase(&eb) == 0)
        })
        .collect();
        if e.is_empty() {
            return Err(Error::EmptyCode);
        }
        Ok(e)
    }

    fn sx_xmatrix(&self) -> ModMatrix {
        let rows: Vec<Vec<i64>> = self.s_x().iter().map(|a| a.x().iter().map(|&v| v as i64).collect()).collect();
        ModMatrix::from_rows(&rows, self.n, 2).expect("binary")
    }

    pub fn orbit_decomposition(&self) -> Result<OrbitDecomposition> {
        let e = self.z_support()?;
        let n = self.n;
        let sx = rref_rows(&self.sx_xmatrix());
        let reduce = |v: u64, basis: &[(usize, u64)]| -> u64 {
            basis.iter().fold(v, |acc, &(p, row)| if acc >> (n - 1 - p) & 1 == 1 { acc ^ row } else { acc })
        };
        let e_m: Vec<u64> = e.iter().map(|&v| reduce(v, &sx)).collect::<BTreeSet<_>>().into_iter().collect();
        let eset: HashSet<u64> = e.iter().copied().collect();
        let e0 = e[0];
        let mut shifts: BTreeSet<u64> = BTreeSet::new();
        for &f in &e {
            let v = reduce(f ^ e0, &sx);
            if v != 0 && !shifts.contains(&v) && e.iter().all(|&g| eset.contains(&(g ^ v))) {
                shifts.insert(v);
            }
        }
        let shift_rows: Vec<Vec<i64>> = shifts.iter().map(|&v| bits(v, n).iter().map(|&b| b as i64).collect()).collect();
        let lm = ModMatrix::from_rows(&shift_rows, n, 2)?;
        let lx = rref_rows(&lm);
        let l_x: Vec<Vec<u8>> = lx.iter().map(|&(_, row)| bits(row, n)).collect();
        let mut full = sx.clone();
        full.extend(lx.iter().copied());
        let all_rows: Vec<Vec<i64>> = full.iter().map(|&(_, r)| bits(r, n).iter().map(|&b| b as i64).collect()).collect();
        let full = rref_rows(&ModMatrix::from_rows(&all_rows, n, 2)?);
        let e_q: Vec<u64> = e.iter().map(|&v| reduce(v, &full)).collect::<BTreeSet<_>>().into_iter().collect();
        let regular = e_q.len() == 1;
        Ok(OrbitDecomposition { e_m, e_q, l_x, regular })
    }

    /// Diagonal Pauli generators (z ∈ {0, N/2}) whose joint +1 space is
    /// spanned by the Z-support.
    pub fn r_z_generators(&self) -> Result<Vec<XpOperator>> {
        if self.precision % 2 != 0 {
            return Err(Error::UnsupportedPrecision(self.precision));
        }
        let e = self.z_support()?;
        let n = self.n;
        let e0 = e[0];
        let diffs: Vec<Vec<i64>> = e.iter().map(|&f| bits(f ^ e0, n).iter().map(|&b| b as i64).collect()).collect();
        let span = ModMatrix::from_rows(&diffs, n, 2)?;
        let null = gf2_nullspace(&span)?;
        let half = (self.precision / 2) as i64;
        let e0b = bits(e0, n);
        null.iter()
            .map(|r| {
                let z: Vec<i64> = r.iter().map(|&b| b as i64 * half).collect();
                let sign: u32 = r.iter().zip(&e0b).map(|(&a, &b)| (a & b) as u32).sum::<u32>() % 2;
                XpOperator::new(self.precision, &vec![0; n], &z, (sign * self.precision) as i64)
            })
            .collect()
    }

    /// Symbolic codewords `O_{S_X}|m⟩` for each orbit representative `m`.
    pub fn codewords(&self) -> Result<CodewordTable> {
        let od = self.orbit_decomposition()?;
        let sx = self.s_x();
        let codewords = od
            .e_m
            .iter()
            .map(|&m| {
                let mut terms: Vec<(u64, u32)> = vec![(m, 0)];
                for a in sx.iter().rev() {
                    let moved: Vec<(u64, u32)> = terms
                        .iter()
                        .map(|&(e, ph)| {
                            let (f, q) = a.act_on_basis(e);
                            (f, (ph + q) % (2 * self.precision))
                        })
                        .collect();
                    terms.extend(moved);
                }
                terms.sort();
                terms
            })
            .collect();
        Ok(CodewordTable { codewords, e_m: od.e_m, e_q: od.e_q })
    }

    /// Full XP logical X operators, one per `L_X` X-part, solved from the
    /// codeword phase table.
    pub fn logical_x_operators(&self) -> Result<Vec<XpOperator>> {
        if !is_power_of_two(self.precision) {
            return Err(Error::UnsupportedPrecision(self.precision));
        }
        let od = self.orbit_decomposition()?;
        if !od.regular {
            return Err(Error::Unsupported("logical operators of non-regular codes".into()));
        }
        let table = self.codewords()?;
        let n = self.n;
        let nn = self.precision as i64;
        let mut phase: HashMap<u64, i64> = HashMap::new();
        let mut rep: BTreeMap<u64, u64> = BTreeMap::new();
        for (cw, &m) in table.codewords.iter().zip(&table.e_m) {
            for &(e, ph) in cw {
                phase.insert(e, ph as i64);
                rep.insert(e, m);
            }
        }
        let mut out = Vec::new();
        for l in &od.l_x {
            let lv = index_of(l);
            let mut cols: Vec<Vec<i64>> = Vec::new();
            let mut rhs: Vec<u64> = Vec::new();
            for (&e, &m) in &rep {
                if e == m {
                    continue;
                }
                let c = (phase[&(e ^ lv)] - phase[&e]) - (phase[&(m ^ lv)] - phase[&m]);
                let c = c.rem_euclid(2 * nn);
                if c % 2 != 0 {
                    return Err(Error::Inconsistent("odd phase in logical X constraint".into()));
                }
                let eb = bits(e, n);
                let mb = bits(m, n);
                cols.push(eb.iter().zip(&mb).map(|(&a, &b)| a as i64 - b as i64).collect());
                rhs.push((c / 2) as u64);
            }
            let x: Vec<i64> = l.iter().map(|&b| b as i64).collect();
            if cols.is_empty() {
                out.push(XpOperator::new(self.precision, &x, &vec![0; n], 0)?);
                continue;
            }
            // Unknowns are the z entries: rows of `a` index qubits.
            let a_rows: Vec<Vec<i64>> = (0..n).map(|q| cols.iter().map(|c| c[q]).collect()).collect();
            let a = ModMatrix::from_rows(&a_rows, cols.len(), nn as u64)?;
            let z = solve_linear_mod(&a, &rhs)?.ok_or_else(|| Error::Inconsistent("no XP completion for logical X".into()))?;
            let z: Vec<i64> = z.iter().map(|&v| v as i64).collect();
            out.push(XpOperator::new(self.precision, &x, &z, 0)?);
        }
        Ok(out)
    }

    /// `|S_X| + |L_X| + |S_Z| = n`.
    pub fn counting_check(&self) -> Result<bool> {
        if !is_power_of_two(self.precision) {
            return Err(Error::UnsupportedPrecision(self.precision));
        }
        self.require_canonical()?;
        let od = self.orbit_decomposition()?;
        let (sx, sz) = self.split();
        Ok(sx.len() + od.l_x.len() + sz.len() == self.n)
    }

    /// State form of the counting check, `|S_X| + |S_Z| = n`, for a group
    /// that should fix a single ray.
    pub fn counting_check_state(&self) -> Result<bool> {
        if !is_power_of_two(self.precision) {
            return Err(Error::UnsupportedPrecision(self.precision));
        }
        self.require_canonical()?;
        let (sx, sz) = self.split();
        Ok(sx.len() + sz.len() == self.n)
    }

    /// Keeps the listed columns (in order) of every generator; not canonical.
    pub fn select_columns(&self, cols: &[usize]) -> XpGroup {
        XpGroup {
            n: cols.len(),
            precision: self.precision,
            generators: self.generators.iter().map(|g| g.select_columns(cols)).collect(),
            canonical: false,
        }
    }

    pub fn with_generators(&self, generators: Vec<XpOperator>) -> Result<XpGroup> {
        XpGroup::new(self.n, self.precision, generators)
    }

    /// Block layout `x | z | p`, one generator per line.
    pub fn render(&self) -> String {
        let wide = self.precision > 10;
        let sep = if wide { "," } else { "" };
        self.generators
            .iter()
            .map(|g| {
                let x: Vec<String> = g.x().iter().map(|v| v.to_string()).collect();
                let z: Vec<String> = g.z().iter().map(|v| v.to_string()).collect();
                format!("{}|{}|{}", x.join(sep), z.join(sep), g.p())
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// RREF rows of a binary matrix as `(pivot, bitmask)` pairs.
fn rref_rows(m: &ModMatrix) -> Vec<(usize, u64)> {
    let (r, piv) = rref_gf2(m).expect("binary");
    piv.iter()
        .enumerate()
        .map(|(i, &p)| (p, index_of(&r.row(i).iter().map(|&v| v as u8).collect::<Vec<_>>())))
        .collect()
}

/// Basis of `{ r : r·v = 0 for every row v }` over GF(2), in RREF.
pub fn gf2_nullspace(m: &ModMatrix) -> Result<Vec<Vec<u8>>> {
    let n = m.cols();
    let (r, piv) = rref_gf2(m)?;
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for &f in &free {
        let mut v = vec![0i64; n];
        v[f] = 1;
        for (i, &p) in piv.iter().enumerate() {
            v[p] = r.get(i, f) as i64;
        }
        basis.push(v);
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let (rb, piv2) = rref_gf2(&ModMatrix::from_rows(&basis, n, 2)?)?;
    Ok((0..piv2.len()).map(|i| rb.row(i).iter().map(|&v| v as u8).collect()).collect())
}
