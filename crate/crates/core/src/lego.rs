//! Quantum Lego operations on check matrices: tensor product, self-trace by
//! operator matching, trace with an inserted operator, and leg re-designation.

use num_complex::Complex64 as C64;

use crate::code::{diag_from_vector, diag_vector, LegRole, XpGroup};
use crate::dense::{self, DenseState, Mat2};
use crate::error::{Error, Result};
use crate::ring_linalg::{left_kernel, LinearSolver, ModMatrix};
use crate::xp::XpOperator;

/// A tensor: its logical identity group over all legs, the role of each leg,
/// and an optional dense amplitude vector kept as an oracle shadow.
#[derive(Clone, Debug)]
pub struct Lego {
    pub group: XpGroup,
    pub legs: Vec<LegRole>,
    pub dense: Option<DenseState>,
    /// False when the group could not be tracked symbolically.
    pub symbolic: bool,
    pub warnings: Vec<String>,
}

/// Operator applied to the second leg of a bond before it is traced.
#[derive(Clone, Debug)]
pub enum Insertion {
    Identity,
    X,
    Unitary(Mat2),
}

impl Insertion {
    pub fn matrix(&self) -> Option<Mat2> {
        match self {
            Insertion::Identity => None,
            Insertion::X => Some(dense::pauli_mat(1)),
            Insertion::Unitary(u) => Some(*u),
        }
    }
}

impl Lego {
    /// Canonicalizes `group`; all legs physical.
    pub fn new(group: XpGroup) -> Result<Self> {
        let legs = vec![LegRole::Physical; group.n()];
        Self::with_legs(group, legs)
    }

    pub fn with_legs(group: XpGroup, legs: Vec<LegRole>) -> Result<Self> {
        if legs.len() != group.n() {
            return Err(Error::Dimension(format!("{} leg roles for {} qubits", legs.len(), group.n())));
        }
        let group = if group.is_canonical() { group } else { group.canonical_form()? };
        Ok(Self { group, legs, dense: None, symbolic: true, warnings: Vec::new() })
    }

    /// Attaches a dense shadow after checking every generator stabilizes it.
    pub fn with_dense(mut self, s: DenseState) -> Result<Self> {
        if s.n != self.group.n() {
            return Err(Error::Dimension(format!("{}-qubit shadow for a {}-leg lego", s.n, self.group.n())));
        }
        for g in self.group.generators() {
            if !dense::stabilizes(g, &s, dense::TOL_STATE) {
                return Err(Error::Inconsistent(format!("{g} does not stabilize the dense shadow")));
            }
        }
        self.dense = Some(s);
        Ok(self)
    }

    /// Builds the dense shadow from the codewords when the group is a state.
    pub fn with_state_shadow(self) -> Result<Self> {
        let s = state_of(&self.group)?;
        self.with_dense(s)
    }

    /// True when the group is certified to describe an XP state: it passes the
    /// counting check, fixes a single ray, and matches the dense shadow if any.
    pub fn is_xp(&self) -> bool {
        if !self.symbolic || self.counting_check() != Ok(true) {
            return false;
        }
        match (state_of(&self.group), &self.dense) {
            (Ok(s), Some(d)) => s.proportional(d, dense::TOL_STATE),
            (Ok(_), None) => true,
            (Err(_), _) => false,
        }
    }

    /// A Lego is a state over all of its legs, so the state form applies.
    pub fn counting_check(&self) -> Result<bool> {
        self.group.counting_check_state()
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn physical_legs(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.legs[i] == LegRole::Physical).collect()
    }

    pub fn logical_legs(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.legs[i] == LegRole::Logical).collect()
    }

    /// Stabilizer group of the code on the physical legs: the subgroup acting
    /// trivially on every logical leg, with those columns removed.
    pub fn code_group(&self) -> Result<XpGroup> {
        let logical = self.logical_legs();
        if logical.is_empty() {
            return Ok(self.group.clone());
        }
        restrict_off(&self.group, &logical)
    }
}

/// The unique state fixed by a group with one codeword.
pub fn state_of(group: &XpGroup) -> Result<DenseState> {
    let table = group.codewords()?;
    if table.codewords.len() != 1 {
        return Err(Error::Unsupported("a state needs a one-dimensional code".into()));
    }
    if group.n() > dense::DENSE_LIMIT {
        return Err(Error::SizeOverflow(group.n()));
    }
    let mut s = DenseState::zero(group.n());
    for &(e, ph) in &table.codewords[0] {
        s.amps[e as usize] = dense::omega_pow(group.precision(), ph as i64);
    }
    Ok(s)
}

pub fn tensor_product(a: &Lego, b: &Lego) -> Result<Lego> {
    if a.group.precision() != b.group.precision() {
        return Err(Error::Incompatible(format!("precision {} vs {}", a.group.precision(), b.group.precision())));
    }
    let nn = a.group.precision();
    let (na, nb) = (a.n(), b.n());
    let mut gens = Vec::new();
    for g in a.group.generators() {
        gens.push(g.tensor(&XpOperator::identity(nb, nn))?);
    }
    for g in b.group.generators() {
        gens.push(XpOperator::identity(na, nn).tensor(g)?);
    }
    let group = XpGroup::new(na + nb, nn, gens)?.canonical_form()?;
    let mut legs = a.legs.clone();
    legs.extend_from_slice(&b.legs);
    let dense = match (&a.dense, &b.dense) {
        (Some(x), Some(y)) if na + nb <= dense::DENSE_LIMIT => Some(x.kron(y)),
        _ => None,
    };
    let mut warnings = a.warnings.clone();
    warnings.extend(b.warnings.iter().cloned());
    Ok(Lego { group, legs, dense, symbolic: a.symbolic && b.symbolic, warnings })
}

/// Linear condition on diagonal parts: a map `(2z | p) ↦ Z_2N^c` given by
/// lists of column indices whose entries are summed.
struct Condition {
    /// For each output coordinate, the input columns summed into it.
    sums: Vec<Vec<usize>>,
    /// Required X-part relation: qubit pairs that must agree, and qubits that must be 0.
    x_equal: Vec<(usize, usize)>,
    x_zero: Vec<usize>,
}

impl Condition {
    fn eval(&self, v: &[i64], m: i64) -> Vec<u64> {
        self.sums.iter().map(|cols| cols.iter().map(|&c| v[c]).sum::<i64>().rem_euclid(m) as u64).collect()
    }

    fn x_ok(&self, x: &[u8]) -> bool {
        self.x_equal.iter().all(|&(a, b)| x[a] == x[b]) && self.x_zero.iter().all(|&a| x[a] == 0)
    }
}

/// Generators of `{ g ∈ ⟨group⟩ : g satisfies cond }`. The group must be canonical.
fn satisfying_subgroup(group: &XpGroup, cond: &Condition) -> Result<Vec<XpOperator>> {
    let (n, nn) = (group.n(), group.precision());
    let m = 2 * nn as i64;
    let (sx, sz) = group.split();
    if sx.len() > 20 {
        return Err(Error::Unsupported(format!("{} non-diagonal generators", sx.len())));
    }
    let c = cond.sums.len();
    let zrows: Vec<Vec<i64>> = sz.iter().map(|d| cond.eval(&diag_vector(d), m).iter().map(|&v| v as i64).collect()).collect();
    let a = ModMatrix::from_rows(&zrows, c, m as u64)?;
    let zvecs: Vec<Vec<i64>> = sz.iter().map(diag_vector).collect();
    let combine = |u: &[u64]| -> Vec<u64> {
        let mut acc = vec![0i64; n + 1];
        for (ui, v) in u.iter().zip(&zvecs) {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += *ui as i64 * b;
            }
        }
        acc.iter().map(|&t| t.rem_euclid(m) as u64).collect()
    };
    let mut out = Vec::new();
    // Diagonal part: kernel of the condition on the diagonal subgroup.
    let ker = left_kernel(&a);
    for i in 0..ker.rows() {
        let v = combine(ker.row(i));
        if v.iter().any(|&t| t != 0) {
            out.push(diag_from_vector(&v, nn));
        }
    }
    // Non-diagonal part: one corrected representative per admissible X-pattern.
    let solver = LinearSolver::new(&a);
    let mut found_masks: Vec<u64> = Vec::new();
    for mask in 1u64..(1u64 << sx.len()) {
        if in_gf2_span(&found_masks, mask) {
            continue;
        }
        let mut word = XpOperator::identity(n, nn);
        for (i, s) in sx.iter().enumerate() {
            if mask >> i & 1 == 1 {
                word = word.multiply(s)?;
            }
        }
        if !cond.x_ok(word.x()) {
            continue;
        }
        let target: Vec<u64> = cond.eval(&diag_vector(&word), m).iter().map(|&v| ((m as u64) - v) % m as u64).collect();
        let Some(u) = solver.solve(&target) else { continue };
        let corr = combine(&u);
        let mut v: Vec<i64> = diag_vector(&word);
        for (a, &b) in v.iter_mut().zip(&corr) {
            *a += b as i64;
        }
        let z: Vec<i64> = v[..n].iter().map(|&t| t.rem_euclid(m) / 2).collect();
        let x: Vec<i64> = word.x().iter().map(|&t| t as i64).collect();
        out.push(XpOperator::new(nn, &x, &z, v[n])?);
        found_masks.push(mask);
    }
    Ok(out)
}

fn in_gf2_span(basis: &[u64], v: u64) -> bool {
    let mut rows: Vec<u64> = Vec::new();
    for &b in basis {
        let mut r = b;
        for &p in &rows {
            r = r.min(r ^ p);
        }
        if r != 0 {
            rows.push(r);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut r = v;
    for &p in &rows {
        r = r.min(r ^ p);
    }
    r == 0
}

/// Subgroup acting as the identity on `cols`, with those columns removed.
pub fn restrict_off(group: &XpGroup, cols: &[usize]) -> Result<XpGroup> {
    let g = if group.is_canonical() { group.clone() } else { group.canonical_form()? };
    let cond = Condition { sums: cols.iter().map(|&c| vec![c]).collect(), x_equal: Vec::new(), x_zero: cols.to_vec() };
    let elems = satisfying_subgroup(&g, &cond)?;
    let keep: Vec<usize> = (0..g.n()).filter(|c| !cols.contains(c)).collect();
    let kept: Vec<XpOperator> = elems.iter().map(|e| e.select_columns(&keep)).collect();
    XpGroup::new(keep.len(), g.precision(), kept)?.canonical_form()
}

/// Restricts the Z-support to `e_j = e_k` when it is not already: keeps the
/// part of ⟨S_X⟩ whose X-part agrees on `j, k` and adjoins `P_j P_k^{N−1}`.
fn restrict_z_support(group: &XpGroup, j: usize, k: usize) -> Result<(XpGroup, bool)> {
    let e = group.z_support()?;
    let n = group.n();
    let split = e.iter().any(|&v| dense::bit(v, n, j) != dense::bit(v, n, k));
    if !split {
        return Ok((group.clone(), false));
    }
    let (sx, sz) = group.split();
    let mut rows = sx.clone();
    let mut pivots: Vec<XpOperator> = Vec::new();
    for col in [j, k] {
        if let Some(p) = rows.iter().position(|r| r.x()[col] == 1) {
            let piv = rows.remove(p);
            for r in rows.iter_mut() {
                if r.x()[col] == 1 {
                    *r = r.multiply(&piv)?;
                }
            }
            for r in pivots.iter_mut() {
                if r.x()[col] == 1 {
                    *r = r.multiply(&piv)?;
                }
            }
            pivots.push(piv);
        }
    }
    let mut gens = rows;
    match pivots.len() {
        2 => gens.push(pivots[0].multiply(&pivots[1])?),
        1 if pivots[0].x()[j] == pivots[0].x()[k] => gens.push(pivots[0].clone()),
        _ => {}
    }
    gens.extend(sz);
    let mut z = vec![0i64; n];
    z[j] = 1;
    z[k] = group.precision() as i64 - 1;
    gens.push(XpOperator::new(group.precision(), &vec![0; n], &z, 0)?);
    Ok((XpGroup::new(n, group.precision(), gens)?.canonical_form()?, true))
}

/// Matched subgroup for a Bell contraction of legs `j, k`, columns removed.
fn match_and_drop(group: &XpGroup, j: usize, k: usize) -> Result<XpGroup> {
    let cond = Condition { sums: vec![vec![j, k]], x_equal: vec![(j, k)], x_zero: Vec::new() };
    let elems = satisfying_subgroup(group, &cond)?;
    let keep: Vec<usize> = (0..group.n()).filter(|&c| c != j && c != k).collect();
    let kept: Vec<XpOperator> = elems.iter().map(|e| e.select_columns(&keep)).collect();
    XpGroup::new(keep.len(), group.precision(), kept)?.canonical_form()
}

fn check_legs(l: &Lego, j: usize, k: usize) -> Result<()> {
    if j == k {
        return Err(Error::Leg(format!("cannot trace leg {j} with itself")));
    }
    for leg in [j, k] {
        if leg >= l.n() {
            return Err(Error::Leg(format!("leg {leg} out of range for {} legs", l.n())));
        }
        if l.legs[leg] != LegRole::Physical {
            return Err(Error::Leg(format!("leg {leg} is logical")));
        }
    }
    Ok(())
}

/// Self-trace of legs `j, k` (0-based) by operator matching.
pub fn self_trace(l: &Lego, j: usize, k: usize) -> Result<Lego> {
    check_legs(l, j, k)?;
    let mut warnings = l.warnings.clone();
    let (restricted, changed) = restrict_z_support(&l.group, j, k)?;
    if changed {
        warnings.push(format!("Z-support restricted to e_{j} = e_{k} before matching"));
    }
    let group = match_and_drop(&restricted, j, k)?;
    if group.z_support().is_err() {
        warnings.push("empty trace: the contracted tensor vanishes".into());
    }
    let legs: Vec<LegRole> = (0..l.n()).filter(|&c| c != j && c != k).map(|c| l.legs[c]).collect();
    let dense = match &l.dense {
        Some(s) => Some(dense::self_contract(s, j, k, None)?),
        None => None,
    };
    Ok(Lego { group, legs, dense, symbolic: l.symbolic, warnings })
}

/// Trace of legs `j, k` against `(I ⊗ op)|Φ⁺⟩`, i.e. `op` acts on leg `k`
/// before the Bell projection.
pub fn trace_with_insertion(l: &Lego, j: usize, k: usize, op: &Insertion) -> Result<Lego> {
    check_legs(l, j, k)?;
    match op {
        Insertion::Identity => self_trace(l, j, k),
        Insertion::X => {
            let xk = XpOperator::single(l.n(), l.group.precision(), k, 1, 0);
            let conj = l
                .group
                .generators()
                .iter()
                .map(|g| XpOperator::conjugate(&xk, g))
                .collect::<Result<Vec<_>>>()?;
            let moved = Lego {
                group: XpGroup::new(l.n(), l.group.precision(), conj)?.canonical_form()?,
                legs: l.legs.clone(),
                dense: l.dense.as_ref().map(|s| s.apply_single(k, &dense::pauli_mat(1))),
                symbolic: l.symbolic,
                warnings: l.warnings.clone(),
            };
            self_trace(&moved, j, k)
        }
        Insertion::Unitary(u) => {
            let legs: Vec<LegRole> = (0..l.n()).filter(|&c| c != j && c != k).map(|c| l.legs[c]).collect();
            let dense = match &l.dense {
                Some(s) => Some(dense::self_contract(s, j, k, Some(u))?),
                None => return Err(Error::Unsupported("unitary insertion needs a dense shadow".into())),
            };
            let mut warnings = l.warnings.clone();
            warnings.push("dense-only result: the inserted operator is not tracked symbolically".into());
            Ok(Lego { group: XpGroup::empty(legs.len(), l.group.precision()), legs, dense, symbolic: false, warnings })
        }
    }
}

/// Contracts leg `ja` of `a` with leg `kb` of `b`.
pub fn contract(a: &Lego, ja: usize, b: &Lego, kb: usize, op: &Insertion) -> Result<Lego> {
    let t = tensor_product(a, b)?;
    trace_with_insertion(&t, ja, a.n() + kb, op)
}

/// Changes the role of one leg. Turning a physical leg logical requires the
/// tensor to be an isometry from the logical legs (checked on the dense
/// shadow when present).
pub fn redesignate(l: &Lego, leg: usize, role: LegRole) -> Result<Lego> {
    if leg >= l.n() {
        return Err(Error::Leg(format!("leg {leg} out of range for {} legs", l.n())));
    }
    let mut out = l.clone();
    out.legs[leg] = role;
    if role == LegRole::Logical {
        if out.physical_legs().is_empty() {
            return Err(Error::Leg("a code needs at least one physical leg".into()));
        }
        if let Some(s) = &l.dense {
            check_isometry(s, &out.logical_legs())?;
        }
    }
    Ok(out)
}

/// `V†V ∝ I` for the map from `logical` legs to the remaining legs.
pub fn check_isometry(s: &DenseState, logical: &[usize]) -> Result<()> {
    let n = s.n;
    let k = logical.len();
    let phys: Vec<usize> = (0..n).filter(|q| !logical.contains(q)).collect();
    let dl = 1usize << k;
    let dp = 1usize << phys.len();
    let idx = |a: usize, b: usize| -> usize {
        let mut e = 0usize;
        for (pos, &q) in logical.iter().enumerate() {
            e |= ((a >> (k - 1 - pos)) & 1) << (n - 1 - q);
        }
        for (pos, &q) in phys.iter().enumerate() {
            e |= ((b >> (phys.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        e
    };
    let mut gram = vec![C64::new(0.0, 0.0); dl * dl];
    for a in 0..dl {
        for c in 0..dl {
            gram[a * dl + c] = (0..dp).map(|b| s.amps[idx(a, b)].conj() * s.amps[idx(c, b)]).sum();
        }
    }
    let scale = gram[0].re;
    for a in 0..dl {
        for c in 0..dl {
            let want = if a == c { scale } else { 0.0 };
            if (gram[a * dl + c] - C64::new(want, 0.0)).norm() > 1e-9 * scale.max(1.0) || scale <= 0.0 {
                return Err(Error::NotIsometry(format!("legs {logical:?} are not maximally entangled with the rest")));
            }
        }
    }
    Ok(())
}
