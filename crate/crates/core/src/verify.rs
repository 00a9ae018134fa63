//! Invariant suites for registry codes, shared by the CLI `verify` command
//! and the test targets.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{is_power_of_two, LegRole, XpGroup};
use crate::dense::{self, omega_pow};
use crate::enumerator::{enumerators, macwilliams};
use crate::error::Result;
use crate::io::CheckMatrix;
use crate::lego::state_of;
use crate::registry::CodeEntry;
use crate::xp::XpOperator;

/// Largest n for which `verify` runs the dense enumerator check.
pub const ENUMERATOR_LIMIT: usize = 8;
const GROUP_LIMIT: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), pass, detail: detail.into() }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((pass, detail)) => Self::new(name, pass, detail),
            Err(e) => Self::new(name, false, e.to_string()),
        }
    }
}

/// Random element of `⟨gens⟩`: each generator raised to a random power, in a
/// random order.
pub fn random_element(gens: &[XpOperator], n: usize, precision: u32, rng: &mut ChaCha8Rng) -> Result<XpOperator> {
    let mut order: Vec<usize> = (0..gens.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut g = XpOperator::identity(n, precision);
    for &i in &order {
        g = g.multiply(&gens[i].power(rng.gen_range(0..2 * precision as i64)))?;
    }
    Ok(g)
}

/// `Π_Z g` as a monomial matrix: column `e` holds `coeff[e]` in row `target[e]`.
struct Monomial {
    target: Vec<u64>,
    coeff: Vec<C64>,
}

impl Monomial {
    fn restricted(g: &XpOperator, support: &[bool]) -> Self {
        let d = support.len();
        let (mut target, mut coeff) = (Vec::with_capacity(d), Vec::with_capacity(d));
        for e in 0..d {
            let (f, ph) = g.act_on_basis(e as u64);
            target.push(f);
            coeff.push(if support[f as usize] { omega_pow(g.precision(), ph as i64) } else { C64::new(0.0, 0.0) });
        }
        Self { target, coeff }
    }

    fn hermitian_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for e in 0..self.target.len() {
            let c = self.coeff[e];
            if c.norm() == 0.0 {
                continue;
            }
            let f = self.target[e] as usize;
            let back = if self.target[f] as usize == e { self.coeff[f] } else { C64::new(0.0, 0.0) };
            worst = worst.max((back - c.conj()).norm());
        }
        worst
    }

    /// Column `e` of `self · other` as `(row, value)`.
    fn compose(&self, other: &Self, e: usize) -> (u64, C64) {
        let f = other.target[e];
        (self.target[f as usize], self.coeff[f as usize] * other.coeff[e])
    }
}

/// Operator lemmas on random elements `g` of the code's group, with `Π_Z` the
/// projector onto the Z-support: `Π_Z g` Hermitian, `(Π_Z g)² = Π_Z`, the
/// `Π_Z g` pairwise commuting, `[r, g] = 0` for `r ∈ ⟨R_Z⟩`, and `Π_Z s = Π_Z`
/// for diagonal `s`.
pub fn support_lemmas(group: &XpGroup, samples: usize, seed: u64, tol: f64) -> Result<Vec<Check>> {
    let g = if group.is_canonical() { group.clone() } else { group.canonical_form()? };
    let (n, nn) = (g.n(), g.precision());
    let d = 1usize << n;
    let mut support = vec![false; d];
    for e in g.z_support()? {
        support[e as usize] = true;
    }
    let r_z = g.r_z_generators()?;
    let s_z = g.s_z();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems: Vec<XpOperator> = (0..samples).map(|_| random_element(g.generators(), n, nn, &mut rng)).collect::<Result<_>>()?;
    let mats: Vec<Monomial> = elems.iter().map(|x| Monomial::restricted(x, &support)).collect();

    let herm = mats.iter().map(Monomial::hermitian_error).fold(0.0, f64::max);
    let mut square: f64 = 0.0;
    for m in &mats {
        for e in 0..d {
            let (row, v) = m.compose(m, e);
            let want = if support[e] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            let err = if row as usize == e || v.norm() < tol { (v - want).norm() } else { v.norm() + want.norm() };
            square = square.max(err);
        }
    }
    let mut commute: f64 = 0.0;
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            for e in 0..d {
                let (ra, va) = mats[i].compose(&mats[j], e);
                let (rb, vb) = mats[j].compose(&mats[i], e);
                let err = if ra == rb { (va - vb).norm() } else { va.norm() + vb.norm() };
                commute = commute.max(err);
            }
        }
    }
    let mut rz_ok = true;
    for _ in 0..samples {
        let r = random_element(&r_z, n, nn, &mut rng)?;
        for x in &elems {
            rz_ok &= XpOperator::commutator(&r, x)?.is_identity();
        }
    }
    let mut sz_ok = true;
    for _ in 0..samples {
        let s = random_element(&s_z, n, nn, &mut rng)?;
        sz_ok &= (0..d).filter(|&e| support[e]).all(|e| s.diagonal_phase(&dense::bits(e as u64, n)) == 0);
    }
    Ok(vec![
        Check::new("Π_Z g Hermitian", herm <= tol, format!("max error {herm:.1e}")),
        Check::new("(Π_Z g)² = Π_Z", square <= tol, format!("max error {square:.1e}")),
        Check::new("Π_Z g commute", commute <= tol, format!("max error {commute:.1e}")),
        Check::new("[R_Z, g] = 0", rz_ok, format!("{samples} x {samples} pairs")),
        Check::new("Π_Z s = Π_Z", sz_ok, format!("{samples} diagonal elements")),
    ])
}

pub fn verify_entry(entry: &CodeEntry, tol: f64) -> Vec<Check> {
    verify_group(&entry.group, &entry.legs, tol)
}

/// Every invariant suite that applies to the group at its size.
pub fn verify_group(group: &XpGroup, legs: &[LegRole], tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let g = match group.canonical_form() {
        Ok(g) => g,
        Err(e) => return vec![Check::new("canonical form", false, e.to_string())],
    };
    out.push(Check::from_result("canonical form idempotent", g.canonical_form().map(|h| (h == g, String::new()))));
    out.push(Check::from_result(
        "JSON round-trip",
        (|| {
            let text = CheckMatrix::from_group(&g, legs).to_json();
            let back = CheckMatrix::from_json(&text)?;
            Ok((back.group()?.generators() == g.generators() && back.to_json() == text, String::new()))
        })(),
    ));
    if is_power_of_two(g.precision()) {
        out.push(Check::from_result("counting |S_X|+|L_X|+|S_Z| = n", g.counting_check().map(|b| (b, String::new()))));
    }
    match support_lemmas(&g, 100, 1, tol) {
        Ok(v) => out.extend(v),
        Err(e) => out.push(Check::new("support lemmas", false, e.to_string())),
    }
    if g.n() > dense::DENSE_LIMIT {
        return out;
    }
    out.push(Check::from_result(
        "projector = group average",
        (|| {
            let p = dense::projector(&g)?;
            match dense::group_average(g.generators(), g.n(), g.precision(), GROUP_LIMIT) {
                Ok(avg) => {
                    let dist = p.distance(&avg);
                    Ok((dist <= tol * (1 << g.n()) as f64, format!("distance {dist:.1e}")))
                }
                Err(_) => Ok((true, format!("skipped: group exceeds {GROUP_LIMIT} elements"))),
            }
        })(),
    ));
    out.push(Check::from_result(
        "codewords stabilized",
        (|| {
            let table = g.codewords()?;
            let k = table.codewords.len();
            let mut ok = true;
            for cw in &table.codewords {
                let mut s = dense::DenseState::zero(g.n());
                for &(e, ph) in cw {
                    s.amps[e as usize] += omega_pow(g.precision(), ph as i64);
                }
                ok &= g.generators().iter().all(|x| dense::stabilizes(x, &s, tol));
            }
            let tr = dense::projector(&g)?.trace().re;
            ok &= (tr - k as f64).abs() <= tol * (1 << g.n()) as f64;
            Ok((ok, format!("K = {k}")))
        })(),
    ));
    if g.n() <= ENUMERATOR_LIMIT {
        out.push(Check::from_result(
            "MacWilliams B = K A((x+3y)/2, (x-y)/2)",
            (|| {
                let (a, b) = enumerators(&dense::projector(&g)?)?;
                Ok((macwilliams(&a) == b, format!("A = {a}")))
            })(),
        ));
    }
    if let Ok(s) = state_of(&g) {
        out.push(Check::from_result(
            "dense XP certificate",
            dense::xp_certificate(&s, g.precision()).map(|c| (c.is_some(), String::new())),
        ));
    }
    out
}
