//! JSON formats: check matrices, lego networks and dense shadows.
//!
//! Leg indices in network files are 0-based.

use serde::{Deserialize, Serialize};

use crate::code::{LegRole, XpGroup};
use crate::dense::{self, bitstring, DenseState, Mat2};
use crate::error::{Error, Result};
use crate::lego::{self, Insertion, Lego};
use crate::registry;
use crate::xp::XpOperator;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub x: Vec<u8>,
    pub z: Vec<u32>,
    pub p: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckMatrix {
    pub n: usize,
    pub precision: u32,
    pub designation: Vec<LegRole>,
    pub rows: Vec<Row>,
}

impl CheckMatrix {
    pub fn from_group(g: &XpGroup, designation: &[LegRole]) -> Self {
        Self {
            n: g.n(),
            precision: g.precision(),
            designation: designation.to_vec(),
            rows: g.generators().iter().map(|o| Row { x: o.x().to_vec(), z: o.z().to_vec(), p: o.p() }).collect(),
        }
    }

    /// The group as written, not canonicalized.
    pub fn group(&self) -> Result<XpGroup> {
        if self.designation.len() != self.n {
            return Err(Error::Parse(format!("designation has {} entries for n = {}", self.designation.len(), self.n)));
        }
        let mut gens = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            if r.x.len() != self.n || r.z.len() != self.n {
                return Err(Error::Parse(format!("row length does not match n = {}", self.n)));
            }
            let x: Vec<i64> = r.x.iter().map(|&v| v as i64).collect();
            let z: Vec<i64> = r.z.iter().map(|&v| v as i64).collect();
            gens.push(XpOperator::new(self.precision, &x, &z, r.p as i64)?);
        }
        XpGroup::new(self.n, self.precision, gens)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LegoSpec {
    Named { name: String },
    Matrix { matrix: CheckMatrix },
}

/// `[lego_a, leg_a, lego_b, leg_b]` with an optional insertion name on `leg_b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BondSpec(pub usize, pub usize, pub usize, pub usize, #[serde(default)] pub Option<String>);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Designation {
    pub leg: usize,
    pub role: LegRole,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Network {
    pub legos: Vec<LegoSpec>,
    #[serde(default)]
    pub bonds: Vec<BondSpec>,
    /// Applied to the legs that remain after all bonds, in their final order.
    #[serde(default)]
    pub designate: Vec<Designation>,
}

impl Network {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn insertion(name: Option<&str>) -> Result<Insertion> {
    let c = |re: f64, im: f64| num_complex::Complex64::new(re, im);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let m: Mat2 = match name.unwrap_or("I") {
        "I" => return Ok(Insertion::Identity),
        "X" => return Ok(Insertion::X),
        "Y" => dense::pauli_mat(2),
        "Z" => dense::pauli_mat(3),
        "H" => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        "S" => dense::mat2_diag(c(1.0, 0.0), c(0.0, 1.0)),
        "T" => dense::mat2_diag(c(1.0, 0.0), c(s, s)),
        other => return Err(Error::Parse(format!("unknown insertion '{other}' (expected I, X, Y, Z, H, S or T)"))),
    };
    Ok(Insertion::Unitary(m))
}

fn build_lego(spec: &LegoSpec) -> Result<Lego> {
    let l = match spec {
        LegoSpec::Named { name } => registry::lookup(name)?.lego()?,
        LegoSpec::Matrix { matrix } => {
            let l = Lego::with_legs(matrix.group()?, matrix.designation.clone())?;
            if l.n() <= dense::DENSE_LIMIT && l.group.codewords().map(|t| t.codewords.len() == 1).unwrap_or(false) {
                l.with_state_shadow()?
            } else {
                l
            }
        }
    };
    // Contraction treats every leg as a tensor index.
    let n = l.n();
    Ok(Lego { legs: vec![LegRole::Physical; n], ..l })
}

/// Runs a network: tensor all legos in order, trace each bond, then apply
/// designations.
pub fn run_network(net: &Network) -> Result<Lego> {
    if net.legos.is_empty() {
        return Err(Error::Parse("network has no legos".into()));
    }
    let legos = net.legos.iter().map(build_lego).collect::<Result<Vec<_>>>()?;
    let mut offsets = Vec::with_capacity(legos.len());
    let mut acc = 0;
    for l in &legos {
        offsets.push(acc);
        acc += l.n();
    }
    let mut cur = legos[0].clone();
    for l in &legos[1..] {
        cur = lego::tensor_product(&cur, l)?;
    }
    let mut alive: Vec<usize> = (0..acc).collect();
    for b in &net.bonds {
        let leg = |lego: usize, leg: usize| -> Result<usize> {
            if lego >= legos.len() || leg >= legos[lego].n() {
                return Err(Error::Leg(format!("lego {lego} leg {leg} does not exist")));
            }
            let global = offsets[lego] + leg;
            alive.iter().position(|&g| g == global).ok_or_else(|| Error::Leg(format!("lego {lego} leg {leg} is already traced")))
        };
        let (ga, gb) = (leg(b.0, b.1)?, leg(b.2, b.3)?);
        let (ja, kb) = (alive[ga], alive[gb]);
        cur = lego::trace_with_insertion(&cur, ga, gb, &insertion(b.4.as_deref())?)?;
        alive.retain(|&g| g != ja && g != kb);
    }
    for d in &net.designate {
        cur = lego::redesignate(&cur, d.leg, d.role)?;
    }
    Ok(cur)
}

/// `(bitstring, re, im)` triples of the nonzero amplitudes, sorted by bitstring.
pub fn dense_triples(s: &DenseState) -> Vec<(String, f64, f64)> {
    let mut out: Vec<_> = s
        .amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(e, a)| (bitstring(e as u64, s.n), a.re, a.im))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub lego: CheckMatrix,
    /// Stabilizer code on the physical legs, when some legs are logical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<CheckMatrix>,
    pub xp: bool,
    pub symbolic: bool,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense: Option<Vec<(String, f64, f64)>>,
}

impl TraceReport {
    pub fn new(l: &Lego, with_dense: bool) -> Result<Self> {
        let code = if l.logical_legs().is_empty() {
            None
        } else {
            let g = l.code_group()?;
            Some(CheckMatrix::from_group(&g, &vec![LegRole::Physical; g.n()]))
        };
        Ok(Self {
            lego: CheckMatrix::from_group(&l.group, &l.legs),
            code,
            xp: l.is_xp(),
            symbolic: l.symbolic,
            warnings: l.warnings.clone(),
            dense: if with_dense { l.dense.as_ref().map(|s| dense_triples(&s.normalized())) } else { None },
        })
    }
}

/// A code named on the command line: a registry entry or a check-matrix file.
#[derive(Clone, Debug)]
pub struct LoadedCode {
    pub name: String,
    pub group: XpGroup,
    pub legs: Vec<LegRole>,
}

impl LoadedCode {
    /// Stabilizer group of the code on the physical legs.
    pub fn code_group(&self) -> Result<XpGroup> {
        Lego::with_legs(self.group.clone(), self.legs.clone())?.code_group()
    }
}

/// Resolves `arg` as a registry name, or else as a path to a check-matrix file.
pub fn load_code(arg: &str) -> Result<LoadedCode> {
    match registry::lookup(arg) {
        Ok(e) => Ok(LoadedCode { name: e.name.to_string(), group: e.group, legs: e.legs }),
        Err(not_found) => {
            if !std::path::Path::new(arg).is_file() {
                return Err(not_found);
            }
            let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
            let m = CheckMatrix::from_json(&text)?;
            Ok(LoadedCode { name: arg.to_string(), group: m.group()?, legs: m.designation })
        }
    }
}
