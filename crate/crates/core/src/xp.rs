//! XP group elements `ω^p ⊗ X^{x_i} P^{z_i}` with `ω = e^{iπ/N}` and
//! `P = diag(1, ω²)`, stored as reduced integer triples.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XpOperator {
    precision: u32,
    x: Vec<u8>,
    z: Vec<u32>,
    p: u32,
}

impl XpOperator {
    /// Builds an operator, reducing `x mod 2`, `z mod N`, `p mod 2N`.
    pub fn new(precision: u32, x: &[i64], z: &[i64], p: i64) -> Result<Self> {
        if precision < 2 {
            return Err(Error::UnsupportedPrecision(precision));
        }
        if x.len() != z.len() {
            return Err(Error::Dimension(format!("x has {} entries, z has {}", x.len(), z.len())));
        }
        let n = precision as i64;
        Ok(Self {
            precision,
            x: x.iter().map(|&v| v.rem_euclid(2) as u8).collect(),
            z: z.iter().map(|&v| v.rem_euclid(n) as u32).collect(),
            p: p.rem_euclid(2 * n) as u32,
        })
    }

    pub fn identity(n: usize, precision: u32) -> Self {
        Self { precision, x: vec![0; n], z: vec![0; n], p: 0 }
    }

    /// Single-qubit factor `X^x P^z` on qubit `q` of `n`.
    pub fn single(n: usize, precision: u32, q: usize, x: u8, z: u32) -> Self {
        let mut op = Self::identity(n, precision);
        op.x[q] = x % 2;
        op.z[q] = z % precision;
        op
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn x(&self) -> &[u8] {
        &self.x
    }

    pub fn z(&self) -> &[u32] {
        &self.z
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.p == 0 && self.z.iter().all(|&v| v == 0)
    }

    /// Weight: number of qubits with a nontrivial factor.
    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(&a, &b)| a != 0 || b != 0).count()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.precision != other.precision {
            return Err(Error::Incompatible(format!(
                "n={} N={} vs n={} N={}",
                self.n(),
                self.precision,
                other.n(),
                other.precision
            )));
        }
        Ok(())
    }

    /// Group law `XP(u1)·XP(u2) = XP(u1+u2)·D_N(2·x2·z1)`.
    pub fn multiply(&self, b: &Self) -> Result<Self> {
        self.check(b)?;
        let n = self.precision as i64;
        let mut x = Vec::with_capacity(self.n());
        let mut z = Vec::with_capacity(self.n());
        let mut p = self.p as i64 + b.p as i64;
        for i in 0..self.n() {
            let (x1, z1) = (self.x[i] as i64, self.z[i] as i64);
            let (x2, z2) = (b.x[i] as i64, b.z[i] as i64);
            let d = 2 * x2 * z1;
            x.push(x1 + x2);
            z.push(z1 + z2 - d);
            p += d;
        }
        Self::new(self.precision, &x, &z, p.rem_euclid(2 * n))
    }

    pub fn inverse(&self) -> Self {
        let n = self.precision as i64;
        let mut z = Vec::with_capacity(self.n());
        let mut p = -(self.p as i64);
        for i in 0..self.n() {
            let (xi, zi) = (self.x[i] as i64, self.z[i] as i64);
            z.push((2 * xi - 1) * zi);
            p -= 2 * xi * zi;
        }
        let x: Vec<i64> = self.x.iter().map(|&v| v as i64).collect();
        Self::new(self.precision, &x, &z, p.rem_euclid(2 * n)).expect("shape preserved")
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.n(), self.precision);
        for _ in 0..k.unsigned_abs() {
            acc = acc.multiply(&base).expect("same shape");
        }
        acc
    }

    /// `a·b·a⁻¹ = b·D_N(2x_a z_b + 2x_b z_a − 4x_a x_b z_a)`.
    pub fn conjugate(a: &Self, b: &Self) -> Result<Self> {
        a.check(b)?;
        let corr: Vec<i64> = (0..a.n())
            .map(|i| {
                let (xa, za) = (a.x[i] as i64, a.z[i] as i64);
                let (xb, zb) = (b.x[i] as i64, b.z[i] as i64);
                2 * xa * zb + 2 * xb * za - 4 * xa * xb * za
            })
            .collect();
        b.multiply(&antisymmetric(&corr, a.precision))
    }

    /// Commutator `a·b·a⁻¹·b⁻¹`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        Self::conjugate(a, b)?.multiply(&b.inverse())
    }

    /// Action on a computational basis state: `|e⟩ ↦ ω^{phase}|e ⊕ x⟩`.
    pub fn act_on_basis(&self, e: u64) -> (u64, u32) {
        let n = self.n();
        let mut phase = self.p as u64;
        let mut flip = 0u64;
        for i in 0..n {
            let bit = (e >> (n - 1 - i)) & 1;
            phase += 2 * self.z[i] as u64 * bit;
            flip |= (self.x[i] as u64) << (n - 1 - i);
        }
        (e ^ flip, (phase % (2 * self.precision as u64)) as u32)
    }

    /// Phase exponent of a diagonal operator on `|e⟩`, given as a bit slice.
    pub fn diagonal_phase(&self, e: &[u8]) -> u32 {
        let mut phase = self.p as u64;
        for (zi, &ei) in self.z.iter().zip(e) {
            phase += 2 * *zi as u64 * ei as u64;
        }
        (phase % (2 * self.precision as u64)) as u32
    }

    /// Keeps only the listed qubit columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            precision: self.precision,
            x: cols.iter().map(|&c| self.x[c]).collect(),
            z: cols.iter().map(|&c| self.z[c]).collect(),
            p: self.p,
        }
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.precision != other.precision {
            return Err(Error::Incompatible(format!("precision {} vs {}", self.precision, other.precision)));
        }
        let mut x = self.x.clone();
        x.extend_from_slice(&other.x);
        let mut z = self.z.clone();
        z.extend_from_slice(&other.z);
        Ok(Self { precision: self.precision, x, z, p: (self.p + other.p) % (2 * self.precision) })
    }

    pub fn with_phase(&self, p: i64) -> Self {
        let mut out = self.clone();
        out.p = p.rem_euclid(2 * self.precision as i64) as u32;
        out
    }
}

/// `D_N(z) = XP_N(0 | −z | Σz)`. The sum is taken before reduction.
pub fn antisymmetric(z: &[i64], precision: u32) -> XpOperator {
    let neg: Vec<i64> = z.iter().map(|&v| -v).collect();
    let x = vec![0i64; z.len()];
    XpOperator::new(precision, &x, &neg, z.iter().sum()).expect("precision checked by caller")
}

fn render_vec<T: fmt::Display + Copy + Into<u64>>(v: &[T], sep_needed: bool) -> String {
    if sep_needed {
        v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    } else {
        v.iter().map(|a| a.to_string()).collect()
    }
}

impl fmt::Display for XpOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.precision > 10;
        write!(f, "XP_{}({}|{}|{})", self.precision, render_vec(&self.x, wide), render_vec(&self.z, wide), self.p)
    }
}

impl std::str::FromStr for XpOperator {
    type Err = Error;

    /// Parses `XP_N(x|z|p)`; vectors are digit strings or comma separated.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected XP_N(x|z|p), got '{s}'"));
        let s = s.trim();
        let rest = s.strip_prefix("XP_").ok_or_else(bad)?;
        let open = rest.find('(').ok_or_else(bad)?;
        let precision: u32 = rest[..open].parse().map_err(|_| bad())?;
        let inner = rest[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split('|').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let vec = |t: &str| -> Result<Vec<i64>> {
            if t.contains(',') {
                t.split(',').map(|v| v.trim().parse::<i64>().map_err(|_| bad())).collect()
            } else {
                t.chars().map(|c| c.to_digit(10).map(|d| d as i64).ok_or_else(bad)).collect()
            }
        };
        let p: i64 = parts[2].trim().parse().map_err(|_| bad())?;
        XpOperator::new(precision, &vec(parts[0])?, &vec(parts[1])?, p)
    }
}
