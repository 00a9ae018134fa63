use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid modulus {0}")]
    InvalidModulus(u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("incompatible operators: {0}")]
    Incompatible(String),
    #[error("empty code: the group stabilizes no state")]
    EmptyCode,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported precision {0}")]
    UnsupportedPrecision(u32),
    #[error("invalid leg: {0}")]
    Leg(String),
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("invalid unitary: {0}")]
    InvalidUnitary(String),
    #[error("size overflow: {0} qubits exceeds the dense limit")]
    SizeOverflow(usize),
    #[error("not a projector: {0}")]
    NotProjector(String),
    #[error("enumerator coefficient {value} does not snap to a rational (residual {residual:e})")]
    Snap { value: f64, residual: f64 },
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("nondeterministic measurement: {0}")]
    Nondeterministic(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("unknown code '{name}'; available: {candidates}")]
    NotFound { name: String, candidates: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
