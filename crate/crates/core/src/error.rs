use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),

    #[error("bessel evaluation failed for n={n}, x={x}: {reason}")]
    Evaluation { n: i64, x: f64, reason: &'static str },

    #[error("zero finding failed for root index r={r}: {reason}")]
    ZeroFinding { r: usize, reason: String },

    #[error("quadrature did not converge after {panels} panels (estimate {estimate:e} > tol {tol:e})")]
    Quadrature { panels: usize, estimate: f64, tol: f64 },

    #[error("invalid spectrum at index {index}: {reason}")]
    Validation { index: usize, reason: String },

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("size cap exceeded: {what} = {got} > {cap}")]
    SizeCap { what: &'static str, got: usize, cap: usize },

    #[error("point D={d} has {count} essentially distinct representations")]
    StructureViolation { d: i128, count: usize },

    #[error("no exception representation shape matches a known system for D={0}")]
    UnmatchedShape(i128),

    #[error("missing epsilon for exception D={0}")]
    MissingEpsilon(i128),

    #[error("coefficient support element {0} is not in the spectrum")]
    SupportOutsideSpectrum(i128),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("cache file {path}: {reason}")]
    Cache { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
