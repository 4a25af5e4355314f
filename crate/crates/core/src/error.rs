use thiserror::Error;

/// Errors raised across the crate. Numeric payloads are reported as `f64`
/// regardless of the scalar type the computation ran in.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NonHermitian(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("bad dimension: expected {expected}, got {got}")]
    BadDim { expected: usize, got: usize },

    #[error("Kraus operators are not complete (max |sum K^dagger K - I| = {0:e})")]
    IncompleteKraus(f64),

    #[error("invalid density matrix: {0}")]
    BadState(String),

    #[error("input-marginal Bloch vector A is nonzero (|A| = {0:e})")]
    NonzeroA(f64),

    #[error("invalid parameter: {0}")]
    BadParam(String),

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("degenerate point data: {0}")]
    DegenerateData(String),

    #[error("fitted quadric is not an ellipsoid: {0}")]
    NotAnEllipsoid(String),

    #[error("no reconstructed Choi candidate is completely positive and trace preserving")]
    NoValidCandidate,

    #[error("mesh resolution must be at least 8, got {0}")]
    BadResolution(usize),

    #[error("invalid gate targets: {0}")]
    BadTargets(String),

    #[error("shot count must be positive")]
    BadShots,

    #[error("feasibility solver hit its iteration cap at t = {t} (residual {residual:e})")]
    SolverNoConvergence { t: f64, residual: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
