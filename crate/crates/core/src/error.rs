use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("no term dominates all others componentwise")]
    NoHighestTerm,
    #[error("term {0} does not lie in the q-subalgebra")]
    NotInQSubalgebra(String),
    #[error("root order must be odd and positive, got {0}")]
    InvalidRootOrder(i64),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("unknown puncture {0}")]
    UnknownPuncture(usize),
    #[error("coordinates not realizable by an integral lamination: {0}")]
    NonRealizable(String),
    #[error("invalid curve word: {0}")]
    InvalidCurve(String),
    #[error("nonperipheral component with negative total weight {0}")]
    NegativeNonPeripheral(i64),
    #[error("curve is not peripheral")]
    NotPeripheral,
    #[error("coordinate {index} is the half-integer {doubled}/2")]
    NotInALattice { index: usize, doubled: i64 },
    #[error("internal parity violation: {0}")]
    InternalParityViolation(String),
    #[error("product expansion failed: {0}")]
    PeelFailure(String),
    #[error("vector is not in the kernel of epsilon: epsilon*a = {0:?}")]
    KernelViolation(Vec<i64>),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Domain,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::InternalParityViolation(_) | Error::PeelFailure(_) => ErrorKind::Internal,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
