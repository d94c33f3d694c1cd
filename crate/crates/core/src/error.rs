use thiserror::Error;

/// Errors raised by the entropy-vector toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid local dimensions: {0}")]
    InvalidDims(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty operand list")]
    EmptyOperands,
    #[error("party subset is empty")]
    EmptySubset,
    #[error("party {party} out of range for {parties} parties")]
    PartyOutOfRange { party: usize, parties: usize },
    #[error("invalid party subset: {0}")]
    InvalidSubset(String),
    #[error("state is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotUnit { trace: f64 },
    #[error("trace {trace:e} too small to normalize")]
    ZeroTrace { trace: f64 },
    #[error("not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("amplitudes not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("singular marginal: eigenvalue {eigenvalue:e} is below tolerance {tol:e}")]
    SingularMarginal { eigenvalue: f64, tol: f64 },
    #[error("level j={j} out of range 1..={max}")]
    LevelOutOfRange { j: usize, max: usize },
    #[error("{0}")]
    OutOfRange(String),
    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),
    #[error("invalid pair set: {0}")]
    InvalidPairs(String),
    #[error("no admissible coherence pair for this partition family")]
    NoAdmissiblePair,
    #[error("Renyi order must be non-negative, got {0}")]
    NegativeOrder(f64),
    #[error("witness value {0} is at or above sqrt(2)")]
    WitnessOutOfRange(f64),
    #[error("entropy units differ: {0}")]
    UnitMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for errors that describe a state violating a density-matrix
    /// invariant (as opposed to a malformed request or a numerical failure).
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::TraceNotUnit { .. }
                | Error::NotPositive { .. }
                | Error::NotNormalized { .. }
                | Error::InvalidDims(_)
                | Error::DimensionMismatch(_)
                | Error::InvalidParameter(_)
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMarginal { .. }
                | Error::ZeroTrace { .. }
                | Error::NoAdmissiblePair
                | Error::WitnessOutOfRange(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
