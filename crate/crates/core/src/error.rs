use thiserror::Error;

/// Errors raised by the exact geometry and lattice routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Interval refinement reached the precision cap without separating the
    /// value from zero.
    #[error("sign indeterminate after {bits} bits of refinement")]
    SignIndeterminate { bits: u32 },

    /// A symbolic generator cannot supply an interval as narrow as requested.
    #[error("precision unreachable: {0}")]
    PrecisionUnreachable(String),

    /// A product or quotient would leave the supported scalar tier.
    #[error("field closure violation: {0}")]
    FieldClosureViolation(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension unsupported: {0}")]
    DimensionUnsupported(String),

    /// Preconditions of a verification mode are not met.
    #[error("mode unavailable: {0}")]
    ModeUnavailable(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
