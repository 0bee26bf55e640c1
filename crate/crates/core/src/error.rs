use thiserror::Error;

/// Errors raised by the geometry kernel, the valuation engine and the exact algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported ambient dimension {0} (supported: 1..=4)")]
    UnsupportedDimension(usize),

    #[error("degenerate body")]
    DegenerateBody,

    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(f64),

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("frame is not orthonormal (deviation {0:.3e})")]
    NonOrthonormalFrame(f64),

    #[error("halfspace system is unbounded")]
    Unbounded,

    #[error("halfspace system is infeasible")]
    Infeasible,

    #[error("{what} out of range: {value} not in {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("side lengths must be positive, got {0}")]
    NonPositiveSide(f64),

    #[error("cannot add q*pi^{left} and q*pi^{right}: mixed powers of pi")]
    MixedPiPower { left: i32, right: i32 },

    #[error("valuation is not homogeneous")]
    NonHomogeneous,

    #[error("sample count must be positive")]
    ZeroSamples,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
