use alloc::string::String;

/// Failures raised by the algebra models and verifiers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite norm encountered: {0}")]
    NumericOverflow(String),

    /// Pointwise division hit a value at or below the threshold.
    #[error("singular division at grid index {index}: |f| = {magnitude:e} <= {threshold:e}")]
    SingularDivision {
        index: usize,
        magnitude: f64,
        threshold: f64,
    },

    /// A Fourier coefficient inside the division band is at or below the floor.
    #[error("fourier coefficient at frequency {frequency} has modulus {magnitude:e} <= floor {floor:e}")]
    DivisionFloor { frequency: i64, magnitude: f64, floor: f64 },

    #[error("rank deficient: singular value {index} is {value:e} <= threshold {threshold:e}")]
    RankDeficient { index: usize, value: f64, threshold: f64 },

    #[error("order {order} aliases on a grid supporting orders below {limit}")]
    Aliasing { order: usize, limit: usize },

    #[error("iteration did not converge after {0} sweeps")]
    NonConvergence(usize),

    #[error("cannot perturb: {0}")]
    CannotPerturb(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
