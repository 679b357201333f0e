use thiserror::Error;

/// Errors from every fallible operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("partition must have at least one part")]
    EmptyPartition,
    #[error("part {index} has non-positive weight")]
    ZeroWeight { index: usize },
    #[error("weights sum to {sum}, expected 2^{width}")]
    BadSum { sum: String, width: u32 },
    #[error("width {0} exceeds the supported maximum of 128")]
    WidthOverflow(u32),
    #[error("sum {0} is not a power of two; pass the width explicitly")]
    NotPowerOfTwo(String),
    #[error("transaction index {index} out of range for {parts} parts")]
    IndexOutOfRange { index: usize, parts: usize },
    #[error("transaction level {level} exceeds width {width}")]
    LevelOutOfRange { level: u32, width: u32 },
    #[error("k = {k} parts do not fit in 2^{width} addresses")]
    KTooLarge { k: usize, width: u32 },
    #[error("k = {0} is too small for this operation")]
    KTooSmall(usize),
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolated(String),
    #[error("sequence rejected: {0}")]
    InvalidSequence(String),
    #[error("rule table does not cover {0} addresses")]
    IncompleteCover(String),
    #[error("pattern width {found} does not match expected width {expected}")]
    WidthMismatch { expected: u32, found: u32 },
    #[error("table too large to evaluate exactly ({rules} general rules, width {width})")]
    TooLargeToEvaluate { rules: usize, width: u32 },
    #[error("width {width} too small for this construction (need at least {min})")]
    WidthTooSmall { width: u32, min: u32 },
    #[error("probability {0} outside [0, 1/2]")]
    BadProbability(String),
    #[error("no strictly positive count")]
    AllZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
