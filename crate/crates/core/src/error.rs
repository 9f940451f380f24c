use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("bidegree mismatch: {0}")]
    BidegreeMismatch(String),
    #[error("malformed section: {0}")]
    MalformedSection(String),
    #[error("point {0} is a blow-up centre; evaluate on the exceptional divisor instead")]
    AmbiguousPoint(String),
    #[error("assembled matrix a is singular")]
    FramingViolation,
    #[error("block {0} is singular; configuration is not normalizable")]
    NonGenericStratum(String),
    #[error("configuration is not gauge-normalized: {0}")]
    NotNormalized(String),
    #[error("singular group element block: {0}")]
    SingularGroupElement(String),
    #[error("beta is not surjective at {0}")]
    MonadDegeneracy(String),
    #[error("rank drop locus is not finite: {0}")]
    NotInP(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("sampling failed: {0}")]
    SamplingFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
