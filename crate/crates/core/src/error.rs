use thiserror::Error;

/// Everything that can go wrong while building or combining objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("supremum/infimum of an empty family")]
    EmptyFamily,
    #[error("negative scalar {0} acting on the extended positive cone")]
    NegativeScalar(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("objects live on different measurable spaces")]
    SpaceMismatch,
    #[error("set {0} is not a subset of the space")]
    SetOutsideSpace(String),
    #[error("enumeration over {size} atoms exceeds the bound of {bound}")]
    EnumerationBound { size: usize, bound: usize },
    #[error("space has {0} atoms; at most 64 are supported")]
    TooManyAtoms(usize),
    #[error("duplicate atom label {0:?}")]
    DuplicateAtom(String),
    #[error("value {0} is not in the positive cone")]
    NotPositive(String),
    #[error("infinite value where a finite one is required: {0}")]
    InfiniteValue(String),
    #[error("meet requires finite measures; the partition formula for the infimum can fail for infinite measures")]
    InfiniteOperand,
    #[error("function is not order-integrable: {0}")]
    NotIntegrable(String),
    #[error("function is not in the operator's domain: {0}")]
    NotInDomain(String),
    #[error("sequence is not increasing at index {0}")]
    NotIncreasing(usize),
    #[error("sequence is not constant from the declared index {0}")]
    NotEventuallyConstant(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown name {0:?}")]
    UnknownName(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
