use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("W has no arity-0 component")]
    EmptyLabelSet,
    #[error("duplicate label {0}")]
    DuplicateLabel(u8),
    #[error("label 0 is not allowed, labels start at 1")]
    ZeroLabel,
    #[error("label sets overlap on {0:?}")]
    LabelOverlap(Vec<u8>),
    #[error("not a bijection of {{1..{0}}}")]
    NotABijection(usize),
    #[error("label {label} lies outside the permutation domain {{1..{degree}}}")]
    LabelOutOfDomain { label: u8, degree: usize },
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inner argument of a plethysm must have zero constant term")]
    PlethysmConstantTerm,
    #[error("plethystic inverse needs a series of the form p[1] + (degree >= 2)")]
    NotPlethysticallyInvertible,
    #[error("exp needs a series with zero constant term")]
    ExpConstantTerm,
    #[error("log needs a series with constant term 1")]
    LogConstantTerm,
    #[error("zero raised to a negative power at partition {0:?}")]
    ZeroToNegativePower(Vec<u32>),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
