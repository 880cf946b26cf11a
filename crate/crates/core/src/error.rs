use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid preference set: {0}")]
    InvalidPreference(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("{op}: parameters out of range ({detail})")]
    OutOfRange { op: &'static str, detail: String },
    #[error("enumeration of {candidates} candidates exceeds budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("inconsistent outcome: {0}")]
    Inconsistent(String),
    #[error("input is not a member of {set}: {detail}")]
    Membership { set: &'static str, detail: String },
    #[error("invalid forest: {0}")]
    Forest(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ill-founded series operation: {0}")]
    IllFounded(String),
    #[error("exp requires a series with zero constant term")]
    NonzeroConstant,
    #[error("series is not divisible: {0}")]
    NotDivisible(String),
    #[error("unknown identity family `{0}`")]
    UnknownIdentity(String),
}

pub(crate) fn out_of_range(op: &'static str, detail: impl Into<String>) -> Error {
    Error::OutOfRange {
        op,
        detail: detail.into(),
    }
}
