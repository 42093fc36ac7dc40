use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("subset is not conjugation-invariant: {member}^{conjugator} = {image} is not a member")]
    NotInvariant {
        member: String,
        conjugator: String,
        image: String,
    },

    #[error("infeasible size: {what} = {size} exceeds cap {cap}")]
    Infeasible { what: String, size: u128, cap: u128 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("insufficient window: residue class {residue} has {points} sample points, need at least {needed}")]
    InsufficientWindow {
        residue: usize,
        points: usize,
        needed: usize,
    },

    #[error("tail is not polynomial: residue class {residue} breaks at weight {weight}")]
    NonPolynomialTail { residue: usize, weight: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn infeasible(what: impl Into<String>, size: impl TryInto<u128>, cap: impl TryInto<u128>) -> Self {
        Error::Infeasible {
            what: what.into(),
            size: size.try_into().unwrap_or(u128::MAX),
            cap: cap.try_into().unwrap_or(u128::MAX),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
