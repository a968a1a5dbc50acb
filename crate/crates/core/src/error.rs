use thiserror::Error;

use crate::space::Bidegree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient fields differ: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("{context}: shape mismatch between a map of bidegree {left} and a map of bidegree {right}")]
    ShapeMismatch {
        context: &'static str,
        left: Bidegree,
        right: Bidegree,
    },

    #[error("map of bidegree {bidegree} sends `{from}` to `{to}`, which is outside the target component")]
    BidegreeViolation {
        bidegree: Bidegree,
        from: String,
        to: String,
    },

    #[error("bidegree {found} is not the required {expected} for {what}")]
    WrongBidegree {
        what: String,
        expected: Bidegree,
        found: Bidegree,
    },

    #[error("identity `{identity}` fails with {defect} nonzero entries")]
    IdentityFails { identity: String, defect: usize },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("cannot parse scalar `{0}`")]
    ParseScalar(String),

    #[error("components have mixed total degrees {0} and {1}")]
    MixedDegrees(i64, i64),

    #[error("truncation arities differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("not a contraction: {0}")]
    NotAContraction(String),

    #[error("{0}")]
    Rejected(String),

    #[error("interchange format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
