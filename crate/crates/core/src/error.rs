use thiserror::Error;

use crate::scalar::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("constant term present: b(0) is the central element, not an element of H'")]
    ConstantTerm,
    #[error("mode index 0 is central and has no mode action")]
    ZeroMode,
    #[error("element has a nonzero {0} part where none is allowed")]
    UnexpectedPart(&'static str),
    #[error("channel {channel} out of range for rank {rank}")]
    Channel { channel: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("not locally nilpotent: {0}")]
    NotNilpotent(String),
    #[error("number-operator exponential needs a group scalar")]
    MissingGroupScalar,
    #[error("eigenvalue {0} is not an integer")]
    NonIntegralEigenvalue(Rational),
    #[error("inconsistent central charge: {0}")]
    InconsistentCentralCharge(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("singular probe matrix")]
    SingularProbes,
    #[error("invalid gap set: {0}")]
    InvalidGaps(String),
}

pub type Result<T> = std::result::Result<T, Error>;
