use thiserror::Error;

use crate::instances::ProblemKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("problem kind `{0}` has no concrete payload and is not supported here")]
    UnsupportedKind(ProblemKind),

    #[error("kind mismatch: expected `{expected}`, found `{found}`")]
    KindMismatch {
        expected: ProblemKind,
        found: ProblemKind,
    },

    #[error("certificate of type `{found}` cannot witness a `{kind}` instance")]
    CertificateMismatch { kind: ProblemKind, found: &'static str },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("search space of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("program has {vars} variables, more than the cap of {cap}")]
    VarCapExceeded { vars: usize, cap: usize },

    #[error("unknown reduction `{0}`")]
    UnknownReduction(String),

    #[error("unknown problem kind `{0}`")]
    UnknownKind(String),

    #[error("chain is broken at link {index}: `{reduction}` expects `{expected}`, got `{found}`")]
    BrokenChain {
        index: usize,
        reduction: String,
        expected: ProblemKind,
        found: ProblemKind,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInstance(msg.into()))
}

pub(crate) fn bad_cert<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidCertificate(msg.into()))
}
