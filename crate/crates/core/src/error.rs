use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("gamma pole at {0}")]
    Pole(String),

    #[error(
        "insufficient guard digits for an order-{order} binomial transform: have {have}, need {need}"
    )]
    Precision { order: u64, have: u32, need: u32 },

    #[error("invalid precision context: {0}")]
    InvalidContext(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: ordinates are not strictly ascending")]
    Order { path: PathBuf, line: usize },

    #[error("sieve bound {requested} exceeds the configured limit {limit}")]
    Capacity { requested: u64, limit: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
