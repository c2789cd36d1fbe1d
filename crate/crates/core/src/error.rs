use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: need 1 <= alpha < beta, got alpha={alpha}, beta={beta}")]
    InvalidParams { alpha: u64, beta: u64 },

    #[error("logarithm of 0 is undefined; n must be positive")]
    ZeroArgument,

    #[error("({j}, {n}) is not an element of the index set")]
    NotInDelta { j: u64, n: u64 },

    #[error("omega({n}) is undefined: n must exceed alpha * L(n) = {bound}")]
    OmegaUndefined { n: u64, bound: u64 },

    /// An exact division that the construction guarantees came out with a
    /// remainder. Always a bug, never bad input.
    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("invalid rational {input:?}: {reason}")]
    InvalidRational { input: String, reason: &'static str },

    #[error("constant {c} must exceed {bound}")]
    ConstantTooSmall { c: String, bound: String },

    #[error("{what} must be at least {min}")]
    OutOfRange { what: &'static str, min: u64 },

    #[error("{path}:{line}: {reason}")]
    LengthFile {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("invalid automaton: {0}")]
    InvalidDfa(String),

    #[error(
        "k = {k} is too small: element #{k} (n = {n}) must have n >= {threshold} and length >= {q_tail}"
    )]
    KTooSmall {
        k: usize,
        n: u64,
        threshold: u64,
        q_tail: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
