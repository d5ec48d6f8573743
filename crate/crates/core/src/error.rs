//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("construction error: {0}")]
    Construction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("grading violation in entry ({i},{j}): {detail}")]
    Grading { i: usize, j: usize, detail: String },

    #[error("operator is not skew-adjoint: entries ({i},{j})/({j},{i}) are not adjoint-opposite")]
    NotSkewAdjoint { i: usize, j: usize },

    #[error("kernel intersection may be nontrivial: leading algebraic block is singular")]
    SingularLeadingBlock,

    #[error("Neumann series for D-block inverse did not terminate within {max_order} steps; residual order {residual_order}")]
    NonTerminatingInverse { max_order: usize, residual_order: usize },

    #[error("no dispersionless limit: {0}")]
    NoDispersionlessLimit(String),

    #[error("semisimplicity failure: {0}")]
    Semisimple(String),

    #[error("unknown builtin pencil '{0}'; valid names: kdv, so5, sl3-frac, camassa-holm, scalar")]
    UnknownBuiltin(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at {pointer}: {detail}")]
    Validation { pointer: String, detail: String },

    #[error("polynomial division failed: {0}")]
    Division(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
