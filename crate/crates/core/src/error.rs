use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    /// The coefficient matrix does not have full column rank.
    #[error("rank-deficient: rank {rank}, need {required}")]
    RankDeficient { rank: usize, required: usize },

    /// Redundant equations disagree with the unique solution of the others.
    #[error("inconsistent linear system")]
    Inconsistent,

    /// Column operations alone cannot bring the leading block to identity.
    #[error("leading {0}x{0} block is singular; column reduction needs a row permutation")]
    SingularLeadingBlock(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimensionMismatch {
        op,
        detail: detail.into(),
    }
}
