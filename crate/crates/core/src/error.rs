use thiserror::Error;

pub type Result<T> = std::result::Result<T, AtlasError>;

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("extension degree {0} outside supported range 2..=22")]
    DegreeOutOfRange(u32),

    #[error("polynomial {poly:#x} has degree {found}, expected {expected}")]
    DegreeMismatch { poly: u64, expected: u32, found: u32 },

    #[error("polynomial {poly:#x} is not primitive (x has order {order})")]
    NonPrimitivePoly { poly: u64, order: u64 },

    #[error("exponent {t} is not coprime to {n}")]
    NotCoprime { t: u64, n: u64 },

    #[error("{what} {value} out of range [{lo}, {hi}]")]
    OutOfRange { what: &'static str, value: u64, lo: u64, hi: u64 },

    #[error("points must be distinct (got {0} twice)")]
    SamePoint(u32),

    #[error("permutation table is invalid: {0}")]
    InvalidPermutation(String),

    #[error("S and F(S) share the triple through point {point} (z = a); lemma-based v does not apply")]
    DegenerateEmbedding { point: u32 },

    #[error("the self-embedding has pinch points")]
    NotClosedSurface,

    #[error("{what} not supported above m = {max} (got m = {m})")]
    TooLarge { what: &'static str, m: u32, max: u32 },

    #[error("parity-check matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("search exceeded its node budget of {0}")]
    Timeout(u64),

    #[error("survey budget exceeded after {processed} of {total} classes")]
    BudgetExceeded {
        processed: usize,
        total: usize,
        partial: Box<crate::classify::ClassReport>,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl AtlasError {
    /// Stable machine-readable tag, used by the CLI error record and the C API.
    pub fn kind(&self) -> &'static str {
        match self {
            AtlasError::DegreeOutOfRange(_) => "degree_out_of_range",
            AtlasError::DegreeMismatch { .. } => "degree_mismatch",
            AtlasError::NonPrimitivePoly { .. } => "non_primitive_poly",
            AtlasError::NotCoprime { .. } => "not_coprime",
            AtlasError::OutOfRange { .. } => "out_of_range",
            AtlasError::SamePoint(_) => "same_point",
            AtlasError::InvalidPermutation(_) => "invalid_permutation",
            AtlasError::DegenerateEmbedding { .. } => "degenerate_embedding",
            AtlasError::NotClosedSurface => "not_closed_surface",
            AtlasError::TooLarge { .. } => "too_large",
            AtlasError::RankDeficient { .. } => "rank_deficient",
            AtlasError::Timeout(_) => "timeout",
            AtlasError::BudgetExceeded { .. } => "budget_exceeded",
            AtlasError::Consistency(_) => "consistency",
            AtlasError::GoldenMismatch(_) => "golden_mismatch",
            AtlasError::Parse(_) => "parse",
            AtlasError::Io(_) => "io",
            AtlasError::Json(_) => "json",
            AtlasError::Csv(_) => "csv",
        }
    }
}
