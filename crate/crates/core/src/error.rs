use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least {needed} non-empty documents, found {found}")]
    TooFewDocuments { needed: usize, found: usize },

    #[error("contingency table has a zero grand total")]
    ZeroTotal,

    #[error("table must have at least 2 rows and 2 columns, got {rows}x{cols}")]
    TableTooSmall { rows: usize, cols: usize },

    #[error("singular value decomposition of the {rows}x{cols} residual matrix did not converge")]
    SvdNonConvergence { rows: usize, cols: usize },

    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("degenerate point set: every sampled triangle in repetition {repetition} was degenerate")]
    DegeneratePointSet { repetition: usize },

    #[error("exhaustive scan over {points} points exceeds the cap of {cap}; use sampling instead")]
    ExhaustiveCapExceeded { points: usize, cap: usize },

    #[error("all pairwise distances are zero")]
    AllDistancesZero,

    #[error("word {0:?} is not in the candidate set")]
    AnchorNotCandidate(String),

    #[error("unknown word {0:?}")]
    UnknownWord(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("distance matrix is not a valid metric input: {0}")]
    InvalidDistances(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
