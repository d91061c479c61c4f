use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    OutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is rank deficient over GF(2)(D): rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("code has dimension zero")]
    ZeroDimension,
    #[error("state space 2^{nu} exceeds the exact-search budget 2^{limit}")]
    StateSpaceTooLarge { nu: usize, limit: usize },
    #[error("encoder is catastrophic: zero-weight cycle through nonzero states")]
    Catastrophic,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("graph lacks the circulant structure needed for the two-dimensional form")]
    NotCirculant,
    #[error("vector is not a codeword")]
    NotCodeword,
    #[error("all-zero information gives the trivial codeword")]
    TrivialCodeword,
    #[error("search budget exhausted{}", best_suffix(.best))]
    BudgetExhausted { best: Option<u32> },
    #[error("root bracketing failed: {0}")]
    Bracketing(String),
    #[error("value outside the model: {0}")]
    Domain(String),
    #[error("I/O error: {0}")]
    Io(String),
}

fn best_suffix(best: &Option<u32>) -> String {
    best.map(|w| format!("; best weight found {w}")).unwrap_or_default()
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
