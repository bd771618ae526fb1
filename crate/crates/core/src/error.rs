use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("theta function evaluated at x = 0")]
    ZeroArgument,
    #[error("theta product did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("nome must satisfy |p| < 1, got |p| = {0}")]
    InvalidNome(f64),
    #[error("pole encountered: {0}")]
    PoleEncountered(String),
    #[error("board {heights:?} is not {j}-attacking")]
    NotJAttackingBoard { heights: Vec<usize>, j: usize },
    #[error("board {0:?} is not a Ferrers board")]
    NotFerrers(Vec<usize>),
    #[error("bad board spec: {0}")]
    BadBoardSpec(String),
    #[error("unknown identity: {0}")]
    UnknownIdentity(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
    #[error("gave up after {0} resamples")]
    TooManyResamples(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
