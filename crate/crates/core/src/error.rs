use thiserror::Error;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("state is terminal")]
    Terminal,
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("no hitting set exists: some vertex is the zero vector")]
    NoHittingSet,
    #[error("external policy fault: {0}")]
    ExternalPolicyFault(String),
    #[error("no strategy entry for state {0}")]
    MissingStrategy(String),
    #[error("document error: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;
