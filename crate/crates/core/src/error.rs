use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("instance mismatch: {left} vs {right}")]
    InstanceMismatch { left: String, right: String },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix does not have full column rank")]
    RankDeficient,
    #[error("matrix is singular")]
    Singular,
    #[error("lattice is not a sublattice of the given lattice")]
    NotSublattice,
    #[error("lattice index is not an integer")]
    NonIntegralIndex,
    #[error("element is not in the isometry semigroup (L = {0})")]
    NotInSigma(u64),
    #[error("element is not in the corner of the endomorphism")]
    NotInCorner,
    #[error("element is not supported inside N")]
    NotInN,
    #[error("scalar is not invertible in closed form: {0}")]
    NotInvertible(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::InstanceMismatch { .. } => 3,
            _ => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
