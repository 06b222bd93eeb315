use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("argument mismatch: {0}")]
    Mismatch(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("decomposition inconclusive: endomorphism algebra of dimension {dim} exceeds the exhaustion cap {cap}")]
    DecompositionInconclusive { dim: usize, cap: usize },

    #[error("enumeration refused: total dimension {dim} exceeds the cap {cap}")]
    EnumerationRefused { dim: usize, cap: usize },

    #[error("unknown indecomposable {0}")]
    UnknownIndecomposable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing witness: {0}")]
    MissingWitness(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
