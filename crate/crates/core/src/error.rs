use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed scalar {0}")]
    Scalar(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid mixed Hodge structure: {0}")]
    InvalidMhs(String),

    #[error("invalid formal Hodge structure: {0}")]
    InvalidFhs(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("torsion in lattice not allowed here: {0}")]
    Torsion(String),

    #[error("level mismatch: {0}")]
    Level(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("not special: {0}")]
    NotSpecial(String),

    #[error("condition {condition} fails: {detail}")]
    ImageCondition { condition: char, detail: String },

    #[error("sequence not exact: {0}")]
    NotExact(String),

    #[error("{0}")]
    Parse(String),

    #[error("unsupported document version {found:?} (expected {expected:?})")]
    Version { found: String, expected: String },
}
