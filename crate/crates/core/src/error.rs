use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid quiver presentation: {0}")]
    InvalidPresentation(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("path is not composable: {0}")]
    NonComposable(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("action axiom fails: {0}")]
    ActionAxiom(String),
    #[error("zero module has no projective cover or presentation")]
    ZeroModule,
    #[error("unsupported field configuration: {0}")]
    UnsupportedField(String),
    #[error("distinguished idempotent {0} is not primitive")]
    NonPrimitive(String),
    #[error("decomposition failed: {0}")]
    DecomposeFailed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("computation truncated at bound {0}")]
    Truncated(usize),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
