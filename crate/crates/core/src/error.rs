use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum BoasError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("derivative order {order} is above the supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("value out of representable range: {0}")]
    Range(String),
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("odd order {0} needs an auxiliary first derivative")]
    MissingAuxiliary(usize),
    #[error("quadrature specification error: {0}")]
    Quadrature(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("incompatible vectors: {0}")]
    Incompatible(String),
    #[error("malformed signal description: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, BoasError>;
