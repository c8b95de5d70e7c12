use profiles::ProfileError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("aliasing: {nodes} quadrature nodes cannot resolve degree {degree}")]
    Aliasing { nodes: usize, degree: usize },
    #[error("invalid band set: {0}")]
    Validation(String),
    #[error("t = {t} too small for truncation K = {k}; about K = {required} modes needed")]
    Truncation { t: f64, k: usize, required: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

pub type Result<T> = std::result::Result<T, SphereError>;
