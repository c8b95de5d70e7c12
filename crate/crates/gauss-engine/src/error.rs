use profiles::ProfileError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("aliasing: {nodes} quadrature nodes cannot resolve degree {degree}")]
    Aliasing { nodes: usize, degree: usize },
    #[error("quadrature did not converge: refinements differ by {diff:e} (tol {tol:e})")]
    Accuracy { diff: f64, tol: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

pub type Result<T> = std::result::Result<T, GaussError>;
