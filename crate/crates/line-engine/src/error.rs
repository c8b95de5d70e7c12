use profiles::ProfileError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineError {
    #[error("domain [{a}, {b}] loses {lost:e} of the mass; try [{suggest_a}, {suggest_b}]")]
    DomainTooSmall {
        a: f64,
        b: f64,
        lost: f64,
        suggest_a: f64,
        suggest_b: f64,
    },
    #[error("V″ = {found} < κ = {kappa} at x = {x}")]
    Curvature { x: f64, found: f64, kappa: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("semigroup residual {residual:e} exceeds {tol:e}; increase the number of modes")]
    IncreaseModes { residual: f64, tol: f64 },
    #[error("eigen-solver failure: {0}")]
    Numerical(String),
    #[error("potential table: {0}")]
    Table(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

pub type Result<T> = std::result::Result<T, LineError>;
