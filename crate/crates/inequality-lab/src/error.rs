use gauss_engine::GaussError;
use line_engine::LineError;
use profiles::ProfileError;
use sphere_engine::SphereError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("non-finite report field in {0}")]
    NonFinite(String),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

pub type Result<T> = std::result::Result<T, LabError>;
