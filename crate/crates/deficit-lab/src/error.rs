use inequality_lab::LabError;
use profiles::ProfileError;
use sphere_engine::SphereError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeficitError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("infeasible set construction: {0}")]
    Construction(String),
    #[error("experiment error: {0}")]
    Experiment(String),
    #[error("degenerate linear part: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Lab(#[from] LabError),
}

pub type Result<T> = std::result::Result<T, DeficitError>;
