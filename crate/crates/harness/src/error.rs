use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad flags or an invalid configuration file.
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Profile(#[from] profiles::ProfileError),
    #[error(transparent)]
    Gauss(#[from] gauss_engine::GaussError),
    #[error(transparent)]
    Sphere(#[from] sphere_engine::SphereError),
    #[error(transparent)]
    Line(#[from] line_engine::LineError),
    #[error(transparent)]
    Lab(#[from] inequality_lab::LabError),
    #[error(transparent)]
    Deficit(#[from] deficit_lab::DeficitError),
}

impl HarnessError {
    /// Process exit status: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_)
            | Self::Lab(inequality_lab::LabError::Domain(_) | inequality_lab::LabError::Parameter(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
