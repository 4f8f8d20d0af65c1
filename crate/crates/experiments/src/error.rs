use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Model(#[from] async_oco::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("dataset `{name}` not found at {path}; {hint}")]
    MissingDataset { name: String, path: PathBuf, hint: String },
    #[error("dataset `{name}`: expected {expected} examples, found {found}")]
    UnexpectedSize { name: String, expected: usize, found: usize },
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("nothing to plot")]
    NothingToPlot,
    #[error("plot {path}: {message}")]
    Plot { path: PathBuf, message: String },
    #[error("invalid experiment: {0}")]
    Invalid(String),
}

impl ExperimentError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| ExperimentError::Io { path, source }
    }
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;
