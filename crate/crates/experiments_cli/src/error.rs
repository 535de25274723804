use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Holder(#[from] speclab_holder_bump::HolderError),
    #[error(transparent)]
    Counting(#[from] speclab_counting::CountingError),
    #[error(transparent)]
    Truncation(#[from] speclab_truncation::TruncationError),
    #[error("omega = {omega}: {source}")]
    Spectral { omega: f64, source: speclab_spectral::SpectralError },
    #[error("omega = {omega}: {source}")]
    Wkb { omega: f64, source: speclab_wkb::WkbError },
    #[error(transparent)]
    Gl(#[from] speclab_gl::GlError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("reference arithmetic: {0}")]
    Reference(String),
}

impl CliError {
    /// 2 for bad invocations, 1 for everything that failed while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}
