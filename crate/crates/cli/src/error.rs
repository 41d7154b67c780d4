use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    MissingInput { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {}: {source}", path.display())]
    BadInput { path: PathBuf, source: serde_json::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] gsp_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("every benchmark cell failed ({0} failures)")]
    TotalFailure(usize),
}

impl CliError {
    /// 1 missing or unreadable input, 2 bad flags, 3 numerical failure, 4 benchmark total failure.
    pub fn exit_code(&self) -> u8 {
        use gsp_core::Error as E;
        match self {
            CliError::MissingInput { .. }
            | CliError::BadInput { .. }
            | CliError::Write { .. }
            | CliError::Csv(_) => 1,
            CliError::Usage(_) => 2,
            CliError::TotalFailure(_) => 4,
            CliError::Core(e) => match e {
                E::InvalidParameter(_) | E::InvalidTarget { .. } | E::EmptySet => 2,
                E::InvalidGraph(_) | E::DimensionMismatch { .. } | E::InvalidVertexSet(_) => 1,
                E::ZeroDegree(_)
                | E::NonPositiveInnerProduct { .. }
                | E::NotFinite
                | E::ZeroSignal
                | E::EmptyComplement
                | E::RankDeficient { .. }
                | E::SingularGram { .. }
                | E::DegenerateCell(_) => 3,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
