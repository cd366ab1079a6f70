use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid clustering: {0}")]
    InvalidClustering(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("LFR generation failed during {stage}: {message}")]
    Generation {
        stage: &'static str,
        message: String,
    },

    #[error("metric undefined: {0}")]
    Metric(String),

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn generation(stage: &'static str, message: impl Into<String>) -> Self {
        Error::Generation {
            stage,
            message: message.into(),
        }
    }

    pub(crate) fn file(path: &std::path::Path, source: io::Error) -> Self {
        Error::File {
            path: path.display().to_string(),
            source,
        }
    }
}
