use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate segment: both endpoints are at {0:?}")]
    DegenerateSegment([f64; 3]),

    #[error("distance {distance} m is inside the near-field guard of {min} m")]
    NearField { distance: f64, min: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("k-means needs at least one point")]
    EmptyPoints,

    #[error("k-means asked for {k} clusters over {n} points")]
    TooManyClusters { k: usize, n: usize },

    #[error("empty sample set")]
    EmptySamples,

    #[error("percentage change against a zero baseline")]
    ZeroBaseline,

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn config(line: usize, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input (config files, flags), as
    /// opposed to failures while running or writing results.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::InvalidInput(_))
    }
}
