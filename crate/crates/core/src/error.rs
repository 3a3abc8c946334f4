use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value {value} for `{key}`: expected {expected}")]
    InvalidParam {
        key: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("network size must be at least {min}, got {n}")]
    NetworkTooSmall { n: u32, min: u32 },

    #[error("pair ({lo}, {hi}) is not canonical: need lo < hi")]
    NonCanonicalPair { lo: u32, hi: u32 },

    #[error("pair ({lo}, {hi}) does not fit a network of {n} nodes")]
    PairOutOfRange { lo: u32, hi: u32, n: u32 },

    #[error("cannot summarize an empty outcome list")]
    EmptyOutcomes,

    #[error("sweep grid {0}")]
    InvalidGrid(String),

    #[error("sweep point (N={n}, policy={policy}) failed: {source}")]
    Point {
        n: u32,
        policy: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("nothing to write: no simulated or analytic rows")]
    NothingToWrite,

    #[error("failed to write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
