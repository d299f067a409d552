use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("time series must have at least one sample and one dimension")]
    EmptySeries,
    #[error("sample {index} has {found} values, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("sample {index} contains a non-finite value")]
    NonFinite { index: usize },
    #[error("invalid segment [{start}:{end}] for a series of length {n}")]
    InvalidSegment { start: usize, end: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid ground truth: {0}")]
    InvalidGroundTruth(String),
    #[error("invalid instance pool: {0}")]
    InvalidPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
