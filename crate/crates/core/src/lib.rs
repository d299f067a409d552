//! Discovery of variable-length, time-warped motif sets in multivariate
//! time series, plus a segment-matching F1 metric and a benchmark generator
//! that concatenates labeled instances.
//!
//! Indices inside this crate are 1-based and inclusive.

pub mod benchgen;
pub mod discovery;
pub mod error;
pub mod evaluation;
pub mod loco;
pub mod segment;
pub mod series;
pub mod ssm;

pub use discovery::{locomotif, DiscoveryConfig, DiscoveryResult, MotifSet};
pub use error::{Error, Result};
pub use evaluation::{GroundTruth, MatchingMatrix, Scores};
pub use loco::{Position, StepSet, WarpingPath};
pub use segment::Segment;
pub use series::{znormalize, TimeSeries};
pub use ssm::{compute_ssm, quantile_threshold, SelfSimilarityMatrix};
