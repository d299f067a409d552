//! Multivariate time series storage and z-normalization.

use crate::error::{Error, Result};
use crate::segment::Segment;

/// A sequence of `n` samples, each a vector of `d` finite values.
///
/// Samples are stored row-major: sample `t` (0-based) occupies
/// `values[t * d..(t + 1) * d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    n: usize,
    d: usize,
}

impl TimeSeries {
    /// Builds a series from a flat row-major buffer.
    pub fn from_flat(values: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 || values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if !values.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch {
                index: values.len() / d,
                expected: d,
                found: values.len() % d,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: pos / d });
        }
        let n = values.len() / d;
        Ok(Self { values, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * d);
        for (index, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: d,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(values, d)
    }

    pub fn univariate(values: Vec<f64>) -> Result<Self> {
        Self::from_flat(values, 1)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dims(&self) -> usize {
        self.d
    }

    /// Sample at 0-based offset `t`.
    pub fn sample(&self, t: usize) -> &[f64] {
        &self.values[t * self.d..(t + 1) * self.d]
    }

    pub fn samples(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    /// All values of dimension `dim`, in time order.
    pub fn channel(&self, dim: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(dim).step_by(self.d).copied()
    }

    /// The subsequence covered by `seg` (1-based inclusive indices).
    pub fn slice(&self, seg: Segment) -> Result<TimeSeries> {
        if seg.end() > self.n {
            return Err(Error::InvalidSegment {
                start: seg.start(),
                end: seg.end(),
                n: self.n,
            });
        }
        let lo = (seg.start() - 1) * self.d;
        let hi = seg.end() * self.d;
        Ok(Self {
            values: self.values[lo..hi].to_vec(),
            n: seg.len(),
            d: self.d,
        })
    }

    /// Appends the samples of `other`, which must have the same dimensionality.
    pub fn concat(parts: &[&TimeSeries]) -> Result<TimeSeries> {
        let d = parts.first().map(|p| p.d).ok_or(Error::EmptySeries)?;
        let mut values = Vec::with_capacity(parts.iter().map(|p| p.values.len()).sum());
        for (index, part) in parts.iter().enumerate() {
            if part.d != d {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: d,
                    found: part.d,
                });
            }
            values.extend_from_slice(&part.values);
        }
        Self::from_flat(values, d)
    }
}

/// Per-dimension mean and population standard deviation.
pub fn channel_stats(ts: &TimeSeries, dim: usize) -> (f64, f64) {
    let n = ts.len() as f64;
    let mean = ts.channel(dim).sum::<f64>() / n;
    let var = ts.channel(dim).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Standard deviations at or below this are treated as a constant channel.
const ZERO_STD: f64 = 1e-12;

/// Z-normalizes every dimension independently (population standard
/// deviation). A constant dimension maps to all zeros.
pub fn znormalize(ts: &TimeSeries) -> TimeSeries {
    let d = ts.dims();
    let stats: Vec<(f64, f64)> = (0..d).map(|k| channel_stats(ts, k)).collect();
    let values = ts
        .as_flat()
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let (mean, std) = stats[idx % d];
            if std <= ZERO_STD {
                0.0
            } else {
                (v - mean) / std
            }
        })
        .collect();
    TimeSeries {
        values,
        n: ts.len(),
        d,
    }
}
