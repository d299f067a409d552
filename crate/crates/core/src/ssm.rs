//! Self-similarity matrix and the quantile-based similarity threshold.

use crate::series::TimeSeries;

/// Dense `n × n` matrix of `exp(-‖x_i − x_j‖²)`, stored row-major.
///
/// Accessors take 1-based `(i, j)` positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimilarityMatrix {
    n: usize,
    values: Vec<f64>,
    /// Symmetric, unit diagonal, no entry above 1.
    canonical: bool,
}

impl SelfSimilarityMatrix {
    /// Wraps an explicit row-major matrix. Intended for tests and tools that
    /// already hold similarity values; entries are not validated.
    pub fn from_values(n: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n * n, "matrix must be n × n");
        let canonical = (0..n).all(|i| {
            values[i * n + i] == 1.0
                && (i + 1..n).all(|j| values[i * n + j] == values[j * n + i] && values[i * n + j] <= 1.0)
        });
        Self { n, values, canonical }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i - 1) * self.n + (j - 1)]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Similarity of two samples: `exp(-‖x − y‖²)`.
#[inline]
pub fn similarity(x: &[f64], y: &[f64]) -> f64 {
    let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (-sq).exp()
}

/// Computes the self-similarity matrix of an (already z-normalized) series.
pub fn compute_ssm(ts: &TimeSeries) -> SelfSimilarityMatrix {
    let n = ts.len();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        let xi = ts.sample(i);
        values[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let s = similarity(xi, ts.sample(j));
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    SelfSimilarityMatrix {
        n,
        values,
        canonical: true,
    }
}

/// Linearly interpolated `rho`-quantile of all `n²` entries, diagonal
/// included. With `N` sorted entries the quantile sits at rank
/// `(N − 1)·rho`.
pub fn quantile_threshold(ssm: &SelfSimilarityMatrix, rho: f64) -> f64 {
    if !ssm.canonical {
        return quantile(ssm.as_slice(), rho);
    }
    // By symmetry the sorted n² entries are every strict-upper entry twice,
    // followed by the n diagonal ones (nothing exceeds 1), so order
    // statistics only need the upper triangle: half the memory traffic.
    let n = ssm.size();
    let vals = ssm.as_slice();
    let m = n * (n - 1) / 2;
    let rank = (n * n - 1) as f64 * rho.clamp(0.0, 1.0);
    let lo = rank.floor() as usize;
    let frac = rank - lo as f64;
    if lo >= 2 * m {
        return 1.0;
    }
    let mut upper = Vec::with_capacity(m);
    for i in 0..n {
        upper.extend_from_slice(&vals[i * n + i + 1..(i + 1) * n]);
    }
    let t = lo / 2;
    let (_, &mut lo_val, rest) = upper.select_nth_unstable_by(t, f64::total_cmp);
    if frac == 0.0 {
        return lo_val;
    }
    let hi_val = if lo + 1 >= 2 * m {
        1.0
    } else if (lo + 1) / 2 == t {
        lo_val
    } else {
        rest.iter().copied().fold(f64::INFINITY, f64::min)
    };
    lo_val + frac * (hi_val - lo_val)
}

pub(crate) fn quantile(values: &[f64], rho: f64) -> f64 {
    assert!(!values.is_empty());
    let rho = rho.clamp(0.0, 1.0);
    let rank = (values.len() - 1) as f64 * rho;
    let lo = rank.floor() as usize;
    let frac = rank - lo as f64;
    let mut buf = values.to_vec();
    let (_, &mut lo_val, upper) = buf.select_nth_unstable_by(lo, f64::total_cmp);
    if frac == 0.0 || upper.is_empty() {
        return lo_val;
    }
    let hi_val = upper.iter().copied().fold(f64::INFINITY, f64::min);
    lo_val + frac * (hi_val - lo_val)
}
