//! Local concurrences: the gap-penalized cumulative-similarity recurrence
//! over the self-similarity matrix and the extraction of mutually separated
//! local warping paths from it.
//!
//! All positions are 1-based `(row, column)` pairs.

use bitvec::prelude::*;

use crate::ssm::{quantile_threshold, SelfSimilarityMatrix};

/// A position `(i, j)` in an `n × n` matrix, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub i: usize,
    pub j: usize,
}

impl Position {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    pub fn mirrored(self) -> Self {
        Self { i: self.j, j: self.i }
    }
}

/// Admissible steps between consecutive path positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepSet {
    /// `{(1,1), (2,1), (1,2)}`: slopes between ½ and 2.
    #[default]
    Warping,
    /// `{(1,1)}`: strictly diagonal paths.
    Diagonal,
}

const WARPING_STEPS: [(usize, usize); 3] = [(1, 1), (2, 1), (1, 2)];
const DIAGONAL_STEPS: [(usize, usize); 1] = [(1, 1)];

impl StepSet {
    pub fn from_warping(warping: bool) -> Self {
        if warping {
            StepSet::Warping
        } else {
            StepSet::Diagonal
        }
    }

    /// `(row delta, column delta)` pairs in backtracking preference order.
    pub fn steps(self) -> &'static [(usize, usize)] {
        match self {
            StepSet::Warping => &WARPING_STEPS,
            StepSet::Diagonal => &DIAGONAL_STEPS,
        }
    }

    pub fn admits(self, from: Position, to: Position) -> bool {
        to.i > from.i
            && to.j > from.j
            && self.steps().contains(&(to.i - from.i, to.j - from.j))
    }
}

/// Similarity threshold and gap penalties of the recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPenaltyParams {
    pub tau: f64,
    pub additive: f64,
    pub multiplicative: f64,
}

impl GapPenaltyParams {
    /// Default penalties for a threshold: `δ_a = 2τ`, `δ_m = 0.5`.
    pub fn from_tau(tau: f64) -> Self {
        Self {
            tau,
            additive: 2.0 * tau,
            multiplicative: 0.5,
        }
    }

    /// Threshold at the `rho`-quantile of `ssm` with default penalties.
    pub fn from_quantile(ssm: &SelfSimilarityMatrix, rho: f64) -> Self {
        Self::from_tau(quantile_threshold(ssm, rho))
    }

    /// One step of the aggregation: accumulate on high similarity, decay
    /// and subtract on a gap.
    #[inline]
    pub fn extend(&self, acc: f64, sim: f64) -> f64 {
        if sim >= self.tau {
            acc + sim
        } else {
            (self.multiplicative * acc - self.additive).max(0.0)
        }
    }
}

/// `D[i, j]`: the best aggregated similarity of any local warping path
/// ending at `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CumulativeMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i - 1) * self.n + (j - 1)]
    }

    #[inline]
    pub fn at(&self, p: Position) -> f64 {
        self.get(p.i, p.j)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Fills `D` row by row. Every predecessor of `(i, j)` lies in an earlier
/// row, so the row-major order respects all dependencies.
pub fn compute_cumulative(
    ssm: &SelfSimilarityMatrix,
    params: &GapPenaltyParams,
    steps: StepSet,
) -> CumulativeMatrix {
    let n = ssm.size();
    let s = ssm.as_slice();
    let mut d = vec![0.0f64; n * n];
    for r in 0..n {
        let row = r * n;
        for c in 0..n {
            let mut best = 0.0f64;
            if r >= 1 && c >= 1 {
                best = d[row - n + c - 1];
                if steps == StepSet::Warping {
                    if r >= 2 {
                        best = best.max(d[row - 2 * n + c - 1]);
                    }
                    if c >= 2 {
                        best = best.max(d[row - n + c - 2]);
                    }
                }
            }
            d[row + c] = params.extend(best, s[row + c]);
        }
    }
    CumulativeMatrix { n, values: d }
}

/// Dense bit mask over `[1:n]²`, packed so that it stays cache-resident
/// while seeds are visited in value order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionMask {
    n: usize,
    bits: BitVec,
}

impl PositionMask {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            bits: bitvec![0; n * n],
        }
    }

    #[inline]
    pub fn contains(&self, p: Position) -> bool {
        self.bits[(p.i - 1) * self.n + (p.j - 1)]
    }

    #[inline]
    pub fn insert(&mut self, p: Position) {
        self.bits.set((p.i - 1) * self.n + (p.j - 1), true);
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    /// Masked positions in row-major order.
    pub fn positions(&self) -> Vec<Position> {
        self.bits
            .iter_ones()
            .map(|idx| Position::new(idx / self.n + 1, idx % self.n + 1))
            .collect()
    }

    /// Masks the cross-shaped vicinity of every position of `path`: the
    /// `⌊l_min/2⌋` positions on either side in the same column and the same
    /// row, clipped to the matrix.
    pub fn insert_vicinity(&mut self, path: &[Position], l_min: usize) {
        let half = l_min / 2;
        let n = self.n;
        for p in path {
            let lo = p.i.saturating_sub(half).max(1);
            let hi = (p.i + half).min(n);
            for i in lo..=hi {
                self.bits.set((i - 1) * n + (p.j - 1), true);
            }
            let lo = p.j.saturating_sub(half).max(1);
            let hi = (p.j + half).min(n);
            let row = (p.i - 1) * n;
            self.bits[row + lo - 1..row + hi].fill(true);
        }
    }
}

/// The vicinity of a path as an explicit, row-major sorted position list.
pub fn vicinity(path: &[Position], l_min: usize, n: usize) -> Vec<Position> {
    let mut mask = PositionMask::new(n);
    mask.insert_vicinity(path, l_min);
    mask.positions()
}

/// Reconstructs the path ending at `start` by repeatedly moving to the
/// admissible predecessor with the largest `D`. Stops before a masked or
/// zero position, and after a position with no admissible predecessor.
///
/// Predecessor ties follow the order of [`StepSet::steps`]. Returns an empty
/// path when `start` itself is masked or zero.
pub fn backtrack(
    d: &CumulativeMatrix,
    start: Position,
    mask: &PositionMask,
    steps: StepSet,
) -> Vec<Position> {
    let mut rev = Vec::new();
    let mut cur = start;
    while !mask.contains(cur) && d.at(cur) != 0.0 {
        rev.push(cur);
        let mut next: Option<(Position, f64)> = None;
        for &(v, h) in steps.steps() {
            if cur.i > v && cur.j > h {
                let cand = Position::new(cur.i - v, cur.j - h);
                let val = d.at(cand);
                if next.is_none_or(|(_, best)| val > best) {
                    next = Some((cand, val));
                }
            }
        }
        match next {
            Some((p, _)) => cur = p,
            None => break,
        }
    }
    rev.reverse();
    rev
}

/// A local warping path with its column lookup tables.
///
/// For every column `j` in the horizontal projection, `first_index(j)` is the
/// first path index whose column is at least `j`, and `cum_score(j)` is the
/// summed similarity of the positions up to and including that index.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpingPath {
    positions: Vec<Position>,
    similarities: Vec<f64>,
    cumulative: Vec<f64>,
    col_index: Vec<usize>,
}

impl WarpingPath {
    /// Builds the path and its tables. Panics on an empty path or on
    /// columns that do not strictly increase.
    pub fn new(positions: Vec<Position>, ssm: &SelfSimilarityMatrix) -> Self {
        assert!(!positions.is_empty(), "a warping path has at least one position");
        let similarities: Vec<f64> = positions.iter().map(|p| ssm.get(p.i, p.j)).collect();
        let cumulative = similarities
            .iter()
            .scan(0.0, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        let first = positions[0].j;
        let last = positions[positions.len() - 1].j;
        let mut col_index = Vec::with_capacity(last - first + 1);
        let mut k = 0;
        for j in first..=last {
            while positions[k].j < j {
                k += 1;
            }
            col_index.push(k);
        }
        for w in positions.windows(2) {
            assert!(w[1].i > w[0].i && w[1].j > w[0].j, "path must be strictly monotone");
        }
        Self {
            positions,
            similarities,
            cumulative,
            col_index,
        }
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn first(&self) -> Position {
        self.positions[0]
    }

    pub fn last(&self) -> Position {
        self.positions[self.positions.len() - 1]
    }

    /// Vertical projection `π₁` as `(start, end)`.
    pub fn rows(&self) -> (usize, usize) {
        (self.first().i, self.last().i)
    }

    /// Horizontal projection `π₂` as `(start, end)`.
    pub fn cols(&self) -> (usize, usize) {
        (self.first().j, self.last().j)
    }

    pub fn spans_col(&self, j: usize) -> bool {
        let (lo, hi) = self.cols();
        lo <= j && j <= hi
    }

    /// `k_p(j)`, 0-based. `j` must lie in the horizontal projection.
    #[inline]
    pub fn first_index(&self, j: usize) -> usize {
        self.col_index[j - self.first().j]
    }

    /// `ς_p(j)`. `j` must lie in the horizontal projection.
    #[inline]
    pub fn cum_score(&self, j: usize) -> f64 {
        self.cumulative[self.first_index(j)]
    }

    #[inline]
    pub fn similarity_at(&self, k: usize) -> f64 {
        self.similarities[k]
    }

    /// True iff every consecutive step belongs to `steps`.
    pub fn follows(&self, steps: StepSet) -> bool {
        self.positions.windows(2).all(|w| steps.admits(w[0], w[1]))
    }

    /// The same relation with rows and columns swapped.
    pub fn mirrored(&self, ssm: &SelfSimilarityMatrix) -> Self {
        Self::new(self.positions.iter().map(|p| p.mirrored()).collect(), ssm)
    }

    pub fn is_diagonal_of(&self, n: usize) -> bool {
        self.positions.len() == n && self.positions.iter().enumerate().all(|(k, p)| p.i == k + 1 && p.j == k + 1)
    }
}

/// Extracts local warping paths from `D`, strongest first.
///
/// Each kept path (one spanning at least `l_min` in either projection) is
/// returned together with its mirror, and the vicinities of both are masked.
/// Shorter paths only mask their own positions and those of their mirror.
/// The mask therefore stays symmetric, so only the upper triangle needs to
/// be scanned for seeds: row-then-column tie-breaking always prefers the
/// upper member of a mirrored pair.
pub fn extract_paths(
    ssm: &SelfSimilarityMatrix,
    d: &CumulativeMatrix,
    l_min: usize,
    steps: StepSet,
) -> Vec<WarpingPath> {
    let n = d.size();
    let vals = d.as_slice();
    let mut seeds: Vec<(f64, u32)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = vals[i * n + j];
            if v > 0.0 {
                seeds.push((v, (i * n + j) as u32));
            }
        }
    }
    seeds.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut mask = PositionMask::new(n);
    let mut paths = Vec::new();
    for &(_, idx) in &seeds {
        let idx = idx as usize;
        let seed = Position::new(idx / n + 1, idx % n + 1);
        if mask.contains(seed) {
            continue;
        }
        let path = backtrack(d, seed, &mask, steps);
        if path.is_empty() {
            continue;
        }
        let rows = path[path.len() - 1].i - path[0].i + 1;
        let cols = path[path.len() - 1].j - path[0].j + 1;
        let mirror: Vec<Position> = path.iter().map(|p| p.mirrored()).collect();
        if rows >= l_min || cols >= l_min {
            mask.insert_vicinity(&path, l_min);
            mask.insert_vicinity(&mirror, l_min);
            let is_self_mirror = path == mirror;
            paths.push(WarpingPath::new(path, ssm));
            if !is_self_mirror {
                paths.push(WarpingPath::new(mirror, ssm));
            }
        } else {
            for (&p, &q) in path.iter().zip(&mirror) {
                mask.insert(p);
                mask.insert(q);
            }
        }
    }
    paths
}

/// Runs the full path search on a series' self-similarity matrix: derives
/// the threshold from `rho`, fills `D` and extracts the paths.
pub fn find_paths_in(
    ssm: &SelfSimilarityMatrix,
    l_min: usize,
    rho: f64,
    steps: StepSet,
) -> Vec<WarpingPath> {
    let params = GapPenaltyParams::from_quantile(ssm, rho);
    let d = compute_cumulative(ssm, &params, steps);
    extract_paths(ssm, &d, l_min, steps)
}

/// Path search on a series. The series should already be z-normalized.
pub fn find_paths(
    ts: &crate::series::TimeSeries,
    l_min: usize,
    rho: f64,
    steps: StepSet,
) -> Vec<WarpingPath> {
    let ssm = crate::ssm::compute_ssm(ts);
    find_paths_in(&ssm, l_min, rho, steps)
}
