//! Segment-matching evaluation of discovered motif sets against ground
//! truth: a generalized confusion matrix built by optimal assignment, and
//! micro-averaged precision, recall and F1.

use crate::error::{Error, Result};
use crate::segment::Segment;

/// Ground-truth motif sets. Segments are pairwise disjoint across all sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    sets: Vec<Vec<Segment>>,
}

impl GroundTruth {
    pub fn new(sets: Vec<Vec<Segment>>) -> Result<Self> {
        let mut all: Vec<Segment> = sets.iter().flatten().copied().collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0].intersection_len(w[1]) > 0) {
            return Err(Error::InvalidGroundTruth(format!(
                "segments {} and {} overlap",
                w[0], w[1]
            )));
        }
        Ok(Self { sets })
    }

    pub fn sets(&self) -> &[Vec<Segment>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// For each ground-truth segment, the index of the discovered segment it is
/// matched with, if any.
///
/// A pair qualifies when `|α ∩ β| / |α ∪ β| > 0.5`; the highest ratio wins,
/// ties going to the discovered segment with the smallest start index (then
/// the earliest listed).
pub fn match_segments(gt: &[Segment], discovered: &[Segment]) -> Vec<Option<usize>> {
    gt.iter()
        .map(|&beta| {
            let mut best: Option<(usize, usize, usize)> = None; // (index, inter, union)
            for (idx, &alpha) in discovered.iter().enumerate() {
                let inter = alpha.intersection_len(beta);
                let union = alpha.union_len(beta);
                if 2 * inter <= union {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, b_inter, b_union)) => {
                        let lhs = inter * b_union;
                        let rhs = b_inter * union;
                        lhs > rhs || (lhs == rhs && alpha.start() < discovered[bi].start())
                    }
                };
                if better {
                    best = Some((idx, inter, union));
                }
            }
            best.map(|(idx, _, _)| idx)
        })
        .collect()
}

/// `(κ′+1) × (κ+1)` matching matrix. The first `min(κ, κ′)` diagonal cells
/// hold the optimally assigned pairs; the last column counts unmatched
/// ground-truth segments and the last row unmatched discovered segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingMatrix {
    pub cells: Vec<Vec<usize>>,
    /// Ground-truth set shown in each of the first κ′ rows.
    pub gt_order: Vec<usize>,
    /// Discovered set shown in each of the first κ columns.
    pub discovered_order: Vec<usize>,
}

impl MatchingMatrix {
    pub fn gt_sets(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn discovered_sets(&self) -> usize {
        self.cells[0].len() - 1
    }

    pub fn diagonal_sum(&self) -> usize {
        let k = self.gt_sets().min(self.discovered_sets());
        (0..k).map(|i| self.cells[i][i]).sum()
    }
}

/// Raw `κ′ × κ` counts of matched segments between ground-truth set `i` and
/// discovered set `j`, plus unmatched counts per ground-truth set.
fn count_matches(gt: &GroundTruth, discovered: &[Vec<Segment>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let flat: Vec<Segment> = discovered.iter().flatten().copied().collect();
    let owner: Vec<usize> = discovered
        .iter()
        .enumerate()
        .flat_map(|(j, set)| std::iter::repeat_n(j, set.len()))
        .collect();
    let mut counts = vec![vec![0usize; discovered.len()]; gt.len()];
    let mut unmatched = vec![0usize; gt.len()];
    for (i, set) in gt.sets().iter().enumerate() {
        for m in match_segments(set, &flat) {
            match m {
                Some(idx) => counts[i][owner[idx]] += 1,
                None => unmatched[i] += 1,
            }
        }
    }
    (counts, unmatched)
}

/// Row and column orders that put an optimal assignment of the `κ′ × κ`
/// count matrix on the leading diagonal. Assigned pairs come first, in
/// ground-truth order; unassigned rows and columns follow in index order.
pub fn assign_sets(counts: &[Vec<usize>], k: usize) -> (Vec<usize>, Vec<usize>) {
    let kp = counts.len();
    let size = kp.max(k);
    let weights: Vec<Vec<i64>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i < kp && j < k { counts[i][j] as i64 } else { 0 })
                .collect()
        })
        .collect();
    let assignment = max_weight_assignment(&weights);

    let mut gt_order: Vec<usize> = (0..kp).filter(|&i| assignment[i] < k).collect();
    let mut discovered_order: Vec<usize> = gt_order.iter().map(|&i| assignment[i]).collect();
    gt_order.extend((0..kp).filter(|&i| assignment[i] >= k));
    let unassigned: Vec<usize> = (0..k).filter(|j| !discovered_order.contains(j)).collect();
    discovered_order.extend(unassigned);
    (gt_order, discovered_order)
}

pub fn matching_matrix(gt: &GroundTruth, discovered: &[Vec<Segment>]) -> MatchingMatrix {
    let kp = gt.len();
    let k = discovered.len();
    let (counts, unmatched) = count_matches(gt, discovered);

    let (gt_order, discovered_order) = assign_sets(&counts, k);
    let mut cells = vec![vec![0usize; k + 1]; kp + 1];
    for (r, &i) in gt_order.iter().enumerate() {
        for (c, &j) in discovered_order.iter().enumerate() {
            cells[r][c] = counts[i][j];
        }
        cells[r][k] = unmatched[i];
    }
    for (c, &j) in discovered_order.iter().enumerate() {
        let matched: usize = (0..kp).map(|i| counts[i][j]).sum();
        cells[kp][c] = discovered[j].len() - matched;
    }
    MatchingMatrix {
        cells,
        gt_order,
        discovered_order,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Micro-averaged precision and recall over the assigned diagonal. A zero
/// denominator makes the corresponding metric 0.
pub fn precision_recall_f1(m: &MatchingMatrix) -> Scores {
    let kp = m.gt_sets();
    let k = m.discovered_sets();
    let kmin = kp.min(k);
    let diag = m.diagonal_sum() as f64;
    let predicted: usize = (0..kmin).map(|j| (0..=kp).map(|i| m.cells[i][j]).sum::<usize>()).sum();
    let actual: usize = (0..kp).map(|i| m.cells[i].iter().sum::<usize>()).sum();
    let ratio = |num: f64, den: usize| if den == 0 { 0.0 } else { num / den as f64 };
    let precision = ratio(diag, predicted);
    let recall = ratio(diag, actual);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Scores {
        precision,
        recall,
        f1,
    }
}

pub fn evaluate(gt: &GroundTruth, discovered: &[Vec<Segment>]) -> (MatchingMatrix, Scores) {
    let m = matching_matrix(gt, discovered);
    let s = precision_recall_f1(&m);
    (m, s)
}

/// Hungarian method on a square weight matrix, maximizing the total weight.
/// Returns the column assigned to each row.
pub fn max_weight_assignment(weights: &[Vec<i64>]) -> Vec<usize> {
    let n = weights.len();
    if n == 0 {
        return Vec::new();
    }
    let max = weights.iter().flatten().copied().max().unwrap_or(0);
    // minimize cost = max - weight; 1-based arrays with a sentinel at 0
    let cost = |i: usize, j: usize| max - weights[i - 1][j - 1];
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    assignment
}
