//! Motif-set discovery on top of the extracted warping paths.
//!
//! Every segment `α = [b:e]` with `l_min <= |α| <= l_max` is a candidate.
//! Its motif set consists of the row projections of all path fragments whose
//! column projection is `α`; candidates are ranked by the harmonic mean of a
//! normalized similarity score and a normalized coverage.

use crate::error::{Error, Result};
use crate::loco::{find_paths_in, Position, StepSet, WarpingPath};
use crate::segment::Segment;
use crate::series::{znormalize, TimeSeries};
use crate::ssm::{compute_ssm, SelfSimilarityMatrix};

/// Parameters of a discovery run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryConfig {
    pub l_min: usize,
    pub l_max: usize,
    /// Quantile of the similarity matrix used as the similarity threshold.
    pub rho: f64,
    /// Number of motif sets to return; `None` runs until no candidate is left.
    pub kappa: Option<usize>,
    /// Overlap tolerance within and across motif sets.
    pub nu: f64,
    pub warping: bool,
    /// Allowed start indices of a representative (0-based offsets into the
    /// series, i.e. `start_mask[b - 1]` governs `b`).
    pub start_mask: Option<Vec<bool>>,
    pub end_mask: Option<Vec<bool>>,
}

impl DiscoveryConfig {
    pub fn new(l_min: usize, l_max: usize) -> Self {
        Self {
            l_min,
            l_max,
            rho: 0.8,
            kappa: None,
            nu: 0.5,
            warping: true,
            start_mask: None,
            end_mask: None,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_kappa(mut self, kappa: usize) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_warping(mut self, warping: bool) -> Self {
        self.warping = warping;
        self
    }

    pub fn with_masks(mut self, start: Option<Vec<bool>>, end: Option<Vec<bool>>) -> Self {
        self.start_mask = start;
        self.end_mask = end;
        self
    }

    pub fn steps(&self) -> StepSet {
        StepSet::from_warping(self.warping)
    }

    /// Checks the configuration against a series of length `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.l_min == 0 {
            return fail("l_min must be at least 1".into());
        }
        if self.l_min > self.l_max {
            return fail(format!(
                "l_min ({}) must not exceed l_max ({})",
                self.l_min, self.l_max
            ));
        }
        if self.l_min > n {
            return fail(format!(
                "l_min ({}) must not exceed the series length ({n})",
                self.l_min
            ));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return fail(format!("rho ({}) must lie in [0, 1]", self.rho));
        }
        if !(0.0..=0.5).contains(&self.nu) {
            return fail(format!("nu ({}) must lie in [0, 0.5]", self.nu));
        }
        for (name, mask) in [("start", &self.start_mask), ("end", &self.end_mask)] {
            if let Some(m) = mask {
                if m.len() != n {
                    return fail(format!(
                        "{name} mask has length {}, expected {n}",
                        m.len()
                    ));
                }
            }
        }
        Ok(())
    }

    fn allows_start(&self, b: usize) -> bool {
        self.start_mask.as_ref().is_none_or(|m| m[b - 1])
    }

    fn allows_end(&self, e: usize) -> bool {
        self.end_mask.as_ref().is_none_or(|m| m[e - 1])
    }
}

/// The part of a path between two path indices (inclusive, 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fragment {
    /// Index into the path list the fragment was cut from.
    pub path: usize,
    pub first: usize,
    pub last: usize,
}

impl Fragment {
    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn positions<'a>(&self, paths: &'a [WarpingPath]) -> &'a [Position] {
        &paths[self.path].positions()[self.first..=self.last]
    }

    /// Row projection of the fragment: the motif it relates to `α`.
    pub fn rows(&self, paths: &[WarpingPath]) -> Segment {
        let pos = paths[self.path].positions();
        Segment::new_unchecked(pos[self.first].i, pos[self.last].i)
    }

    /// Summed similarity via the path's cumulative table, counting the
    /// fragment's first position exactly once.
    pub fn score(&self, paths: &[WarpingPath]) -> f64 {
        let p = &paths[self.path];
        let b = p.positions()[self.first].j;
        let e = p.positions()[self.last].j;
        p.cum_score(e) - p.cum_score(b) + p.similarity_at(self.first)
    }
}

/// Cuts the fragment of every path in `candidates` whose column range is
/// `alpha`. Paths must span both ends of `alpha`; others are skipped.
pub fn candidate_subpaths(
    paths: &[WarpingPath],
    candidates: &[usize],
    alpha: Segment,
) -> Vec<Fragment> {
    candidates
        .iter()
        .filter(|&&idx| {
            let p = &paths[idx];
            p.spans_col(alpha.start()) && p.spans_col(alpha.end())
        })
        .map(|&idx| Fragment {
            path: idx,
            first: paths[idx].first_index(alpha.start()),
            last: paths[idx].first_index(alpha.end()),
        })
        .collect()
}

/// Fitness of a candidate together with its two normalized components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub fitness: f64,
    pub score: f64,
    pub coverage: f64,
}

impl Fitness {
    /// Normalizes raw score and coverage and takes their harmonic mean.
    /// `total_len` is the summed fragment length.
    pub fn from_raw(alpha_len: usize, score: f64, total_len: usize, coverage: usize, n: usize) -> Self {
        let a = alpha_len as f64;
        let score = (score - a) / total_len as f64;
        let coverage = (coverage as f64 - a) / n as f64;
        let sum = score + coverage;
        let fitness = if sum == 0.0 {
            0.0
        } else {
            2.0 * score * coverage / sum
        };
        Self {
            fitness,
            score,
            coverage,
        }
    }
}

/// `Σ|β| − Σ_{β₁≠β₂} |β₁ ∩ β₂|` over unordered pairs. `members` must be
/// sorted by start index.
pub fn coverage(members: &[Segment]) -> usize {
    let total: usize = members.iter().map(|m| m.len()).sum();
    let mut overlap = 0;
    for (k, a) in members.iter().enumerate() {
        for b in &members[k + 1..] {
            if b.start() > a.end() {
                break;
            }
            overlap += a.intersection_len(*b);
        }
    }
    total - overlap
}

/// Fitness of `alpha` given its subpaths.
pub fn fitness(alpha: Segment, subpaths: &[Fragment], paths: &[WarpingPath], n: usize) -> Fitness {
    let mut members: Vec<Segment> = subpaths.iter().map(|f| f.rows(paths)).collect();
    members.sort();
    let score: f64 = subpaths.iter().map(|f| f.score(paths)).sum();
    let total_len = subpaths.iter().map(Fragment::len).sum();
    Fitness::from_raw(alpha.len(), score, total_len, coverage(&members), n)
}

/// A discovered motif set.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifSet {
    pub representative: Segment,
    /// Sorted by start index; contains the representative.
    pub members: Vec<Segment>,
    /// One fragment per member, in member order.
    pub subpaths: Vec<Vec<Position>>,
    pub fitness: Fitness,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscoveryResult {
    pub motif_sets: Vec<MotifSet>,
}

impl DiscoveryResult {
    pub fn len(&self) -> usize {
        self.motif_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motif_sets.is_empty()
    }

    pub fn members(&self) -> Vec<Vec<Segment>> {
        self.motif_sets.iter().map(|m| m.members.clone()).collect()
    }
}

/// A candidate as seen by [`MotifSearch::scan`]: it passed every
/// coincidence filter and has been scored.
#[derive(Debug, Clone, Copy)]
pub struct CandidateView<'a> {
    pub alpha: Segment,
    /// Sorted by start index.
    pub members: &'a [Segment],
    pub fitness: Fitness,
}

struct Member {
    seg: Segment,
    fragment: Fragment,
    score: f64,
}

/// Paths of one series, bucketed for the candidate sweep.
pub struct MotifSearch<'a> {
    paths: &'a [WarpingPath],
    n: usize,
    starting_at: Vec<Vec<usize>>,
}

impl<'a> MotifSearch<'a> {
    pub fn new(paths: &'a [WarpingPath], n: usize) -> Self {
        let mut starting_at = vec![Vec::new(); n + 2];
        for (idx, p) in paths.iter().enumerate() {
            starting_at[p.first().j].push(idx);
        }
        Self {
            paths,
            n,
            starting_at,
        }
    }

    pub fn paths(&self) -> &'a [WarpingPath] {
        self.paths
    }

    /// Sweeps every candidate that survives the coincidence filters against
    /// `emitted` and among its own members, calling `visit` with its fitness.
    ///
    /// `P^b` (paths spanning column `b`) is updated incrementally with `b`
    /// and kept sorted by the row where each path enters column `b`; `P^e`
    /// is narrowed from it as `e` grows, so member segments come out sorted
    /// and only consecutive members need the overlap test.
    pub fn scan(
        &self,
        config: &DiscoveryConfig,
        emitted: &[Segment],
        mut visit: impl FnMut(&CandidateView<'_>, &[Fragment]),
    ) {
        let n = self.n;
        let nu = config.nu;
        let mut p_b: Vec<usize> = Vec::new();
        let mut p_e: Vec<usize> = Vec::new();
        let mut members: Vec<Member> = Vec::new();
        let mut segs: Vec<Segment> = Vec::new();
        let mut frags: Vec<Fragment> = Vec::new();
        let last_start = n + 1 - config.l_min;
        for b in 1..=last_start {
            p_b.retain(|&idx| self.paths[idx].last().j >= b);
            p_b.extend_from_slice(&self.starting_at[b]);
            if !config.allows_start(b) {
                continue;
            }
            p_b.sort_by_key(|&idx| {
                let p = &self.paths[idx];
                p.positions()[p.first_index(b)].i
            });
            p_e.clear();
            p_e.extend_from_slice(&p_b);
            let e_hi = (b + config.l_max - 1).min(n);
            for e in (b + config.l_min - 1)..=e_hi {
                p_e.retain(|&idx| self.paths[idx].last().j >= e);
                let alpha = Segment::new_unchecked(b, e);
                if emitted.iter().any(|&m| alpha.is_coincident_to(m, nu)) {
                    break;
                }
                if !config.allows_end(e) {
                    continue;
                }
                members.clear();
                for &idx in &p_e {
                    let fragment = Fragment {
                        path: idx,
                        first: self.paths[idx].first_index(b),
                        last: self.paths[idx].first_index(e),
                    };
                    let seg = fragment.rows(self.paths);
                    if emitted.iter().any(|&m| seg.is_coincident_to(m, nu)) {
                        continue;
                    }
                    members.push(Member {
                        seg,
                        fragment,
                        score: fragment.score(self.paths),
                    });
                }
                if members
                    .windows(2)
                    .any(|w| w[0].seg.is_mutually_coincident(w[1].seg, nu))
                {
                    continue;
                }
                segs.clear();
                segs.extend(members.iter().map(|m| m.seg));
                frags.clear();
                frags.extend(members.iter().map(|m| m.fragment));
                let score: f64 = members.iter().map(|m| m.score).sum();
                let total_len = frags.iter().map(Fragment::len).sum();
                let fit = Fitness::from_raw(alpha.len(), score, total_len, coverage(&segs), n);
                visit(
                    &CandidateView {
                        alpha,
                        members: &segs,
                        fitness: fit,
                    },
                    &frags,
                );
            }
        }
    }

    /// The candidate with the highest positive fitness, earliest on ties.
    pub fn best_motif_set(&self, config: &DiscoveryConfig, emitted: &[Segment]) -> Option<MotifSet> {
        let mut best: Option<MotifSet> = None;
        let mut best_fit = 0.0;
        self.scan(config, emitted, |cand, frags| {
            if cand.fitness.fitness > best_fit {
                best_fit = cand.fitness.fitness;
                best = Some(MotifSet {
                    representative: cand.alpha,
                    members: cand.members.to_vec(),
                    subpaths: frags.iter().map(|f| f.positions(self.paths).to_vec()).collect(),
                    fitness: cand.fitness,
                });
            }
        });
        best
    }

    /// Emits motif sets until `kappa` are found or none is left.
    pub fn discover(&self, config: &DiscoveryConfig) -> DiscoveryResult {
        let mut result = DiscoveryResult::default();
        let mut emitted: Vec<Segment> = Vec::new();
        while config.kappa.is_none_or(|k| result.len() < k) {
            let Some(set) = self.best_motif_set(config, &emitted) else {
                break;
            };
            emitted.extend_from_slice(&set.members);
            result.motif_sets.push(set);
        }
        result
    }
}

/// A series prepared for discovery: normalized, with its similarity matrix
/// and warping paths.
pub struct PreparedSeries {
    pub ssm: SelfSimilarityMatrix,
    pub paths: Vec<WarpingPath>,
}

impl PreparedSeries {
    pub fn new(ts: &TimeSeries, config: &DiscoveryConfig) -> Result<Self> {
        config.validate(ts.len())?;
        let ssm = compute_ssm(&znormalize(ts));
        let paths = find_paths_in(&ssm, config.l_min, config.rho, config.steps());
        Ok(Self { ssm, paths })
    }

    pub fn len(&self) -> usize {
        self.ssm.size()
    }

    pub fn is_empty(&self) -> bool {
        self.ssm.size() == 0
    }

    pub fn search(&self) -> MotifSearch<'_> {
        MotifSearch::new(&self.paths, self.len())
    }
}

/// Discovers motif sets in `ts`.
pub fn locomotif(ts: &TimeSeries, config: &DiscoveryConfig) -> Result<DiscoveryResult> {
    config.validate(ts.len())?;
    if config.kappa == Some(0) {
        return Ok(DiscoveryResult::default());
    }
    let prepared = PreparedSeries::new(ts, config)?;
    Ok(prepared.search().discover(config))
}

/// Derives start/end masks from idle (resting) stretches of the series.
///
/// A window of `l_max` samples is idle when every dimension's population
/// variance is below `var_threshold`; idle samples are the union of idle
/// windows. Of the remaining samples, the `fraction` closest (Euclidean) to
/// the mean idle sample are allowed. Without any idle or any non-idle sample
/// every index is allowed.
pub fn guidance_mask_from_rest(
    ts: &TimeSeries,
    l_max: usize,
    var_threshold: f64,
    fraction: f64,
) -> Result<(Vec<bool>, Vec<bool>)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "fraction ({fraction}) must lie in (0, 1]"
        )));
    }
    if l_max == 0 {
        return Err(Error::InvalidConfig("l_max must be at least 1".into()));
    }
    let n = ts.len();
    let d = ts.dims();
    let mut idle = vec![false; n];
    if l_max <= n {
        for start in 0..=(n - l_max) {
            let window = start..start + l_max;
            let quiet = (0..d).all(|k| {
                let mean = window.clone().map(|t| ts.sample(t)[k]).sum::<f64>() / l_max as f64;
                let var = window
                    .clone()
                    .map(|t| (ts.sample(t)[k] - mean).powi(2))
                    .sum::<f64>()
                    / l_max as f64;
                var < var_threshold
            });
            if quiet {
                idle[window].fill(true);
            }
        }
    }
    let idle_count = idle.iter().filter(|&&b| b).count();
    if idle_count == 0 || idle_count == n {
        return Ok((vec![true; n], vec![true; n]));
    }
    let mut mean = vec![0.0; d];
    for t in (0..n).filter(|&t| idle[t]) {
        for (k, &v) in ts.sample(t).iter().enumerate() {
            mean[k] += v / idle_count as f64;
        }
    }
    let mut active: Vec<(f64, usize)> = (0..n)
        .filter(|&t| !idle[t])
        .map(|t| {
            let dist: f64 = ts.sample(t).iter().zip(&mean).map(|(a, b)| (a - b) * (a - b)).sum();
            (dist, t)
        })
        .collect();
    active.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let keep = ((fraction * active.len() as f64).ceil() as usize).clamp(1, active.len());
    let mut mask = vec![false; n];
    for &(_, t) in &active[..keep] {
        mask[t] = true;
    }
    Ok((mask.clone(), mask))
}
