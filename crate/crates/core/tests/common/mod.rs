//! Test-only oracles and fixtures. Nothing here calls into the incremental
//! or table-based code paths it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use locomotif::benchgen::LabeledInstancePool;
use locomotif::loco::{GapPenaltyParams, Position, StepSet, WarpingPath};
use locomotif::{DiscoveryConfig, Segment, SelfSimilarityMatrix, TimeSeries};
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Best aggregated similarity over every local warping path ending at each
/// position, by enumerating all paths forward from every start.
pub fn brute_force_cumulative(
    s: &SelfSimilarityMatrix,
    params: &GapPenaltyParams,
    steps: &[(usize, usize)],
) -> Vec<f64> {
    let n = s.size();
    let mut best = vec![f64::NEG_INFINITY; n * n];
    fn walk(
        s: &SelfSimilarityMatrix,
        params: &GapPenaltyParams,
        steps: &[(usize, usize)],
        i: usize,
        j: usize,
        acc_before: f64,
        best: &mut [f64],
    ) {
        let n = s.size();
        // aggregate of the path extended by (i, j), straight from the definition
        let sim = s.get(i, j);
        let acc = if sim >= params.tau {
            acc_before + sim
        } else {
            (params.multiplicative * acc_before - params.additive).max(0.0)
        };
        let slot = &mut best[(i - 1) * n + (j - 1)];
        if acc > *slot {
            *slot = acc;
        }
        for &(v, h) in steps {
            if i + v <= n && j + h <= n {
                walk(s, params, steps, i + v, j + h, acc, best);
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            walk(s, params, steps, i, j, 0.0, &mut best);
        }
    }
    best
}

/// Plain sorted-order quantile with linear interpolation.
pub fn sorted_quantile(values: &[f64], rho: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let r = (v.len() - 1) as f64 * rho;
    let lo = r.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    v[lo] + (r - lo as f64) * (v[hi] - v[lo])
}

/// Outcome of the from-scratch candidate sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBest {
    pub alpha: Segment,
    pub fitness: f64,
    pub members: Vec<Segment>,
}

/// Rebuilds every candidate's motif set from all paths by direct scans of
/// path positions and sums over the similarity matrix.
pub fn naive_best_motif_set(
    paths: &[WarpingPath],
    s: &SelfSimilarityMatrix,
    config: &DiscoveryConfig,
    emitted: &[Segment],
) -> Option<NaiveBest> {
    let n = s.size();
    let nu = config.nu;
    let coincident = |a: Segment, r: Segment| {
        let lo = a.start().max(r.start());
        let hi = a.end().min(r.end());
        let inter = if hi >= lo { hi - lo + 1 } else { 0 };
        inter as f64 > nu * r.len() as f64
    };
    let overlap = |a: Segment, b: Segment| {
        let lo = a.start().max(b.start());
        let hi = a.end().min(b.end());
        if hi >= lo {
            hi - lo + 1
        } else {
            0
        }
    };
    let mut best: Option<NaiveBest> = None;
    for b in 1..=(n + 1 - config.l_min) {
        if let Some(m) = &config.start_mask {
            if !m[b - 1] {
                continue;
            }
        }
        for e in (b + config.l_min - 1)..=(b + config.l_max - 1).min(n) {
            let alpha = Segment::new(b, e).unwrap();
            if emitted.iter().any(|&m| coincident(alpha, m)) {
                break;
            }
            if let Some(m) = &config.end_mask {
                if !m[e - 1] {
                    continue;
                }
            }
            let mut members: Vec<(Segment, f64, usize)> = Vec::new();
            for p in paths {
                let pos = p.positions();
                if pos[0].j > b || pos[pos.len() - 1].j < e {
                    continue;
                }
                let kb = pos.iter().position(|q| q.j >= b).unwrap();
                let ke = pos.iter().position(|q| q.j >= e).unwrap();
                let beta = Segment::new(pos[kb].i, pos[ke].i).unwrap();
                if emitted.iter().any(|&m| coincident(beta, m)) {
                    continue;
                }
                let score: f64 = pos[kb..=ke].iter().map(|q| s.get(q.i, q.j)).sum();
                members.push((beta, score, ke - kb + 1));
            }
            members.sort_by_key(|m| m.0);
            let mut clash = false;
            for x in 0..members.len() {
                for y in 0..members.len() {
                    if x != y && coincident(members[x].0, members[y].0) {
                        clash = true;
                    }
                }
            }
            if clash {
                continue;
            }
            let a = alpha.len() as f64;
            let score: f64 = members.iter().map(|m| m.1).sum();
            let total: usize = members.iter().map(|m| m.2).sum();
            let mut cov: f64 = members.iter().map(|m| m.0.len() as f64).sum();
            for x in 0..members.len() {
                for y in (x + 1)..members.len() {
                    cov -= overlap(members[x].0, members[y].0) as f64;
                }
            }
            let ns = (score - a) / total as f64;
            let nc = (cov - a) / n as f64;
            let fit = if ns + nc == 0.0 { 0.0 } else { 2.0 * ns * nc / (ns + nc) };
            if fit > best.as_ref().map_or(0.0, |x| x.fitness) {
                best = Some(NaiveBest {
                    alpha,
                    fitness: fit,
                    members: members.iter().map(|m| m.0).collect(),
                });
            }
        }
    }
    best
}

/// Checks the step constraint and the lookup-table definitions of a path.
pub fn check_path_tables(p: &WarpingPath, s: &SelfSimilarityMatrix, steps: StepSet) -> Result<(), String> {
    let pos = p.positions();
    for w in pos.windows(2) {
        let d = (w[1].i - w[0].i, w[1].j - w[0].j);
        if !steps.steps().contains(&d) {
            return Err(format!("step {d:?} not admissible"));
        }
    }
    let (lo, hi) = p.cols();
    for j in lo..=hi {
        let k = (0..pos.len()).find(|&k| pos[k].j >= j).unwrap();
        if p.first_index(j) != k {
            return Err(format!("first_index({j}) = {} expected {k}", p.first_index(j)));
        }
        let direct: f64 = pos[..=k].iter().map(|q| s.get(q.i, q.j)).sum();
        if (p.cum_score(j) - direct).abs() > 1e-9 {
            return Err(format!("cum_score({j}) = {} expected {direct}", p.cum_score(j)));
        }
    }
    let (rl, rh) = p.rows();
    let (r, c) = ((rh - rl + 1) as f64, (hi - lo + 1) as f64);
    match steps {
        StepSet::Warping if r / c < 0.5 || r / c > 2.0 => Err(format!("slope {r}/{c}")),
        StepSet::Diagonal if r != c => Err(format!("unequal projections {r}/{c}")),
        _ => Ok(()),
    }
}

pub fn is_full_diagonal(p: &WarpingPath, n: usize) -> bool {
    p.positions().len() == n
        && p
            .positions()
            .iter()
            .enumerate()
            .all(|(k, q)| *q == Position::new(k + 1, k + 1))
}

/// A random univariate or multivariate series with planted repetitions of a
/// few random templates between noise stretches.
pub fn structured_series<R: Rng>(rng: &mut R, n: usize, d: usize) -> TimeSeries {
    let templates: Vec<Vec<f64>> = (0..2)
        .map(|_| {
            let len = rng.gen_range(8..=20);
            let f1 = rng.gen_range(0.5..2.5);
            let ph = rng.gen_range(0.0..PI);
            (0..len * d)
                .map(|idx| {
                    let t = (idx / d) as f64 / len as f64;
                    let k = (idx % d) as f64;
                    2.0 * (2.0 * PI * f1 * t + ph + k).sin()
                })
                .collect()
        })
        .collect();
    let mut v: Vec<f64> = Vec::with_capacity(n * d);
    while v.len() < n * d {
        if rng.gen_bool(0.6) {
            let t = &templates[rng.gen_range(0..templates.len())];
            v.extend(t.iter().map(|x| x + normal(rng, 0.15)));
        } else {
            let len = rng.gen_range(3..12);
            let mut level = rng.gen_range(-1.5..1.5);
            for _ in 0..len * d {
                level += normal(rng, 0.3);
                v.push(level);
            }
        }
    }
    v.truncate(n * d);
    TimeSeries::from_flat(v, d).unwrap()
}

pub fn noise_series<R: Rng>(rng: &mut R, n: usize, d: usize) -> TimeSeries {
    TimeSeries::from_flat((0..n * d).map(|_| normal(rng, 1.0)).collect(), d).unwrap()
}

/// Shape of a synthetic class at relative time `u ∈ [0, 1]`.
#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Sine { cycles: f64, phase: f64 },
    Ramp,
    Bump,
    Square,
    Sawtooth,
    Decay,
}

impl Shape {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            Shape::Sine { cycles, phase } => (2.0 * PI * cycles * u + phase).sin(),
            Shape::Ramp => 2.0 * u - 1.0,
            Shape::Bump => (-((u - 0.5) / 0.12).powi(2)).exp() * 2.0 - 0.5,
            Shape::Square => {
                if (u * 3.0).floor() as i64 % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Shape::Sawtooth => 2.0 * ((u * 2.5) % 1.0) - 1.0,
            Shape::Decay => 2.0 * (-4.0 * u).exp() - 1.0,
        }
    }

    /// `len` samples of the shape plus Gaussian noise.
    pub fn instance<R: Rng>(self, rng: &mut R, len: usize, noise: f64) -> TimeSeries {
        TimeSeries::univariate(
            (0..len)
                .map(|t| self.eval(t as f64 / (len - 1) as f64) + normal(rng, noise))
                .collect(),
        )
        .unwrap()
    }
}

pub const TEMPLATE_A: Shape = Shape::Sine { cycles: 1.0, phase: 0.0 };
pub const TEMPLATE_B: Shape = Shape::Sine { cycles: 4.0, phase: 0.0 };
pub const TEMPLATE_A_LEN: usize = 48;
pub const TEMPLATE_B_LEN: usize = 56;
pub const FILLERS: [Shape; 5] = [Shape::Ramp, Shape::Bump, Shape::Square, Shape::Sawtooth, Shape::Decay];

/// Two sinusoid template classes ("A", "B") and five filler classes, with
/// `per_class` noisy instances each. Template instances have a fixed length
/// per class, scaled by a factor from `stretch` when given.
pub fn synthetic_pool<R: Rng>(
    rng: &mut R,
    per_class: usize,
    noise: f64,
    stretch: Option<(f64, f64)>,
) -> LabeledInstancePool {
    let mut classes = BTreeMap::new();
    for (label, shape, len) in [("A", TEMPLATE_A, TEMPLATE_A_LEN), ("B", TEMPLATE_B, TEMPLATE_B_LEN)] {
        let instances = (0..per_class)
            .map(|_| {
                let factor = stretch.map_or(1.0, |(lo, hi)| rng.gen_range(lo..=hi));
                let l = (len as f64 * factor).round() as usize;
                shape.instance(rng, l, noise)
            })
            .collect();
        classes.insert(label.to_string(), instances);
    }
    for (k, shape) in FILLERS.iter().enumerate() {
        let instances = (0..per_class)
            .map(|_| {
                let l = rng.gen_range(40..=60);
                shape.instance(rng, l, noise)
            })
            .collect();
        classes.insert(format!("F{k}"), instances);
    }
    LabeledInstancePool::new(classes).unwrap()
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    Normal::new(0.0, sigma).expect("finite sigma").sample(rng)
}
