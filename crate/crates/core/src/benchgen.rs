//! Benchmark series built by concatenating labeled instances.
//!
//! Some classes repeat and form the ground-truth motif sets. Every two
//! consecutive repeated instances are separated by exactly one instance of a
//! class that never repeats, e.g. `A C B D A E B`, so the intended motifs are
//! the only repeated structure.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evaluation::GroundTruth;
use crate::segment::Segment;
use crate::series::{znormalize, TimeSeries};

/// Instances grouped by class label. Every instance is z-normalized on
/// construction and all share one dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledInstancePool {
    classes: BTreeMap<String, Vec<TimeSeries>>,
    dims: usize,
}

impl LabeledInstancePool {
    pub fn new(classes: BTreeMap<String, Vec<TimeSeries>>) -> Result<Self> {
        let dims = classes
            .values()
            .flatten()
            .map(|ts| ts.dims())
            .next()
            .ok_or_else(|| Error::InvalidPool("pool has no instances".into()))?;
        for (label, instances) in &classes {
            if instances.is_empty() {
                return Err(Error::InvalidPool(format!("class {label:?} is empty")));
            }
            if let Some(bad) = instances.iter().find(|ts| ts.dims() != dims) {
                return Err(Error::InvalidPool(format!(
                    "class {label:?} has an instance with {} dimensions, expected {dims}",
                    bad.dims()
                )));
            }
        }
        let classes = classes
            .into_iter()
            .map(|(label, v)| (label, v.iter().map(znormalize).collect()))
            .collect();
        Ok(Self { classes, dims })
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.classes.keys().map(String::as_str)
    }

    pub fn instances(&self, label: &str) -> Option<&[TimeSeries]> {
        self.classes.get(label).map(Vec::as_slice)
    }
}

/// Largest number of ground-truth motif sets a `c`-class pool supports with
/// two occurrences per set: `⌊(c + 1) / 3⌋`.
pub fn kappa_max(c: usize) -> Result<usize> {
    if c < 5 {
        return Err(Error::InvalidPool(format!(
            "{c} classes cannot form two ground-truth motif sets (need at least 5)"
        )));
    }
    Ok((c + 1) / 3)
}

/// Largest κ′ for `occurrences` per set: `κ′ + occurrences·κ′ − 1 <= c`.
fn max_sets(c: usize, occurrences: usize) -> usize {
    (c + 1) / (occurrences + 1)
}

/// One placed instance of the generated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub label: String,
    pub instance: usize,
    pub segment: Segment,
    pub repeated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedBenchmark {
    pub series: TimeSeries,
    /// One set per repeated class, in [`Self::repeated_classes`] order.
    pub ground_truth: GroundTruth,
    pub provenance: Vec<Placement>,
    pub repeated_classes: Vec<String>,
}

impl GeneratedBenchmark {
    pub fn kappa(&self) -> usize {
        self.repeated_classes.len()
    }

    pub fn separator_classes(&self) -> Vec<&str> {
        self.provenance
            .iter()
            .filter(|p| !p.repeated)
            .map(|p| p.label.as_str())
            .collect()
    }
}

/// Builds a benchmark whose repeated classes are exactly `repeated`.
pub fn generate_with_classes<R: Rng + ?Sized>(
    pool: &LabeledInstancePool,
    repeated: &[&str],
    occurrences: usize,
    rng: &mut R,
) -> Result<GeneratedBenchmark> {
    if occurrences < 2 {
        return Err(Error::InvalidPool("occurrences per set must be at least 2".into()));
    }
    let kappa = repeated.len();
    let separators_needed = (kappa * occurrences).saturating_sub(1);
    let mut placed: Vec<(&str, usize)> = Vec::with_capacity(kappa * occurrences);
    for &label in repeated {
        let instances = pool
            .instances(label)
            .ok_or_else(|| Error::InvalidPool(format!("unknown class {label:?}")))?;
        if instances.len() < occurrences {
            return Err(Error::InvalidPool(format!(
                "class {label:?} has {} instances, {occurrences} distinct ones are needed",
                instances.len()
            )));
        }
        let mut ids: Vec<usize> = (0..instances.len()).collect();
        ids.shuffle(rng);
        placed.extend(ids[..occurrences].iter().map(|&id| (label, id)));
    }
    placed.shuffle(rng);

    let mut others: Vec<&str> = pool.labels().filter(|l| !repeated.contains(l)).collect();
    if others.len() < separators_needed {
        return Err(Error::InvalidPool(format!(
            "{} non-repeating classes available, {separators_needed} needed",
            others.len()
        )));
    }
    others.shuffle(rng);
    let separators: Vec<(&str, usize)> = others[..separators_needed]
        .iter()
        .map(|&label| {
            let count = pool.instances(label).map_or(0, |v| v.len());
            (label, rng.gen_range(0..count))
        })
        .collect();

    let mut order: Vec<(&str, usize, bool)> = Vec::with_capacity(2 * placed.len());
    for (k, &(label, id)) in placed.iter().enumerate() {
        if k > 0 {
            let (sl, sid) = separators[k - 1];
            order.push((sl, sid, false));
        }
        order.push((label, id, true));
    }

    let mut parts: Vec<&TimeSeries> = Vec::with_capacity(order.len());
    let mut provenance = Vec::with_capacity(order.len());
    let mut gt_sets: Vec<Vec<Segment>> = vec![Vec::new(); kappa];
    let mut cursor = 1;
    for (label, id, is_repeated) in order {
        let inst = &pool.instances(label).expect("label checked above")[id];
        let segment = Segment::new_unchecked(cursor, cursor + inst.len() - 1);
        cursor += inst.len();
        parts.push(inst);
        if is_repeated {
            let set = repeated.iter().position(|&l| l == label).expect("placed from repeated");
            gt_sets[set].push(segment);
        }
        provenance.push(Placement {
            label: label.to_string(),
            instance: id,
            segment,
            repeated: is_repeated,
        });
    }
    let series = TimeSeries::concat(&parts)?;
    Ok(GeneratedBenchmark {
        series,
        ground_truth: GroundTruth::new(gt_sets)?,
        provenance,
        repeated_classes: repeated.iter().map(|s| s.to_string()).collect(),
    })
}

/// Samples κ′ uniformly from `[2 : κ′_max]`, picks the repeated classes at
/// random among those with enough instances, and builds the series.
pub fn generate_one<R: Rng + ?Sized>(
    pool: &LabeledInstancePool,
    occurrences: usize,
    rng: &mut R,
) -> Result<GeneratedBenchmark> {
    let c = pool.class_count();
    if occurrences == 2 {
        kappa_max(c)?;
    }
    let mut eligible: Vec<&str> = pool
        .labels()
        .filter(|l| pool.instances(l).is_some_and(|v| v.len() >= occurrences))
        .collect();
    let upper = max_sets(c, occurrences).min(eligible.len());
    if upper < 2 {
        return Err(Error::InvalidPool(format!(
            "{c} classes ({} with at least {occurrences} instances) cannot form two \
             ground-truth motif sets with {occurrences} occurrences each",
            eligible.len()
        )));
    }
    let kappa = rng.gen_range(2..=upper);
    eligible.shuffle(rng);
    generate_with_classes(pool, &eligible[..kappa], occurrences, rng)
}

/// `count` benchmarks from one seeded generator.
pub fn generate_many(
    pool: &LabeledInstancePool,
    count: usize,
    occurrences: usize,
    seed: u64,
) -> Result<Vec<GeneratedBenchmark>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| generate_one(pool, occurrences, &mut rng))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSuite {
    pub validation: Vec<GeneratedBenchmark>,
    pub evaluation: Vec<GeneratedBenchmark>,
}

/// Splits every class's instances into a validation part (a `split`
/// fraction) and an evaluation part, then generates `round(count·split)`
/// validation and the remaining evaluation benchmarks, each from its own
/// subpool.
pub fn generate_suite(
    pool: &LabeledInstancePool,
    count: usize,
    split: f64,
    occurrences: usize,
    seed: u64,
) -> Result<BenchmarkSuite> {
    if count == 0 {
        return Err(Error::InvalidPool("suite size must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&split) {
        return Err(Error::InvalidPool(format!("split ({split}) must lie in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut val = BTreeMap::new();
    let mut eval = BTreeMap::new();
    for label in pool.labels() {
        let mut instances = pool.instances(label).expect("listed label").to_vec();
        instances.shuffle(&mut rng);
        let cut = (split * instances.len() as f64).round() as usize;
        let rest = instances.split_off(cut);
        if !instances.is_empty() {
            val.insert(label.to_string(), instances);
        }
        if !rest.is_empty() {
            eval.insert(label.to_string(), rest);
        }
    }
    let n_val = (split * count as f64).round() as usize;
    let n_eval = count - n_val;
    let mut build = |subpool: BTreeMap<String, Vec<TimeSeries>>, k: usize, name: &str| {
        if k == 0 {
            return Ok(Vec::new());
        }
        let sub = LabeledInstancePool::new(subpool)
            .map_err(|e| Error::InvalidPool(format!("{name} subpool: {e}")))?;
        (0..k)
            .map(|_| generate_one(&sub, occurrences, &mut rng))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidPool(format!("{name} subpool: {e}")))
    };
    let validation = build(val, n_val, "validation")?;
    let evaluation = build(eval, n_eval, "evaluation")?;
    Ok(BenchmarkSuite {
        validation,
        evaluation,
    })
}
