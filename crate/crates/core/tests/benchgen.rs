mod common;

use std::collections::BTreeMap;

use locomotif::benchgen::{generate_many, generate_one, generate_suite, GeneratedBenchmark, LabeledInstancePool};
use locomotif::{znormalize, TimeSeries};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pool(c: usize, per_class: usize, seed: u64) -> LabeledInstancePool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes = BTreeMap::new();
    for k in 0..c {
        let instances = (0..per_class)
            .map(|_| {
                let len = rng.gen_range(3..8);
                TimeSeries::univariate((0..len).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap()
            })
            .collect();
        classes.insert(format!("class{k}"), instances);
    }
    LabeledInstancePool::new(classes).unwrap()
}

fn check_structure(g: &GeneratedBenchmark, pool: &LabeledInstancePool, occurrences: usize) {
    // provenance tiles the series
    let mut cursor = 1;
    for p in &g.provenance {
        assert_eq!(p.segment.start(), cursor);
        cursor = p.segment.end() + 1;
        let source = &pool.instances(&p.label).unwrap()[p.instance];
        assert_eq!(g.series.slice(p.segment).unwrap().as_flat(), source.as_flat());
    }
    assert_eq!(cursor, g.series.len() + 1);

    // repeated and separating instances alternate, separators never repeat
    for (k, p) in g.provenance.iter().enumerate() {
        assert_eq!(p.repeated, k % 2 == 0);
    }
    let mut seps = g.separator_classes();
    let total = seps.len();
    seps.sort_unstable();
    seps.dedup();
    assert_eq!(seps.len(), total);
    assert!(seps.iter().all(|s| !g.repeated_classes.iter().any(|r| r == s)));

    // one ground-truth set per repeated class, distinct instances
    assert_eq!(g.ground_truth.len(), g.kappa());
    for (set, label) in g.ground_truth.sets().iter().zip(&g.repeated_classes) {
        assert_eq!(set.len(), occurrences);
        let mut ids: Vec<usize> = g
            .provenance
            .iter()
            .filter(|p| p.repeated && &p.label == label)
            .map(|p| p.instance)
            .collect();
        assert_eq!(ids.len(), occurrences);
        ids.dedup();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), occurrences);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_structure_holds(seed in any::<u64>(), c in 5usize..=12, occurrences in 2usize..=3) {
        let p = pool(c, 4, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match generate_one(&p, occurrences, &mut rng) {
            Ok(g) => check_structure(&g, &p, occurrences),
            Err(_) => prop_assert!((c + 1) / (occurrences + 1) < 2),
        }
    }
}

#[test]
fn kappa_is_uniform_over_admissible_range() {
    let p = pool(8, 3, 1);
    let draws = generate_many(&p, 10_000, 2, 17).unwrap();
    let twos = draws.iter().filter(|g| g.kappa() == 2).count() as f64;
    let threes = draws.iter().filter(|g| g.kappa() == 3).count() as f64;
    assert_eq!(twos + threes, 10_000.0);
    let se = (10_000.0f64 * 0.5 * 0.5).sqrt();
    assert!((twos - 5_000.0).abs() <= 3.0 * se, "{twos} draws of 2 sets");
}

#[test]
fn instances_are_znormalized_on_entry() {
    let raw = TimeSeries::univariate(vec![10.0, 12.0, 14.0, 20.0]).unwrap();
    let mut classes = BTreeMap::new();
    for k in 0..5 {
        classes.insert(format!("c{k}"), vec![raw.clone(), raw.clone()]);
    }
    let p = LabeledInstancePool::new(classes).unwrap();
    assert_eq!(p.instances("c0").unwrap()[0], znormalize(&raw));
}

#[test]
fn too_few_classes_is_rejected() {
    let p = pool(4, 3, 2);
    assert!(generate_one(&p, 2, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
}

#[test]
fn seeds_reproduce_suites() {
    let p = pool(7, 10, 3);
    let a = generate_suite(&p, 50, 0.2, 2, 99).unwrap();
    let b = generate_suite(&p, 50, 0.2, 2, 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.validation.len(), 10);
    assert_eq!(a.evaluation.len(), 40);
    let other = generate_suite(&p, 50, 0.2, 2, 100).unwrap();
    assert_ne!(a, other);
}
