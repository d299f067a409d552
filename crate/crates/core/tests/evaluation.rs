use locomotif::evaluation::{evaluate, matching_matrix, GroundTruth};
use locomotif::Segment;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Disjoint ground truth plus a noisy prediction built from it.
fn scenario(seed: u64) -> (GroundTruth, Vec<Vec<Segment>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = rng.gen_range(1..=4);
    let mut gt = vec![Vec::new(); sets];
    let mut cursor = 1;
    for _ in 0..rng.gen_range(sets..=10) {
        let len = rng.gen_range(5..20);
        gt[rng.gen_range(0..sets)].push(Segment::new(cursor, cursor + len - 1).unwrap());
        cursor += len + rng.gen_range(0..10);
    }
    gt.retain(|s| !s.is_empty());
    let mut pred: Vec<Vec<Segment>> = vec![Vec::new(); rng.gen_range(0..=4)];
    if !pred.is_empty() {
        for seg in gt.iter().flatten() {
            if rng.gen_bool(0.7) {
                let shift = rng.gen_range(0..4);
                let s = Segment::new(seg.start() + shift, seg.end() + shift).unwrap();
                let k = rng.gen_range(0..pred.len());
                pred[k].push(s);
            }
        }
    }
    (GroundTruth::new(gt).unwrap(), pred)
}

proptest! {
    #[test]
    fn scores_lie_in_unit_interval(seed in any::<u64>()) {
        let (gt, pred) = scenario(seed);
        let s = evaluate(&gt, &pred).1;
        for v in [s.precision, s.recall, s.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn set_order_does_not_change_matched_mass(seed in any::<u64>()) {
        let (gt, pred) = scenario(seed);
        let (m, base) = evaluate(&gt, &pred);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut gt_sets = gt.sets().to_vec();
        gt_sets.shuffle(&mut rng);
        let mut pred2 = pred.clone();
        pred2.shuffle(&mut rng);
        let (m2, shuffled) = evaluate(&GroundTruth::new(gt_sets).unwrap(), &pred2);
        prop_assert_eq!(m.diagonal_sum(), m2.diagonal_sum());
        prop_assert_eq!(base.recall, shuffled.recall);
        // With more discovered than ground-truth sets, equally good assignments
        // may leave out different discovered sets, which moves the precision
        // denominator; only then may precision differ.
        if pred.len() <= gt.len() {
            prop_assert_eq!(base.precision, shuffled.precision);
        }
    }

    #[test]
    fn matched_pairs_are_conserved(seed in any::<u64>()) {
        let (gt, pred) = scenario(seed);
        let m = matching_matrix(&gt, &pred);
        let (kp, k) = (m.gt_sets(), m.discovered_sets());
        let block: usize = m.cells[..kp].iter().map(|r| r[..k].iter().sum::<usize>()).sum();
        let gt_total: usize = gt.sets().iter().map(Vec::len).sum();
        let pred_total: usize = pred.iter().map(Vec::len).sum();
        let unmatched_gt: usize = m.cells[..kp].iter().map(|r| r[k]).sum();
        let unmatched_pred: usize = m.cells[kp][..k].iter().sum();
        prop_assert_eq!(block + unmatched_gt, gt_total);
        prop_assert_eq!(block + unmatched_pred, pred_total);
        prop_assert!(m.diagonal_sum() <= block);
    }
}

