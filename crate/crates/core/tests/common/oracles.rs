//! Independent reference implementations for matching and average precision.
#![allow(dead_code)]

use docsynth::eval::{iou, match_detections};
use docsynth::BBox;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle processing order: confidence, then best IoU with any ground truth, then position.
pub fn oracle_order(preds: &[(BBox, f64)], gts: &[BBox]) -> Vec<usize> {
    let best = |b: &BBox| gts.iter().map(|g| iou(b, g)).fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..preds.len()).collect();
    idx.sort_by(|&a, &b| {
        let ka = (preds[a].1, best(&preds[a].0));
        let kb = (preds[b].1, best(&preds[b].0));
        kb.partial_cmp(&ka).unwrap().then(a.cmp(&b))
    });
    idx
}

/// Key of one prediction's assignment; larger is preferred.
/// Unmatched ranks below every match; ties in IoU prefer the lower index.
pub fn key(iou: f64, gt: Option<usize>) -> (f64, i64) {
    match gt {
        Some(g) => (iou, -(g as i64)),
        None => (-1.0, 0),
    }
}

/// Enumerates every one-to-one assignment respecting the threshold and
/// returns the lexicographic maximum of per-prediction keys in `order`.
pub fn brute_force(preds: &[(BBox, f64)], gts: &[BBox], thr: f64) -> Vec<Option<usize>> {
    let order = oracle_order(preds, gts);
    let mut best: Option<(Vec<(f64, i64)>, Vec<Option<usize>>)> = None;
    let mut assign = vec![None; preds.len()];
    let mut used = vec![false; gts.len()];
    fn rec(
        k: usize,
        order: &[usize],
        preds: &[(BBox, f64)],
        gts: &[BBox],
        thr: f64,
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        best: &mut Option<(Vec<(f64, i64)>, Vec<Option<usize>>)>,
    ) {
        if k == order.len() {
            let keys: Vec<(f64, i64)> = order
                .iter()
                .map(|&p| key(assign[p].map_or(0.0, |g| iou(&preds[p].0, &gts[g])), assign[p]))
                .collect();
            let better = match best {
                None => true,
                Some((b, _)) => keys.partial_cmp(b) == Some(std::cmp::Ordering::Greater),
            };
            if better {
                *best = Some((keys, assign.clone()));
            }
            return;
        }
        let p = order[k];
        rec(k + 1, order, preds, gts, thr, assign, used, best);
        for g in 0..gts.len() {
            if !used[g] && iou(&preds[p].0, &gts[g]) >= thr {
                used[g] = true;
                assign[p] = Some(g);
                rec(k + 1, order, preds, gts, thr, assign, used, best);
                assign[p] = None;
                used[g] = false;
            }
        }
    }
    rec(0, &order, preds, gts, thr, &mut assign, &mut used, &mut best);
    best.map(|b| b.1).unwrap_or_default()
}

pub fn random_box(rng: &mut ChaCha8Rng) -> BBox {
    // A coarse grid makes identical and tied IoUs common.
    let x = rng.gen_range(0..6) as f64 * 2.0;
    let y = rng.gen_range(0..6) as f64 * 2.0;
    let w = rng.gen_range(1..5) as f64 * 2.0;
    let h = rng.gen_range(1..5) as f64 * 2.0;
    BBox::new(x, y, w, h)
}

/// Precision at every rank, then for each true positive the best precision
/// at that rank or later, each weighted by 1/n_gt.
pub fn step_sum_ap(mut outcomes: Vec<(f64, bool)>, n_gt: usize) -> f64 {
    outcomes.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut tp = 0.0;
    let precision: Vec<f64> = outcomes
        .iter()
        .enumerate()
        .map(|(k, o)| {
            if o.1 {
                tp += 1.0;
            }
            tp / (k + 1) as f64
        })
        .collect();
    let mut ap = 0.0;
    for k in 0..outcomes.len() {
        if outcomes[k].1 {
            let p = precision[k..].iter().cloned().fold(0.0, f64::max);
            ap += p / n_gt as f64;
        }
    }
    ap
}

/// A random matching instance with at most eight boxes per side.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<(BBox, f64)>, Vec<BBox>, f64) {
    let np = rng.gen_range(0..=8);
    let ng = rng.gen_range(0..=8);
    let gts: Vec<BBox> = (0..ng).map(|_| random_box(rng)).collect();
    let preds: Vec<(BBox, f64)> = (0..np)
        .map(|_| {
            let b = if !gts.is_empty() && rng.gen_bool(0.6) {
                let g = gts[rng.gen_range(0..gts.len())];
                BBox::new(g.x + rng.gen_range(-1..=1) as f64, g.y + rng.gen_range(-1..=1) as f64, g.w, g.h)
            } else {
                random_box(rng)
            };
            (b, rng.gen_range(1..=4) as f64 / 4.0)
        })
        .collect();
    let thr = [0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 1.0][rng.gen_range(0..7)];
    (preds, gts, thr)
}

/// Number of instances where greedy matching disagrees with brute force or breaks conservation.
pub fn greedy_mismatches(seed: u64, trials: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    for _ in 0..trials {
        let (preds, gts, thr) = random_instance(&mut rng);
        let greedy = match_detections(&preds, &gts, thr);
        let oracle = brute_force(&preds, &gts, thr);
        let mut got = vec![None; preds.len()];
        for &(p, g, _) in &greedy.tp {
            got[p] = Some(g);
        }
        let conserved =
            greedy.tp.len() + greedy.fp.len() == preds.len() && greedy.tp.len() + greedy.fn_.len() == gts.len();
        if got != oracle || !conserved {
            mismatches += 1;
        }
    }
    mismatches
}

