use std::cmp::Ordering;

use crate::geom::BBox;

/// Intersection over union; 0 when the union is empty.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        (inter / union).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchResult {
    /// `(prediction index, ground-truth index, IoU)`.
    pub tp: Vec<(usize, usize, f64)>,
    pub fp: Vec<usize>,
    pub fn_: Vec<usize>,
}

/// Processing order: confidence descending, then best IoU against any
/// ground truth descending, then input position.
pub fn match_order(preds: &[(BBox, f64)], gts: &[BBox]) -> Vec<usize> {
    let best: Vec<f64> = preds
        .iter()
        .map(|(b, _)| gts.iter().map(|g| iou(b, g)).fold(0.0, f64::max))
        .collect();
    let mut order: Vec<usize> = (0..preds.len()).collect();
    order.sort_by(|&a, &b| {
        preds[b]
            .1
            .partial_cmp(&preds[a].1)
            .unwrap_or(Ordering::Equal)
            .then(best[b].partial_cmp(&best[a]).unwrap_or(Ordering::Equal))
            .then(a.cmp(&b))
    });
    order
}

/// Greedy matching of one image and class. Each prediction, in
/// [`match_order`], takes the unmatched ground truth of highest IoU
/// (lowest index on ties) if that IoU reaches `threshold`.
pub fn match_detections(preds: &[(BBox, f64)], gts: &[BBox], threshold: f64) -> MatchResult {
    let mut taken = vec![false; gts.len()];
    let mut out = MatchResult::default();
    for p in match_order(preds, gts) {
        let mut best: Option<(usize, f64)> = None;
        for (g, gt) in gts.iter().enumerate() {
            if taken[g] {
                continue;
            }
            let v = iou(&preds[p].0, gt);
            if v >= threshold && best.map_or(true, |(_, b)| v > b) {
                best = Some((g, v));
            }
        }
        match best {
            Some((g, v)) => {
                taken[g] = true;
                out.tp.push((p, g, v));
            }
            None => out.fp.push(p),
        }
    }
    out.fn_ = (0..gts.len()).filter(|g| !taken[*g]).collect();
    out
}
