/// A detection's confidence and whether it matched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredOutcome {
    pub confidence: f64,
    pub tp: bool,
}

/// `(recall, precision)` after each detection, by descending confidence.
/// The sort is stable, so equal confidences keep their input order.
pub fn precision_recall_curve(outcomes: &[ScoredOutcome], n_gt: usize) -> Vec<(f64, f64)> {
    let mut sorted = outcomes.to_vec();
    sorted.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
    let mut tp = 0usize;
    let mut curve = Vec::with_capacity(sorted.len());
    for (i, o) in sorted.iter().enumerate() {
        if o.tp {
            tp += 1;
        }
        curve.push((tp as f64 / n_gt as f64, tp as f64 / (i + 1) as f64));
    }
    curve
}

/// Area under the precision envelope (all-points interpolation).
/// `None` when the class has no ground truth.
pub fn average_precision(outcomes: &[ScoredOutcome], n_gt: usize) -> Option<f64> {
    if n_gt == 0 {
        return None;
    }
    let curve = precision_recall_curve(outcomes, n_gt);
    let mut envelope: Vec<f64> = curve.iter().map(|(_, p)| *p).collect();
    for i in (0..envelope.len().saturating_sub(1)).rev() {
        envelope[i] = envelope[i].max(envelope[i + 1]);
    }
    let mut ap = 0.0;
    let mut prev_r = 0.0;
    for (i, (r, _)) in curve.iter().enumerate() {
        ap += (r - prev_r) * envelope[i];
        prev_r = *r;
    }
    Some(ap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_is_one() {
        let o: Vec<ScoredOutcome> = (0..4).map(|_| ScoredOutcome { confidence: 1.0, tp: true }).collect();
        assert_eq!(average_precision(&o, 4), Some(1.0));
    }

    #[test]
    fn no_predictions_is_zero() {
        assert_eq!(average_precision(&[], 3), Some(0.0));
        assert_eq!(average_precision(&[], 0), None);
    }
}
