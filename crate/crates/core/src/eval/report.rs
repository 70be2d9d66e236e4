use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ap::{average_precision, ScoredOutcome};
use super::matching::match_detections;
use super::predictions::PredictionSet;
use crate::error::{Error, Result};
use crate::geom::BBox;
use crate::label::ClassLabel;
use crate::manifest::DatasetManifest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: ClassLabel,
    pub n_gt: usize,
    pub n_pred: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    /// `None` when there are no predictions.
    pub precision: Option<f64>,
    /// `None` when there is no ground truth.
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub ap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub iou_threshold: f64,
    pub classes: Vec<ClassReport>,
    /// Mean AP over classes with ground truth; `None` when there are none.
    pub map: Option<f64>,
    pub map_classes: Vec<ClassLabel>,
    /// Classes left out of the mean for lack of ground truth.
    pub excluded_from_map: Vec<ClassLabel>,
}

impl EvalReport {
    pub fn class(&self, c: ClassLabel) -> &ClassReport {
        self.classes.iter().find(|r| r.class == c).expect("every class reported")
    }
}

type PerClass<T> = BTreeMap<ClassLabel, Vec<T>>;

/// Per-class counts and outcomes for one image.
struct ImageResult {
    per_class: BTreeMap<ClassLabel, (usize, usize, usize, Vec<ScoredOutcome>)>,
}

fn f1(p: Option<f64>, r: Option<f64>) -> Option<f64> {
    match (p, r) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    }
}

/// Scores `preds` against the manifest once per IoU threshold.
pub fn evaluate(preds: &PredictionSet, manifest: &DatasetManifest, thresholds: &[f64]) -> Result<Vec<EvalReport>> {
    for &t in thresholds {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::validation("iou", format!("threshold {t} outside (0, 1]")));
        }
    }
    let preds = preds.to_pixels(manifest)?;
    let index = manifest.image_index();
    if let Some(d) = preds.detections.iter().find(|d| !index.contains_key(&d.image_id)) {
        return Err(Error::UnknownImage(d.image_id));
    }

    let mut gts: BTreeMap<u64, PerClass<BBox>> = manifest.images.iter().map(|i| (i.id, BTreeMap::new())).collect();
    for a in &manifest.annotations {
        if let Some(l) = a.label() {
            gts.entry(a.image_id).or_default().entry(l).or_default().push(a.pixel_box());
        }
    }
    let mut dets: BTreeMap<u64, PerClass<(BBox, f64)>> = BTreeMap::new();
    for d in &preds.detections {
        dets.entry(d.image_id)
            .or_default()
            .entry(d.label)
            .or_default()
            .push((d.bbox, d.confidence));
    }
    let image_ids: Vec<u64> = gts.keys().copied().collect();
    let empty_gt = PerClass::<BBox>::new();
    let empty_det = PerClass::<(BBox, f64)>::new();

    let mut reports = Vec::with_capacity(thresholds.len());
    for &thr in thresholds {
        let results: Vec<ImageResult> = image_ids
            .par_iter()
            .map(|id| {
                let g = gts.get(id).unwrap_or(&empty_gt);
                let d = dets.get(id).unwrap_or(&empty_det);
                let mut per_class = BTreeMap::new();
                for class in ClassLabel::ALL {
                    let gb: &[BBox] = g.get(&class).map_or(&[], |v| v.as_slice());
                    let db: &[(BBox, f64)] = d.get(&class).map_or(&[], |v| v.as_slice());
                    if gb.is_empty() && db.is_empty() {
                        continue;
                    }
                    let m = match_detections(db, gb, thr);
                    let mut outcomes: Vec<ScoredOutcome> = m
                        .tp
                        .iter()
                        .map(|&(p, _, _)| (p, true))
                        .chain(m.fp.iter().map(|&p| (p, false)))
                        .map(|(p, tp)| ScoredOutcome {
                            confidence: db[p].1,
                            tp,
                        })
                        .collect();
                    outcomes.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
                    per_class.insert(class, (m.tp.len(), m.fp.len(), m.fn_.len(), outcomes));
                }
                ImageResult { per_class }
            })
            .collect();

        let mut classes = Vec::new();
        let mut map_classes = Vec::new();
        let mut excluded = Vec::new();
        let mut ap_sum = 0.0;
        for class in ClassLabel::ALL {
            let (mut tp, mut fp, mut fn_) = (0, 0, 0);
            let mut outcomes = Vec::new();
            for r in &results {
                if let Some((t, f, n, o)) = r.per_class.get(&class) {
                    tp += t;
                    fp += f;
                    fn_ += n;
                    outcomes.extend_from_slice(o);
                }
            }
            let n_gt = tp + fn_;
            let n_pred = tp + fp;
            let precision = (n_pred > 0).then(|| tp as f64 / n_pred as f64);
            let recall = (n_gt > 0).then(|| tp as f64 / n_gt as f64);
            let ap = average_precision(&outcomes, n_gt);
            match ap {
                Some(v) => {
                    ap_sum += v;
                    map_classes.push(class);
                }
                None => excluded.push(class),
            }
            classes.push(ClassReport {
                class,
                n_gt,
                n_pred,
                tp,
                fp,
                fn_,
                precision,
                recall,
                f1: f1(precision, recall),
                ap,
            });
        }
        let map = (!map_classes.is_empty()).then(|| ap_sum / map_classes.len() as f64);
        reports.push(EvalReport {
            iou_threshold: thr,
            classes,
            map,
            map_classes,
            excluded_from_map: excluded,
        });
    }
    Ok(reports)
}
