use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matching::{iou, match_detections};
use super::predictions::PredictionSet;
use crate::error::{Error, Result};
use crate::geom::BBox;
use crate::label::ClassLabel;
use crate::manifest::DatasetManifest;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassErrors {
    /// False positives overlapping a ground truth of their own class.
    pub misplaced: usize,
    /// False positives at or above the threshold on another class's ground truth.
    pub misclassified: usize,
    pub hallucinated: usize,
    pub missed: usize,
    /// Misses covered by a prediction of another class.
    pub absorbed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBreakdown {
    pub iou_threshold: f64,
    pub classes: BTreeMap<ClassLabel, ClassErrors>,
}

/// Partitions false positives and false negatives by cause.
///
/// A false positive is misplaced when it overlaps any same-class ground
/// truth (including one already claimed by a better detection), else
/// misclassified when it reaches the threshold against another class, else
/// hallucinated. A false negative is absorbed when some other-class
/// prediction reaches the threshold against it, else missed.
pub fn error_distribution(preds: &PredictionSet, manifest: &DatasetManifest, iou_threshold: f64) -> Result<ErrorBreakdown> {
    let preds = preds.to_pixels(manifest)?;
    let index = manifest.image_index();
    if let Some(d) = preds.detections.iter().find(|d| !index.contains_key(&d.image_id)) {
        return Err(Error::UnknownImage(d.image_id));
    }
    let mut classes: BTreeMap<ClassLabel, ClassErrors> = ClassLabel::ALL.iter().map(|c| (*c, ClassErrors::default())).collect();
    let gts = manifest.annotations_by_image();
    let dets = preds.by_image();
    for (image_id, anns) in &gts {
        let gt: Vec<(ClassLabel, BBox)> = anns.iter().filter_map(|a| Some((a.label()?, a.pixel_box()))).collect();
        let pd: Vec<(ClassLabel, BBox, f64)> = dets
            .get(image_id)
            .map(|v| v.iter().map(|d| (d.label, d.bbox, d.confidence)).collect())
            .unwrap_or_default();
        for class in ClassLabel::ALL {
            let gb: Vec<BBox> = gt.iter().filter(|g| g.0 == class).map(|g| g.1).collect();
            let db: Vec<(BBox, f64)> = pd.iter().filter(|p| p.0 == class).map(|p| (p.1, p.2)).collect();
            let m = match_detections(&db, &gb, iou_threshold);
            let e = classes.get_mut(&class).expect("all classes present");
            for &p in &m.fp {
                let b = &db[p].0;
                if gb.iter().any(|g| iou(b, g) > 0.0) {
                    e.misplaced += 1;
                } else if gt.iter().any(|(l, g)| *l != class && iou(b, g) >= iou_threshold) {
                    e.misclassified += 1;
                } else {
                    e.hallucinated += 1;
                }
            }
            for &g in &m.fn_ {
                if pd.iter().any(|(l, b, _)| *l != class && iou(b, &gb[g]) >= iou_threshold) {
                    e.absorbed += 1;
                } else {
                    e.missed += 1;
                }
            }
        }
    }
    Ok(ErrorBreakdown {
        iou_threshold,
        classes,
    })
}
