use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::predictions::{Detection, PredictionSet};
use crate::error::Result;
use crate::label::ClassLabel;
use crate::manifest::DatasetManifest;

/// Titles whose top edge lies below this page fraction are removed.
pub const TITLE_ZONE: f64 = 0.30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    /// Title, author and abstract only occur on a document's first page.
    PageOrder,
    /// Titles start in the top 30% of the page.
    Position,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub detection: Detection,
    pub heuristic: Heuristic,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicOutcome {
    pub kept: PredictionSet,
    pub removed: Vec<Removal>,
    /// Heuristics not applied for lack of metadata.
    pub skipped: Vec<Heuristic>,
}

/// Removes detections that are structurally impossible for their page.
pub fn apply_heuristics(preds: &PredictionSet, manifest: &DatasetManifest, which: &BTreeSet<Heuristic>) -> Result<HeuristicOutcome> {
    let pixel = preds.to_pixels(manifest)?;
    let index = manifest.image_index();
    let mut skipped = Vec::new();
    let mut page_order = which.contains(&Heuristic::PageOrder);
    if page_order {
        let missing = pixel
            .detections
            .iter()
            .any(|d| index.get(&d.image_id).map_or(true, |i| i.page_number.is_none()));
        if missing {
            log::warn!("page-order heuristic skipped: manifest lacks page numbers");
            skipped.push(Heuristic::PageOrder);
            page_order = false;
        }
    }
    let position = which.contains(&Heuristic::Position);

    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for (orig, d) in preds.detections.iter().zip(&pixel.detections) {
        let img = index.get(&d.image_id);
        let mut verdict = None;
        if page_order {
            let page = img.and_then(|i| i.page_number).unwrap_or(1);
            if page != 1 && matches!(d.label, ClassLabel::Title | ClassLabel::Author | ClassLabel::Abstract) {
                verdict = Some((Heuristic::PageOrder, format!("{} on page {page}", d.label)));
            }
        }
        if verdict.is_none() && position && d.label == ClassLabel::Title {
            if let Some(i) = img {
                let top = d.bbox.y / i.height as f64;
                if top > TITLE_ZONE {
                    verdict = Some((Heuristic::Position, format!("title top at {top:.3}")));
                }
            }
        }
        match verdict {
            Some((heuristic, reason)) => {
                log::debug!("image {}: removed {} ({reason})", d.image_id, d.label);
                removed.push(Removal {
                    detection: orig.clone(),
                    heuristic,
                    reason,
                });
            }
            None => kept.push(orig.clone()),
        }
    }
    Ok(HeuristicOutcome {
        kept: PredictionSet::new(preds.space, kept),
        removed,
        skipped,
    })
}
