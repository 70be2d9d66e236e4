use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::BBox;
use crate::label::ClassLabel;
use crate::manifest::DatasetManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordSpace {
    Pixel,
    Normalized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub image_id: u64,
    pub label: ClassLabel,
    pub bbox: BBox,
    pub confidence: f64,
}

/// One line of a prediction file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub image_id: u64,
    pub category_id: u32,
    pub bbox: [f64; 4],
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub space: CoordSpace,
    pub detections: Vec<Detection>,
}

impl PredictionSet {
    pub fn new(space: CoordSpace, detections: Vec<Detection>) -> Self {
        PredictionSet { space, detections }
    }

    pub fn len(&self) -> usize {
        self.detections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detections.is_empty()
    }

    /// Ground truth as predictions with confidence 1, in pixel space.
    pub fn from_ground_truth(m: &DatasetManifest) -> Self {
        let detections = m
            .annotations
            .iter()
            .filter_map(|a| {
                Some(Detection {
                    image_id: a.image_id,
                    label: a.label()?,
                    bbox: a.pixel_box(),
                    confidence: 1.0,
                })
            })
            .collect();
        PredictionSet::new(CoordSpace::Pixel, detections)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, d) in self.detections.iter().enumerate() {
            if !(0.0..=1.0).contains(&d.confidence) {
                return Err(Error::validation(
                    "score",
                    format!("detection {i} has confidence {} outside [0, 1]", d.confidence),
                ));
            }
            let b = &d.bbox;
            if !(b.w > 0.0 && b.h > 0.0 && b.x.is_finite() && b.y.is_finite()) {
                return Err(Error::validation("bbox", format!("detection {i} has a degenerate box")));
            }
        }
        Ok(())
    }

    /// Converts to pixel space using the manifest's image sizes.
    pub fn to_pixels(&self, m: &DatasetManifest) -> Result<PredictionSet> {
        if self.space == CoordSpace::Pixel {
            return Ok(self.clone());
        }
        let index = m.image_index();
        let detections = self
            .detections
            .iter()
            .map(|d| {
                let img = index.get(&d.image_id).ok_or(Error::UnknownImage(d.image_id))?;
                Ok(Detection {
                    bbox: d.bbox.scale(img.width as f64, img.height as f64),
                    ..d.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PredictionSet::new(CoordSpace::Pixel, detections))
    }

    /// Detections grouped by image, keeping input order within each image.
    pub fn by_image(&self) -> BTreeMap<u64, Vec<&Detection>> {
        let mut out: BTreeMap<u64, Vec<&Detection>> = BTreeMap::new();
        for d in &self.detections {
            out.entry(d.image_id).or_default().push(d);
        }
        out
    }

    pub fn rows(&self) -> Vec<PredictionRow> {
        self.detections
            .iter()
            .map(|d| PredictionRow {
                image_id: d.image_id,
                category_id: d.label.id(),
                bbox: d.bbox.to_array(),
                score: d.confidence,
            })
            .collect()
    }

    pub fn from_rows(rows: Vec<PredictionRow>, space: CoordSpace) -> Result<Self> {
        let detections = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let label = ClassLabel::from_id(r.category_id).ok_or_else(|| {
                    Error::validation("category_id", format!("row {} has unknown category id {}", i + 1, r.category_id))
                })?;
                Ok(Detection {
                    image_id: r.image_id,
                    label,
                    bbox: BBox::new(r.bbox[0], r.bbox[1], r.bbox[2], r.bbox[3]),
                    confidence: r.score,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let set = PredictionSet::new(space, detections);
        set.validate()?;
        Ok(set)
    }

    /// Reads JSON lines, or a single JSON array of rows.
    pub fn load(path: impl AsRef<Path>, space: CoordSpace) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = BufReader::new(file);
        let mut first = String::new();
        let mut rows = Vec::new();
        loop {
            first.clear();
            if reader.read_line(&mut first).map_err(|e| Error::io(path, e))? == 0 || !first.trim().is_empty() {
                break;
            }
        }
        if first.trim_start().starts_with('[') {
            let mut rest = String::new();
            std::io::Read::read_to_string(&mut reader, &mut rest).map_err(|e| Error::io(path, e))?;
            rows = serde_json::from_str(&(first + &rest))?;
        } else if !first.trim().is_empty() {
            rows.push(serde_json::from_str(first.trim())?);
            for line in reader.lines() {
                let line = line.map_err(|e| Error::io(path, e))?;
                if !line.trim().is_empty() {
                    rows.push(serde_json::from_str(line.trim())?);
                }
            }
        }
        PredictionSet::from_rows(rows, space)
    }

    pub fn save_jsonl(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| Error::io(path, e))?);
        for row in self.rows() {
            serde_json::to_writer(&mut out, &row)?;
            out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }
}
