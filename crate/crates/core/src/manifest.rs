//! COCO-compatible dataset manifest. Field order is fixed by declaration order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::BBox;
use crate::label::ClassLabel;
use crate::render::PixelAnnotation;
use crate::rng::RngSeed;
use crate::sampler::PageKind;

pub const GENERATOR: &str = "docsynth";

/// Provenance of a manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestInfo {
    pub generator: String,
    pub version: String,
    pub profile: String,
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub split: Option<String>,
    #[serde(default)]
    pub noise_rate: f64,
    #[serde(default)]
    pub noise_seed: Option<u64>,
    #[serde(default = "one")]
    pub sample_fraction: f64,
    #[serde(default)]
    pub sample_seeds: Vec<u64>,
    #[serde(default)]
    pub asset_policy: Option<String>,
    /// Directory holding the page images, relative to the manifest file unless absolute.
    #[serde(default)]
    pub image_dir: Option<String>,
    /// Logical font → file actually used.
    #[serde(default)]
    pub font_substitutions: BTreeMap<String, String>,
}

fn one() -> f64 {
    1.0
}

impl ManifestInfo {
    pub fn new(profile: impl Into<String>) -> Self {
        ManifestInfo {
            generator: GENERATOR.to_string(),
            version: crate::VERSION.to_string(),
            profile: profile.into(),
            master_seed: None,
            split: None,
            noise_rate: 0.0,
            noise_seed: None,
            sample_fraction: 1.0,
            sample_seeds: Vec::new(),
            asset_policy: None,
            image_dir: None,
            font_substitutions: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub id: u64,
    pub file_name: String,
    pub width: u32,
    pub height: u32,
    #[serde(default)]
    pub page_seed: Option<RngSeed>,
    #[serde(default)]
    pub page_kind: Option<PageKind>,
    /// Pages of one synthetic document share an id.
    #[serde(default)]
    pub document_id: Option<u64>,
    /// 1-based position within the document.
    #[serde(default)]
    pub page_number: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub id: u64,
    pub image_id: u64,
    pub category_id: u32,
    /// `[x, y, w, h]` in pixels.
    pub bbox: [f64; 4],
    pub area: f64,
    pub iscrowd: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asset_id: Option<String>,
}

impl AnnotationRecord {
    pub fn from_pixel(id: u64, image_id: u64, a: &PixelAnnotation) -> Self {
        AnnotationRecord {
            id,
            image_id,
            category_id: a.label.id(),
            bbox: a.bbox,
            area: a.area(),
            iscrowd: 0,
            asset_id: a.asset_id.clone(),
        }
    }

    pub fn label(&self) -> Option<ClassLabel> {
        ClassLabel::from_id(self.category_id)
    }

    pub fn pixel_box(&self) -> BBox {
        BBox::new(self.bbox[0], self.bbox[1], self.bbox[2], self.bbox[3])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub id: u32,
    pub name: String,
    pub supercategory: String,
}

pub fn categories() -> Vec<Category> {
    ClassLabel::ALL
        .iter()
        .map(|c| Category {
            id: c.id(),
            name: c.name().to_string(),
            supercategory: "layout".to_string(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub info: ManifestInfo,
    pub images: Vec<ImageRecord>,
    pub annotations: Vec<AnnotationRecord>,
    pub categories: Vec<Category>,
}

impl DatasetManifest {
    pub fn new(info: ManifestInfo, images: Vec<ImageRecord>, annotations: Vec<AnnotationRecord>) -> Self {
        DatasetManifest {
            info,
            images,
            annotations,
            categories: categories(),
        }
    }

    pub fn empty(info: ManifestInfo) -> Self {
        DatasetManifest::new(info, Vec::new(), Vec::new())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: DatasetManifest = serde_json::from_str(&text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// Checks category ids, id uniqueness and image references.
    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for img in &self.images {
            if !ids.insert(img.id) {
                return Err(Error::validation("images", format!("duplicate image id {}", img.id)));
            }
        }
        let mut ann_ids = BTreeSet::new();
        for a in &self.annotations {
            if !ann_ids.insert(a.id) {
                return Err(Error::validation("annotations", format!("duplicate annotation id {}", a.id)));
            }
            if ClassLabel::from_id(a.category_id).is_none() {
                return Err(Error::validation(
                    "annotations",
                    format!("annotation {} has unknown category id {}", a.id, a.category_id),
                ));
            }
            if !ids.contains(&a.image_id) {
                return Err(Error::validation(
                    "annotations",
                    format!("annotation {} references missing image {}", a.id, a.image_id),
                ));
            }
        }
        Ok(())
    }

    pub fn image(&self, id: u64) -> Option<&ImageRecord> {
        self.images.iter().find(|i| i.id == id)
    }

    pub fn image_index(&self) -> HashMap<u64, &ImageRecord> {
        self.images.iter().map(|i| (i.id, i)).collect()
    }

    /// Annotations grouped by image id, in manifest order.
    pub fn annotations_by_image(&self) -> BTreeMap<u64, Vec<&AnnotationRecord>> {
        let mut out: BTreeMap<u64, Vec<&AnnotationRecord>> = self.images.iter().map(|i| (i.id, Vec::new())).collect();
        for a in &self.annotations {
            out.entry(a.image_id).or_default().push(a);
        }
        out
    }
}

/// Assigns document ids and page numbers: every title page opens a new
/// document. Inner pages before the first title page continue an unseen
/// document and are numbered from 2.
pub fn assign_documents(images: &mut [ImageRecord]) {
    let mut doc = 0u64;
    let mut page = 1u32;
    for (i, img) in images.iter_mut().enumerate() {
        match img.page_kind {
            Some(PageKind::Title) => {
                if i > 0 {
                    doc += 1;
                }
                page = 1;
            }
            _ if i == 0 => page = 2,
            _ => page += 1,
        }
        img.document_id = Some(doc);
        img.page_number = Some(page);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(id: u64, kind: PageKind) -> ImageRecord {
        ImageRecord {
            id,
            file_name: format!("{id}.png"),
            width: 10,
            height: 10,
            page_seed: None,
            page_kind: Some(kind),
            document_id: None,
            page_number: None,
        }
    }

    #[test]
    fn documents_start_at_title_pages() {
        use PageKind::*;
        let mut imgs: Vec<ImageRecord> = [Inner, Title, Inner, Inner, Title]
            .iter()
            .enumerate()
            .map(|(i, k)| img(i as u64, *k))
            .collect();
        assign_documents(&mut imgs);
        let got: Vec<(u64, u32)> = imgs.iter().map(|i| (i.document_id.unwrap(), i.page_number.unwrap())).collect();
        assert_eq!(got, vec![(0, 2), (1, 1), (1, 2), (1, 3), (2, 1)]);
    }

    #[test]
    fn validate_rejects_bad_category() {
        let mut m = DatasetManifest::empty(ManifestInfo::new("x"));
        m.images.push(img(0, PageKind::Inner));
        m.annotations.push(AnnotationRecord {
            id: 1,
            image_id: 0,
            category_id: 99,
            bbox: [0.0, 0.0, 1.0, 1.0],
            area: 1.0,
            iscrowd: 0,
            asset_id: None,
        });
        assert!(m.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut m = DatasetManifest::empty(ManifestInfo::new("ACL"));
        m.images.push(img(3, PageKind::Title));
        m.annotations.push(AnnotationRecord {
            id: 1,
            image_id: 3,
            category_id: 6,
            bbox: [1.0, 2.0, 3.0, 4.0],
            area: 12.0,
            iscrowd: 0,
            asset_id: Some("procedural/figure/00".into()),
        });
        let back: DatasetManifest = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.categories.len(), 9);
    }
}
