#![allow(dead_code)]

use docsynth::manifest::{AnnotationRecord, DatasetManifest, ImageRecord, ManifestInfo};
use docsynth::sampler::PageKind;
use docsynth::eval::{CoordSpace, Detection, PredictionSet};
use docsynth::{BBox, ClassLabel};

pub const W: u32 = 1000;
pub const H: u32 = 1000;

pub fn image(id: u64, kind: PageKind, document: u64, page: u32) -> ImageRecord {
    ImageRecord {
        id,
        file_name: format!("page_{id:06}.png"),
        width: W,
        height: H,
        page_seed: None,
        page_kind: Some(kind),
        document_id: Some(document),
        page_number: Some(page),
    }
}

/// Builds a manifest from `(image id, class, [x, y, w, h])` ground truth.
pub fn manifest(images: Vec<ImageRecord>, gts: &[(u64, ClassLabel, [f64; 4])]) -> DatasetManifest {
    let annotations = gts
        .iter()
        .enumerate()
        .map(|(i, (img, label, b))| AnnotationRecord {
            id: i as u64 + 1,
            image_id: *img,
            category_id: label.id(),
            bbox: *b,
            area: b[2] * b[3],
            iscrowd: 0,
            asset_id: None,
        })
        .collect();
    let m = DatasetManifest::new(ManifestInfo::new("test"), images, annotations);
    m.validate().unwrap();
    m
}

pub fn det(image_id: u64, label: ClassLabel, b: [f64; 4], confidence: f64) -> Detection {
    Detection {
        image_id,
        label,
        bbox: BBox::new(b[0], b[1], b[2], b[3]),
        confidence,
    }
}

/// Four documents of three pages; page 1 of each is a title page.
pub fn document_manifest() -> DatasetManifest {
    let mut images = Vec::new();
    for doc in 0..4u64 {
        for page in 1..=3u32 {
            let kind = if page == 1 { PageKind::Title } else { PageKind::Inner };
            images.push(image(doc * 3 + page as u64 - 1, kind, doc, page));
        }
    }
    manifest(images, &[])
}

/// Compliant detections plus ten abstracts off the first page and ten
/// first-page titles starting below 30% of the page height. Returns the set and the twenty offenders.
pub fn crafted() -> (PredictionSet, Vec<Detection>) {
    let mut dets = Vec::new();
    let mut bad = Vec::new();
    for doc in 0..4u64 {
        let first = doc * 3;
        dets.push(det(first, ClassLabel::Title, [100.0, 50.0, 800.0, 60.0], 0.9));
        dets.push(det(first, ClassLabel::Author, [100.0, 120.0, 800.0, 60.0], 0.9));
        dets.push(det(first, ClassLabel::Abstract, [100.0, 250.0, 380.0, 300.0], 0.9));
        dets.push(det(first + 1, ClassLabel::Figure, [100.0, 600.0, 300.0, 200.0], 0.8));
        dets.push(det(first + 2, ClassLabel::BodyText, [100.0, 100.0, 380.0, 800.0], 0.8));
    }
    // Ten abstracts off the first page.
    for i in 0..10u64 {
        let img = (i % 4) * 3 + 1 + i % 2;
        bad.push(det(img, ClassLabel::Abstract, [100.0, 100.0 + i as f64, 380.0, 200.0], 0.5));
    }
    // Ten first-page titles starting below 30% of the page height.
    for i in 0..10u64 {
        let img = (i % 4) * 3;
        bad.push(det(img, ClassLabel::Title, [100.0, 301.0 + 40.0 * i as f64, 600.0, 30.0], 0.5));
    }
    // Title at 29.9% stays.
    dets.push(det(3, ClassLabel::Title, [100.0, 299.0, 600.0, 30.0], 0.5));
    let mut all = dets;
    for (k, b) in bad.iter().enumerate() {
        all.insert((k * 7) % all.len(), b.clone());
    }
    (PredictionSet::new(CoordSpace::Pixel, all), bad)
}
