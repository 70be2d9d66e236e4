//! Brute-force structural checks over composed pages.

use docsynth::compose::{ContentRef, PageLayout, PAGE_HEIGHT_PT, PAGE_WIDTH_PT};
use docsynth::sampler::PageKind;
use docsynth::style::StyleProfile;
use docsynth::{BBox, ClassLabel};

const EPS: f64 = 1e-9;
const OVERLAP_AREA: f64 = 1e-6;
const ASPECT_TOLERANCE: f64 = 0.15;

#[derive(Debug, Default, Clone)]
pub struct Tally {
    pub pages: usize,
    pub title_pages: usize,
    pub boxes: usize,
    pub out_of_bounds: usize,
    pub non_text_pairs: usize,
    pub overlaps: usize,
    pub structure_violations: usize,
    pub captions: usize,
    pub caption_gap_violations: usize,
    pub figures: usize,
    pub centroid_violations: usize,
    pub assets: usize,
    pub aspect_violations: usize,
    pub messages: Vec<String>,
}

impl Tally {
    pub fn violations(&self) -> usize {
        self.out_of_bounds
            + self.overlaps
            + self.structure_violations
            + self.caption_gap_violations
            + self.centroid_violations
            + self.aspect_violations
    }

    fn note(&mut self, msg: String) {
        if self.messages.len() < 20 {
            self.messages.push(msg);
        }
    }
}

fn in_bounds(b: &BBox) -> bool {
    b.x >= -EPS && b.y >= -EPS && b.w > 0.0 && b.h > 0.0 && b.x + b.w <= 1.0 + EPS && b.y + b.h <= 1.0 + EPS
}

fn non_text(label: ClassLabel) -> bool {
    matches!(
        label,
        ClassLabel::Figure | ClassLabel::Table | ClassLabel::Algorithm | ClassLabel::Equation | ClassLabel::Caption
    )
}

pub fn check(layout: &PageLayout, profile: &StyleProfile, t: &mut Tally) {
    let page = layout.page_id;
    t.pages += 1;
    for e in &layout.elements {
        t.boxes += 1;
        if !in_bounds(&e.bbox) {
            t.out_of_bounds += 1;
            t.note(format!("page {page}: {} box {:?} out of bounds", e.label, e.bbox));
        }
    }

    let solid: Vec<_> = layout.elements.iter().filter(|e| non_text(e.label)).collect();
    for i in 0..solid.len() {
        for j in i + 1..solid.len() {
            t.non_text_pairs += 1;
            let a = &solid[i].bbox;
            let b = &solid[j].bbox;
            let w = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
            let h = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
            if w > 0.0 && h > 0.0 && w * h >= OVERLAP_AREA {
                t.overlaps += 1;
                t.note(format!("page {page}: {} and {} overlap", solid[i].label, solid[j].label));
            }
        }
    }

    let once = [ClassLabel::Title, ClassLabel::Author, ClassLabel::Abstract];
    let counts: Vec<usize> = once.iter().map(|c| layout.elements.iter().filter(|e| e.label == *c).count()).collect();
    match layout.page_kind {
        PageKind::Title => {
            t.title_pages += 1;
            if counts != [1, 1, 1] {
                t.structure_violations += 1;
                t.note(format!("page {page}: title page with title/author/abstract counts {counts:?}"));
            }
            for e in layout
                .elements
                .iter()
                .filter(|e| matches!(e.label, ClassLabel::Title | ClassLabel::Author))
            {
                if e.bbox.y >= 0.30 {
                    t.structure_violations += 1;
                    t.note(format!("page {page}: {} starts at {}", e.label, e.bbox.y));
                }
            }
        }
        PageKind::Inner => {
            if counts != [0, 0, 0] {
                t.structure_violations += 1;
                t.note(format!("page {page}: inner page with title/author/abstract counts {counts:?}"));
            }
        }
    }

    let gap = &profile.distances.image_caption;
    for cap in layout.elements.iter().filter(|e| e.label == ClassLabel::Caption) {
        t.captions += 1;
        let Some(owner) = cap.linked_element.and_then(|id| layout.elements.iter().find(|e| e.id == id)) else {
            t.caption_gap_violations += 1;
            t.note(format!("page {page}: caption {} has no linked element", cap.id));
            continue;
        };
        if owner.linked_caption != Some(cap.id) {
            t.caption_gap_violations += 1;
            t.note(format!("page {page}: caption {} link is one-sided", cap.id));
        }
        let d = if cap.bbox.y >= owner.bbox.y + owner.bbox.h - EPS {
            cap.bbox.y - (owner.bbox.y + owner.bbox.h)
        } else {
            owner.bbox.y - (cap.bbox.y + cap.bbox.h)
        };
        if d < gap.min - EPS || d > gap.max + EPS {
            t.caption_gap_violations += 1;
            t.note(format!("page {page}: caption gap {d} outside [{}, {}]", gap.min, gap.max));
        }
    }

    for f in layout.elements.iter().filter(|e| e.label == ClassLabel::Figure) {
        t.figures += 1;
        let cx = f.bbox.x + f.bbox.w / 2.0;
        let cy = f.bbox.y + f.bbox.h / 2.0;
        let inside = profile.placements.figure.iter().any(|s| {
            cx >= s.center_x.min - EPS
                && cx <= s.center_x.max + EPS
                && cy >= s.center_y.min - EPS
                && cy <= s.center_y.max + EPS
        });
        if !inside {
            t.centroid_violations += 1;
            t.note(format!("page {page}: figure centroid ({cx:.4}, {cy:.4}) outside every placement range"));
        }
    }

    for e in &layout.elements {
        if let ContentRef::Asset(a) = &e.content {
            t.assets += 1;
            let box_aspect = (e.bbox.w * PAGE_WIDTH_PT) / (e.bbox.h * PAGE_HEIGHT_PT);
            if (box_aspect / a.aspect() - 1.0).abs() > ASPECT_TOLERANCE {
                t.aspect_violations += 1;
                t.note(format!("page {page}: {} box aspect {box_aspect:.3} vs asset {:.3}", e.label, a.aspect()));
            }
        }
    }
}
