//! Rasterizes page layouts and converts normalized ground truth to pixels.

use std::path::Path;

use ab_glyph::{Font, FontArc, PxScale, ScaleFont};
use image::{imageops, RgbImage};
use serde::{Deserialize, Serialize};

use crate::assets::degrade;
use crate::compose::{ContentRef, PageLayout, Paragraph, LINE_SPACING, PAGE_HEIGHT_PT};
use crate::error::{Error, Result};
use crate::fonts::FontBook;
use crate::geom::BBox;
use crate::label::ClassLabel;
use crate::manifest::{AnnotationRecord, DatasetManifest, ImageRecord, ManifestInfo};
use crate::raster::{text_width, Canvas, PxRect, BLACK, WHITE};
use crate::sampler::{PageConfig, ResolvedFont};
use crate::style::{Alignment, Caps, FontRole};

pub const DEFAULT_WIDTH: u32 = 1275;
pub const DEFAULT_HEIGHT: u32 = 1650;
pub const MIN_PAGE_PX: u32 = 200;

const SMALL_CAPS_SCALE: f32 = 0.85;
const PARAGRAPH_GAP: f32 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub antialias: bool,
    /// Applies scan-like degradation to placed assets.
    pub degrade_assets: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
            antialias: true,
            degrade_assets: false,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width < MIN_PAGE_PX || self.height < MIN_PAGE_PX {
            return Err(Error::validation(
                "page_px",
                format!("{}x{} is below the {MIN_PAGE_PX} px minimum", self.width, self.height),
            ));
        }
        Ok(())
    }

    /// Pixels per typographic point along the page height.
    pub fn px_per_pt(&self) -> f32 {
        self.height as f32 / PAGE_HEIGHT_PT as f32
    }
}

/// Ground-truth box in pixels; components are whole numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelAnnotation {
    pub element_id: u32,
    pub label: ClassLabel,
    pub bbox: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asset_id: Option<String>,
}

impl PixelAnnotation {
    pub fn area(&self) -> f64 {
        self.bbox[2] * self.bbox[3]
    }
}

#[derive(Debug, Clone)]
pub struct RenderedPage {
    pub image: RgbImage,
    pub annotations: Vec<PixelAnnotation>,
    /// Text elements whose content did not fit their box.
    pub truncated: Vec<u32>,
}

/// `round(box ⊙ page_px)` per component.
pub fn to_pixel_box(b: &BBox, width: u32, height: u32) -> [f64; 4] {
    let (w, h) = (width as f64, height as f64);
    [(b.x * w).round(), (b.y * h).round(), (b.w * w).round(), (b.h * h).round()]
}

pub fn pixel_annotations(layout: &PageLayout, width: u32, height: u32) -> Vec<PixelAnnotation> {
    layout
        .elements
        .iter()
        .map(|e| PixelAnnotation {
            element_id: e.id,
            label: e.label,
            bbox: to_pixel_box(&e.bbox, width, height),
            asset_id: match &e.content {
                ContentRef::Asset(a) => Some(a.id.clone()),
                ContentRef::Text(_) => None,
            },
        })
        .collect()
}

fn px_rect(b: &[f64; 4]) -> PxRect {
    let x0 = b[0] as i64;
    let y0 = b[1] as i64;
    PxRect::new(x0, y0, x0 + b[2] as i64, y0 + b[3] as i64)
}

pub fn render_page(layout: &PageLayout, spec: &RenderSpec, fonts: &FontBook) -> Result<RenderedPage> {
    spec.validate()?;
    let annotations = pixel_annotations(layout, spec.width, spec.height);
    let mut image = RgbImage::from_pixel(spec.width, spec.height, WHITE);
    let mut truncated = Vec::new();
    {
        let mut canvas = Canvas::new(&mut image);
        canvas.antialias = spec.antialias;
        for (e, ann) in layout.elements.iter().zip(&annotations) {
            let rect = px_rect(&ann.bbox);
            if rect.is_empty() {
                continue;
            }
            canvas.set_clip(rect);
            match &e.content {
                ContentRef::Asset(asset) => {
                    let src = asset.load_image()?;
                    let src = if spec.degrade_assets { degrade(&src) } else { src };
                    draw_fitted(&mut canvas, &src, rect);
                }
                ContentRef::Text(paragraphs) => {
                    let label = e.label;
                    let fit = draw_text_box(&mut canvas, &layout.config, spec, fonts, paragraphs, rect, label)?;
                    if !fit {
                        log::debug!("page {}: element {} ({label}) text truncated", layout.page_id, e.id);
                        truncated.push(e.id);
                    }
                }
            }
        }
        canvas.reset_clip();
    }
    Ok(RenderedPage {
        image,
        annotations,
        truncated,
    })
}

/// Scales `src` to fit inside `rect` preserving aspect, centred.
fn draw_fitted(canvas: &mut Canvas, src: &RgbImage, rect: PxRect) {
    let (bw, bh) = (rect.width() as f64, rect.height() as f64);
    let (sw, sh) = (src.width() as f64, src.height() as f64);
    let scale = (bw / sw).min(bh / sh);
    let w = ((sw * scale).round() as u32).clamp(1, rect.width() as u32);
    let h = ((sh * scale).round() as u32).clamp(1, rect.height() as u32);
    let scaled = imageops::resize(src, w, h, imageops::FilterType::Triangle);
    let x0 = rect.x0 + (rect.width() - w as i64) / 2;
    let y0 = rect.y0 + (rect.height() - h as i64) / 2;
    canvas.blit(&scaled, x0, y0);
}

struct Face {
    font: FontArc,
    px: f32,
    caps: Caps,
}

impl Face {
    fn word(&self, w: &str) -> String {
        match self.caps {
            Caps::None => w.to_string(),
            Caps::SmallCaps | Caps::AllCaps => w.to_uppercase(),
        }
    }
}

fn resolved<'a>(config: &'a PageConfig, role: FontRole) -> Result<&'a ResolvedFont> {
    config
        .font(role)
        .or_else(|| config.font(FontRole::Body))
        .ok_or_else(|| Error::FontResolution(format!("no font for role {role}")))
}

fn face(config: &PageConfig, spec: &RenderSpec, fonts: &FontBook, role: FontRole) -> Result<(Face, Alignment)> {
    let rf = resolved(config, role)?;
    let font = fonts.resolve(&rf.spec.family, rf.spec.weight, rf.spec.slant)?.clone();
    let mut px = rf.size_pt as f32 * spec.px_per_pt();
    if rf.spec.caps == Caps::SmallCaps {
        px *= SMALL_CAPS_SCALE;
    }
    Ok((
        Face {
            font,
            px,
            caps: rf.spec.caps,
        },
        rf.spec.alignment,
    ))
}

/// One positioned word run of a line.
struct Word {
    text: String,
    face: usize,
    width: f32,
}

/// Draws paragraphs top-down; returns false when some text did not fit.
fn draw_text_box(
    canvas: &mut Canvas,
    config: &PageConfig,
    spec: &RenderSpec,
    fonts: &FontBook,
    paragraphs: &[Paragraph],
    rect: PxRect,
    label: ClassLabel,
) -> Result<bool> {
    let box_w = rect.width() as f32;
    let bottom = rect.y1 as f32;
    let mut y = rect.y0 as f32;
    let mut complete = true;
    for (pi, para) in paragraphs.iter().enumerate() {
        let (body, alignment) = face(config, spec, fonts, para.font)?;
        let mut faces = vec![body];
        let mut words: Vec<(Word, bool)> = Vec::new();
        if let Some(lead) = &para.lead {
            let (lf, _) = face(config, spec, fonts, lead.font)?;
            faces.push(lf);
            for w in lead.text.split_whitespace() {
                let text = faces[1].word(w);
                let width = text_width(&faces[1].font, faces[1].px, &text);
                words.push((Word { text, face: 1, width }, false));
            }
        }
        for (i, tok) in para.block.tokens.iter().enumerate() {
            let text = faces[0].word(tok);
            let width = text_width(&faces[0].font, faces[0].px, &text);
            let forced = para.block.breaks.contains(&i);
            words.push((Word { text, face: 0, width }, forced));
        }

        let space = text_width(&faces[0].font, faces[0].px, " ");
        let mut lines: Vec<Vec<Word>> = Vec::new();
        let mut line: Vec<Word> = Vec::new();
        let mut line_w = 0.0;
        let mut hard_breaks = Vec::new();
        for (word, forced) in words {
            let add = if line.is_empty() { word.width } else { space + word.width };
            if !line.is_empty() && (forced || line_w + add > box_w) {
                hard_breaks.push(forced);
                lines.push(std::mem::take(&mut line));
                line_w = word.width;
            } else {
                line_w += add;
            }
            line.push(word);
        }
        if !line.is_empty() {
            lines.push(line);
        }
        hard_breaks.push(true);

        let scaled = faces[0].font.as_scaled(PxScale::from(faces[0].px));
        let ascent = scaled.ascent();
        let extent = ascent - scaled.descent();
        let lh = faces[0].px * LINE_SPACING as f32;
        let single = lines.len() == 1;
        let n_lines = lines.len();
        for (li, words) in lines.into_iter().enumerate() {
            if y + extent > bottom + 0.5 {
                complete = false;
                break;
            }
            let baseline = y + ascent;
            let natural: f32 = words.iter().map(|w| w.width).sum::<f32>() + space * (words.len() as f32 - 1.0);
            let last = li + 1 == n_lines || hard_breaks[li];
            let align = match alignment {
                Alignment::Distributed if label == ClassLabel::Caption && single => Alignment::Center,
                Alignment::Distributed if last => Alignment::Left,
                a => a,
            };
            let (mut x, gap) = match align {
                Alignment::Left => (rect.x0 as f32, space),
                Alignment::Center => (rect.x0 as f32 + ((box_w - natural) / 2.0).max(0.0), space),
                Alignment::Distributed => {
                    let slots = (words.len() as f32 - 1.0).max(1.0);
                    (rect.x0 as f32, space + ((box_w - natural) / slots).max(0.0))
                }
            };
            for w in &words {
                let f = &faces[w.face];
                canvas.text(&f.font, f.px, x, baseline, &w.text, BLACK);
                x += w.width + gap;
            }
            y += lh;
        }
        if !complete {
            return Ok(false);
        }
        if pi + 1 < paragraphs.len() {
            y += lh * PARAGRAPH_GAP;
        }
    }
    Ok(complete)
}

/// Writes page images as PNG into `image_dir` and returns their manifest.
///
/// Images get ids `0..pages.len()` and file names `page_<id>.png`.
pub fn export_coco(pages: &[RenderedPage], image_dir: impl AsRef<Path>, info: ManifestInfo) -> Result<DatasetManifest> {
    let dir = image_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut images = Vec::with_capacity(pages.len());
    let mut annotations = Vec::new();
    for (i, page) in pages.iter().enumerate() {
        let file_name = format!("page_{i:06}.png");
        let path = dir.join(&file_name);
        page.image.save(&path).map_err(|e| Error::AssetLoad {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        images.push(ImageRecord {
            id: i as u64,
            file_name,
            width: page.image.width(),
            height: page.image.height(),
            page_seed: None,
            page_kind: None,
            document_id: None,
            page_number: None,
        });
        for a in &page.annotations {
            annotations.push(AnnotationRecord::from_pixel(annotations.len() as u64 + 1, i as u64, a));
        }
    }
    Ok(DatasetManifest::new(info, images, annotations))
}
