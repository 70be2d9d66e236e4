//! Graphical content for figures, tables, algorithms and equations.
//!
//! Assets come from an external directory laid out as `<class>/<file>.png|jpg`
//! or from a procedural generator that draws placeholder charts, ruled
//! tables, boxed pseudo-code and symbol strings on demand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use image::{imageops, GrayImage, Luma, Rgb, RgbImage};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fonts::FontBook;
use crate::label::ClassLabel;
use crate::raster::{text_width, Canvas, PxRect, BLACK, WHITE};
use crate::rng::{hash_str, Purpose, RngSeed};
use crate::style::{Slant, Weight};

/// Physical long side assumed when the placement size is unknown.
pub const DEFAULT_LONG_SIDE_PT: f64 = 300.0;
/// Raster density of procedural images.
const PROCEDURAL_PX_PER_PT: f64 = 2.0;
const MIN_PROCEDURAL_SIDE: f64 = 8.0;
const MAX_PROCEDURAL_SIDE: f64 = 2400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssetSourceKind {
    External,
    Procedural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UsagePolicy {
    /// Each external asset is placed at most once per corpus.
    Once,
    WithReplacement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetRef {
    pub id: String,
    pub class: ClassLabel,
    pub width: u32,
    pub height: u32,
    pub source: AssetSourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Generator inputs for procedural assets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub procedural: Option<ProceduralParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProceduralParams {
    pub aspect: f64,
    /// Physical size of the long side in points; sets text and stroke density.
    #[serde(default = "default_long_side")]
    pub long_side_pt: f64,
    pub seed: RngSeed,
}

fn default_long_side() -> f64 {
    DEFAULT_LONG_SIDE_PT
}

impl AssetRef {
    pub fn aspect(&self) -> f64 {
        self.width as f64 / self.height as f64
    }

    /// Decodes or regenerates the asset's pixels.
    pub fn load_image(&self) -> Result<RgbImage> {
        match (&self.path, &self.procedural) {
            (_, Some(p)) => Ok(procedural_image_sized(self.class, p.aspect, p.long_side_pt, p.seed)),
            (Some(path), None) => {
                let img = image::open(path).map_err(|e| Error::AssetLoad {
                    path: path.clone(),
                    reason: e.to_string(),
                })?;
                Ok(img.to_rgb8())
            }
            (None, None) => Err(Error::AssetLoad {
                path: PathBuf::from(&self.id),
                reason: "asset has neither a path nor generator parameters".into(),
            }),
        }
    }
}

/// Maps subdirectory names to classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap(pub BTreeMap<String, ClassLabel>);

impl Default for ClassMap {
    fn default() -> Self {
        let mut m = BTreeMap::new();
        for c in ClassLabel::VISUAL {
            m.insert(c.name().to_string(), c);
            m.insert(format!("{}s", c.name()), c);
        }
        ClassMap(m)
    }
}

#[derive(Debug)]
struct ClassStock {
    assets: Vec<AssetRef>,
    cursor: AtomicUsize,
}

impl Clone for ClassStock {
    fn clone(&self) -> Self {
        ClassStock {
            assets: self.assets.clone(),
            cursor: AtomicUsize::new(self.cursor.load(Ordering::SeqCst)),
        }
    }
}

/// Per-class asset lists plus a usage policy. Checkout is thread-safe: under
/// [`UsagePolicy::Once`] each external asset is reserved atomically.
#[derive(Debug, Clone)]
pub struct AssetPool {
    stock: BTreeMap<ClassLabel, Arc<ClassStock>>,
    policy: UsagePolicy,
    procedural_fallback: bool,
}

impl AssetPool {
    /// Procedural-only pool; never exhausts.
    pub fn procedural() -> AssetPool {
        AssetPool {
            stock: BTreeMap::new(),
            policy: UsagePolicy::WithReplacement,
            procedural_fallback: true,
        }
    }

    pub fn from_assets(assets: Vec<AssetRef>, policy: UsagePolicy) -> AssetPool {
        let mut by_class: BTreeMap<ClassLabel, Vec<AssetRef>> = BTreeMap::new();
        for a in assets {
            by_class.entry(a.class).or_default().push(a);
        }
        AssetPool {
            stock: by_class
                .into_iter()
                .map(|(c, assets)| {
                    (
                        c,
                        Arc::new(ClassStock {
                            assets,
                            cursor: AtomicUsize::new(0),
                        }),
                    )
                })
                .collect(),
            policy,
            procedural_fallback: false,
        }
    }

    pub fn policy(&self) -> UsagePolicy {
        self.policy
    }

    pub fn with_policy(mut self, policy: UsagePolicy) -> AssetPool {
        self.policy = policy;
        self
    }

    /// Classes missing from an external pool are drawn procedurally.
    pub fn with_procedural_fallback(mut self, on: bool) -> AssetPool {
        self.procedural_fallback = on;
        self
    }

    pub fn sizes(&self) -> BTreeMap<ClassLabel, usize> {
        self.stock.iter().map(|(c, s)| (*c, s.assets.len())).collect()
    }

    pub fn len(&self, class: ClassLabel) -> usize {
        self.stock.get(&class).map_or(0, |s| s.assets.len())
    }

    pub fn is_external(&self, class: ClassLabel) -> bool {
        self.len(class) > 0
    }

    /// Whether a request for `class` can be served at all.
    pub fn can_supply(&self, class: ClassLabel) -> bool {
        self.is_external(class) || self.procedural_fallback
    }

    /// Shuffles each class list; checkout order under `Once` follows it.
    pub fn shuffled(self, seed: u64) -> AssetPool {
        let stock = self
            .stock
            .into_iter()
            .map(|(c, s)| {
                let mut assets = s.assets.clone();
                let mut rng = RngSeed::new(seed, c.id() as u64).rng(Purpose::Asset);
                assets.shuffle(&mut rng);
                (
                    c,
                    Arc::new(ClassStock {
                        assets,
                        cursor: AtomicUsize::new(0),
                    }),
                )
            })
            .collect();
        AssetPool { stock, ..self }
    }

    /// Splits every class list into disjoint pools, in proportion to `weights`.
    pub fn partition(&self, weights: &[usize]) -> Vec<AssetPool> {
        let total: usize = weights.iter().sum();
        let mut out: Vec<BTreeMap<ClassLabel, Arc<ClassStock>>> = vec![BTreeMap::new(); weights.len()];
        for (class, s) in &self.stock {
            let n = s.assets.len();
            let mut start = 0;
            let mut acc = 0;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                let end = if total == 0 { n } else { (n * acc + total / 2) / total };
                let end = if i + 1 == weights.len() { n } else { end.min(n) };
                out[i].insert(
                    *class,
                    Arc::new(ClassStock {
                        assets: s.assets[start..end].to_vec(),
                        cursor: AtomicUsize::new(0),
                    }),
                );
                start = end;
            }
        }
        out.into_iter()
            .map(|stock| AssetPool {
                stock,
                policy: self.policy,
                procedural_fallback: self.procedural_fallback,
            })
            .collect()
    }

    /// Reserves an asset for one placement.
    ///
    /// `target_aspect` shapes procedural assets; `seed` names the placement.
    pub fn checkout(&self, class: ClassLabel, target_aspect: f64, seed: RngSeed) -> Result<AssetRef> {
        self.checkout_sized(class, target_aspect, DEFAULT_LONG_SIDE_PT, seed)
    }

    /// Like [`AssetPool::checkout`]; procedural assets are drawn for a
    /// placement whose long side measures `long_side_pt` points.
    pub fn checkout_sized(&self, class: ClassLabel, target_aspect: f64, long_side_pt: f64, seed: RngSeed) -> Result<AssetRef> {
        match self.stock.get(&class).filter(|s| !s.assets.is_empty()) {
            Some(stock) => match self.policy {
                UsagePolicy::Once => {
                    let i = stock.cursor.fetch_add(1, Ordering::SeqCst);
                    stock
                        .assets
                        .get(i)
                        .cloned()
                        .ok_or(Error::ExhaustedAssets(class))
                }
                UsagePolicy::WithReplacement => {
                    let mut rng = seed.rng(Purpose::Asset);
                    Ok(stock.assets.choose(&mut rng).expect("non-empty").clone())
                }
            },
            None if self.procedural_fallback => procedural_asset_sized(class, target_aspect, long_side_pt, seed),
            None => Err(Error::EmptyAssetClass(class)),
        }
    }

    /// Number of assets reserved so far under `Once`.
    pub fn used(&self, class: ClassLabel) -> usize {
        self.stock
            .get(&class)
            .map_or(0, |s| s.cursor.load(Ordering::SeqCst).min(s.assets.len()))
    }
}

fn is_image_file(p: &Path) -> bool {
    matches!(
        p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("png" | "jpg" | "jpeg")
    )
}

/// Indexes `<root>/<class>/<file>` images. Every file is fully decoded to validate it.
pub fn load_asset_dir(root: impl AsRef<Path>, class_map: &ClassMap, policy: UsagePolicy) -> Result<AssetPool> {
    let root = root.as_ref();
    let entries = std::fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut dirs: Vec<(ClassLabel, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if !path.is_dir() {
            continue;
        }
        let name = entry.file_name().to_string_lossy().to_lowercase();
        if let Some(class) = class_map.0.get(&name) {
            dirs.push((*class, path));
        }
    }
    dirs.sort();

    let mut files: Vec<(ClassLabel, PathBuf)> = Vec::new();
    for (class, dir) in &dirs {
        let mut found: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && is_image_file(p))
            .collect();
        if found.is_empty() {
            return Err(Error::EmptyAssetClass(*class));
        }
        found.sort();
        files.extend(found.into_iter().map(|p| (*class, p)));
    }

    let assets = files
        .par_iter()
        .map(|(class, path)| {
            let img = image::open(path).map_err(|e| Error::AssetLoad {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            let rel = path.strip_prefix(root).unwrap_or(path);
            Ok(AssetRef {
                id: rel.to_string_lossy().replace('\\', "/"),
                class: *class,
                width: img.width(),
                height: img.height(),
                source: AssetSourceKind::External,
                path: Some(path.clone()),
                procedural: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AssetPool::from_assets(assets, policy))
}

fn sanitize(v: f64, fallback: f64) -> f64 {
    if v.is_finite() && v > 0.0 {
        v
    } else {
        fallback
    }
}

fn procedural_dims(aspect: f64, long_side_pt: f64) -> (u32, u32) {
    let aspect = sanitize(aspect, 1.0);
    let long = (sanitize(long_side_pt, DEFAULT_LONG_SIDE_PT) * PROCEDURAL_PX_PER_PT).clamp(MIN_PROCEDURAL_SIDE, MAX_PROCEDURAL_SIDE);
    let (w, h) = if aspect >= 1.0 { (long, long / aspect) } else { (long * aspect, long) };
    (
        (w.round() as u32).max(MIN_PROCEDURAL_SIDE as u32),
        (h.round() as u32).max(MIN_PROCEDURAL_SIDE as u32),
    )
}

/// Describes a procedural asset; pixels are produced by [`AssetRef::load_image`].
pub fn procedural_asset(class: ClassLabel, target_aspect: f64, seed: RngSeed) -> Result<AssetRef> {
    procedural_asset_sized(class, target_aspect, DEFAULT_LONG_SIDE_PT, seed)
}

/// Procedural asset for a placement whose long side measures `long_side_pt` points.
pub fn procedural_asset_sized(class: ClassLabel, target_aspect: f64, long_side_pt: f64, seed: RngSeed) -> Result<AssetRef> {
    if !class.is_visual() {
        return Err(Error::InvalidArgument(format!("no procedural assets for class {class}")));
    }
    let (width, height) = procedural_dims(target_aspect, long_side_pt);
    let id = format!(
        "procedural/{}/{:016x}",
        class.name(),
        hash_str(&format!(
            "{}:{}:{}:{}:{}",
            class.id(),
            target_aspect.to_bits(),
            long_side_pt.to_bits(),
            seed.seed,
            seed.stream_id
        ))
    );
    Ok(AssetRef {
        id,
        class,
        width,
        height,
        source: AssetSourceKind::Procedural,
        path: None,
        procedural: Some(ProceduralParams {
            aspect: target_aspect,
            long_side_pt,
            seed,
        }),
    })
}

const PALETTE: [Rgb<u8>; 6] = [
    Rgb([31, 119, 180]),
    Rgb([255, 127, 14]),
    Rgb([44, 160, 44]),
    Rgb([214, 39, 40]),
    Rgb([148, 103, 189]),
    Rgb([90, 90, 90]),
];

/// Deterministically draws the placeholder image for a procedural asset.
pub fn procedural_image(class: ClassLabel, aspect: f64, seed: RngSeed) -> RgbImage {
    procedural_image_sized(class, aspect, DEFAULT_LONG_SIDE_PT, seed)
}

/// Draws a procedural asset sized for a `long_side_pt` placement; text and
/// strokes keep document-like point sizes whatever the placement size.
pub fn procedural_image_sized(class: ClassLabel, aspect: f64, long_side_pt: f64, seed: RngSeed) -> RgbImage {
    let (w, h) = procedural_dims(aspect, long_side_pt);
    let pt = w.max(h) as f32 / sanitize(long_side_pt, DEFAULT_LONG_SIDE_PT) as f32;
    let mut img = RgbImage::from_pixel(w, h, WHITE);
    let mut rng = seed.rng(Purpose::Asset);
    let fonts = FontBook::builtin();
    let serif = fonts
        .resolve("times", Weight::Regular, Slant::Upright)
        .expect("built-in serif")
        .clone();
    let bold = fonts
        .resolve("times", Weight::Bold, Slant::Upright)
        .expect("built-in serif bold")
        .clone();
    let mut c = Canvas::new(&mut img);
    match class {
        ClassLabel::Figure => draw_chart(&mut c, &mut rng, &serif, pt),
        ClassLabel::Table => draw_table(&mut c, &mut rng, &serif, pt),
        ClassLabel::Algorithm => draw_algorithm(&mut c, &mut rng, &serif, &bold, pt),
        ClassLabel::Equation => draw_equation(&mut c, &mut rng, &serif, pt),
        _ => {}
    }
    img
}

fn draw_chart<R: Rng>(c: &mut Canvas, rng: &mut R, font: &ab_glyph::FontArc, pt: f32) {
    let (w, h) = c.size();
    let (w, h) = (w as f32, h as f32);
    let label_px = (7.0 * pt).min(h * 0.08).max(3.0);
    let left = (w * 0.1).max(label_px * 2.5).min(w * 0.3);
    let right = w * 0.96;
    let top = h * 0.05;
    let bottom = (h - label_px * 2.0).min(h * 0.9).max(h * 0.6);
    let stroke = (0.9 * pt).min(w.min(h) / 60.0).max(1.0);
    // Axes.
    c.line(left, top, left, bottom, stroke, BLACK);
    c.line(left, bottom, right, bottom, stroke, BLACK);
    let ticks = rng.gen_range(4..8);
    for i in 0..=ticks {
        let t = i as f32 / ticks as f32;
        let x = left + (right - left) * t;
        c.line(x, bottom, x, bottom + stroke * 3.0, stroke * 0.7, BLACK);
        let y = bottom - (bottom - top) * t;
        c.line(left - stroke * 3.0, y, left, y, stroke * 0.7, BLACK);
        if bottom + label_px * 1.2 < h {
            c.text(font, label_px, x - label_px * 0.3, bottom + label_px * 1.2, &format!("{i}"), BLACK);
        }
        let tag = format!("{}", i * 10);
        let tw = text_width(font, label_px, &tag);
        if left - stroke * 4.0 - tw > 0.0 {
            c.text(font, label_px, left - stroke * 4.0 - tw, y + label_px * 0.35, &tag, BLACK);
        }
    }
    let kind = rng.gen_range(0..3);
    let series = rng.gen_range(1..4);
    let n = rng.gen_range(6..24);
    for s in 0..series {
        let color = PALETTE[(s + rng.gen_range(0..PALETTE.len())) % PALETTE.len()];
        let mut level: f32 = rng.gen_range(0.2..0.8);
        let pts: Vec<(f32, f32)> = (0..n)
            .map(|i| {
                level = (level + rng.gen_range(-0.15..0.15)).clamp(0.05, 0.95);
                let x = left + (right - left) * (i as f32 + 0.5) / n as f32;
                let y = bottom - (bottom - top) * level;
                (x, y)
            })
            .collect();
        match kind {
            0 => {
                for p in pts.windows(2) {
                    c.line(p[0].0, p[0].1, p[1].0, p[1].1, stroke, color);
                }
            }
            1 => {
                for (x, y) in &pts {
                    let r = stroke * 1.8;
                    c.fill_rect(
                        PxRect::new((x - r) as i64, (y - r) as i64, (x + r) as i64, (y + r) as i64),
                        color,
                    );
                }
            }
            _ => {
                let bw = (right - left) / n as f32 / series as f32 * 0.8;
                for (x, y) in &pts {
                    let x0 = x - (right - left) / n as f32 * 0.4 + bw * s as f32;
                    c.fill_rect(
                        PxRect::new(x0 as i64, *y as i64, (x0 + bw) as i64, (bottom - stroke) as i64),
                        color,
                    );
                }
            }
        }
    }
}

const CELL_WORDS: [&str; 12] = [
    "ours", "base", "mean", "std", "time", "acc", "size", "rate", "ACL", "VIS", "CS", "avg",
];

fn draw_table<R: Rng>(c: &mut Canvas, rng: &mut R, font: &ab_glyph::FontArc, pt: f32) {
    let (w, h) = c.size();
    let (wf, hf) = (w as f32, h as f32);
    let margin = (2.0 * pt).min(wf.min(hf) * 0.04);
    let (x0, y0, x1, y1) = (margin, margin, wf - margin, hf - margin);
    let target_rh = rng.gen_range(11.0..16.0) * pt;
    let rows = (((y1 - y0) / target_rh).floor() as usize).clamp(2, 60);
    let target_cw = rng.gen_range(36.0..80.0) * pt;
    let cols = (((x1 - x0) / target_cw).floor() as usize).clamp(2, 14);
    let rh = (y1 - y0) / rows as f32;
    let cw = (x1 - x0) / cols as f32;
    let stroke = (0.6 * pt).max(1.0);
    let full_grid = rng.gen_bool(0.5);
    for r in 0..=rows {
        let y = y0 + rh * r as f32;
        if full_grid || r == 0 || r == 1 || r == rows {
            c.line(x0, y, x1, y, if r == 1 || full_grid { stroke } else { stroke * 1.5 }, BLACK);
        }
    }
    if full_grid {
        for k in 0..=cols {
            let x = x0 + cw * k as f32;
            c.line(x, y0, x, y1, stroke, BLACK);
        }
    }
    let px = (8.5 * pt).min(rh * 0.7).min(cw * 0.3).max(3.0);
    for r in 0..rows {
        for k in 0..cols {
            let cell = if r == 0 || k == 0 {
                CELL_WORDS[rng.gen_range(0..CELL_WORDS.len())].to_string()
            } else {
                format!("{:.2}", rng.gen_range(0.0..100.0))
            };
            let tw = text_width(font, px, &cell);
            let tx = x0 + cw * k as f32 + (cw - tw).max(0.0) / 2.0;
            let baseline = y0 + rh * r as f32 + rh * 0.5 + px * 0.35;
            c.set_clip(PxRect::new(
                (x0 + cw * k as f32) as i64 + 1,
                (y0 + rh * r as f32) as i64 + 1,
                (x0 + cw * (k + 1) as f32) as i64 - 1,
                (y0 + rh * (r + 1) as f32) as i64 - 1,
            ));
            c.text(font, px, tx, baseline, &cell, BLACK);
            c.reset_clip();
        }
    }
}

const CODE_WORDS: [&str; 16] = [
    "for", "each", "if", "then", "else", "return", "while", "do", "node", "edge", "score", "queue",
    "insert", "update", "∈", "←",
];

fn draw_algorithm<R: Rng>(c: &mut Canvas, rng: &mut R, font: &ab_glyph::FontArc, bold: &ab_glyph::FontArc, pt: f32) {
    let (w, h) = c.size();
    let (wf, hf) = (w as f32, h as f32);
    let margin = (2.0 * pt).min(wf.min(hf) * 0.03);
    let stroke = (0.7 * pt).max(1.0);
    let target = rng.gen_range(10.5..13.0) * pt;
    let lines = ((((hf - 2.0 * margin) / target) - 1.6).floor() as usize).max(1);
    let line_h = (hf - 2.0 * margin) / (lines as f32 + 1.6);
    let px = (line_h * 0.72).min(9.5 * pt).min(wf / 12.0).max(3.0);
    c.line(margin, margin, wf - margin, margin, stroke * 1.5, BLACK);
    let header_base = margin + line_h * 0.9;
    let n = rng.gen_range(1..9);
    c.text(bold, px, margin * 2.0, header_base, &format!("Algorithm {n}"), BLACK);
    let rule = margin + line_h * 1.2;
    c.line(margin, rule, wf - margin, rule, stroke, BLACK);
    let mut indent = 0usize;
    let code_right = wf - margin * 2.0;
    for i in 0..lines {
        let base = rule + line_h * (i as f32 + 0.85);
        c.text(font, px * 0.8, margin * 2.0, base, &format!("{}:", i + 1), BLACK);
        let x = margin * 2.0 + px * 2.0 + indent as f32 * px * 1.2;
        let budget = rng.gen_range(0.35..0.95) * (code_right - x);
        let mut words: Vec<&str> = Vec::new();
        loop {
            let word = CODE_WORDS[rng.gen_range(0..CODE_WORDS.len())];
            words.push(word);
            if text_width(font, px, &words.join(" ")) > budget {
                words.pop();
                break;
            }
            if words.len() > 24 {
                break;
            }
        }
        if words.is_empty() {
            words.push(CODE_WORDS[rng.gen_range(0..6)]);
        }
        c.set_clip(PxRect::new(0, 0, code_right as i64, h as i64));
        c.text(font, px, x, base, &words.join(" "), BLACK);
        c.reset_clip();
        indent = match rng.gen_range(0..3) {
            0 => indent.saturating_sub(1),
            1 => (indent + 1).min(4),
            _ => indent,
        };
    }
    c.line(margin, hf - margin, wf - margin, hf - margin, stroke * 1.5, BLACK);
}

const EQ_SYMBOLS: [&str; 22] = [
    "x", "y", "z", "α", "β", "λ", "θ", "σ", "∑", "∫", "∂", "∇", "+", "−", "=", "≤", "×", "(", ")", "·", "²",
    "√",
];

fn draw_equation<R: Rng>(c: &mut Canvas, rng: &mut R, font: &ab_glyph::FontArc, pt: f32) {
    let (w, h) = c.size();
    let (wf, hf) = (w as f32, h as f32);
    let px = (rng.gen_range(10.0..12.0) * pt).min(hf * 0.7).max(3.0);
    let number = format!("({})", rng.gen_range(1..40));
    let nw = text_width(font, px, &number);
    let avail = (wf * 0.96 - nw - px).max(px);
    let target = rng.gen_range(0.35..0.85) * avail;
    let mut expr = String::from("f(x) =");
    loop {
        let next = format!("{expr} {}", EQ_SYMBOLS[rng.gen_range(0..EQ_SYMBOLS.len())]);
        if text_width(font, px, &next) > target || next.chars().count() > 400 {
            break;
        }
        expr = next;
    }
    let ew = text_width(font, px, &expr);
    let baseline = hf * 0.5 + px * 0.35;
    let x = ((avail - ew) / 2.0).max(wf * 0.02);
    c.text(font, px, x, baseline, &expr, BLACK);
    c.text(font, px, wf * 0.98 - nw, baseline, &number, BLACK);
}

/// Scan-like degradation: blur, downsample, upsample, binarize.
pub fn degrade(img: &RgbImage) -> RgbImage {
    let (w, h) = img.dimensions();
    if w < 4 || h < 4 {
        return img.clone();
    }
    let gray: GrayImage = image::DynamicImage::ImageRgb8(img.clone()).to_luma8();
    let blurred = imageops::blur(&gray, 0.8);
    let small = imageops::resize(&blurred, (w / 2).max(1), (h / 2).max(1), imageops::FilterType::Triangle);
    let back = imageops::resize(&small, w, h, imageops::FilterType::Triangle);
    let mut out = RgbImage::new(w, h);
    for (x, y, Luma([v])) in back.enumerate_pixels() {
        let b = if *v < 170 { 0 } else { 255 };
        out.put_pixel(x, y, Rgb([b, b, b]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_table_is_square() {
        let a = procedural_asset(ClassLabel::Table, 1.0, RngSeed::new(1, 2)).unwrap();
        assert_eq!(a.width, a.height);
        let img = a.load_image().unwrap();
        assert_eq!(img.width(), img.height());
    }

    #[test]
    fn procedural_images_are_byte_identical() {
        for class in ClassLabel::VISUAL {
            let a = procedural_image(class, 1.6, RngSeed::new(7, 3));
            let b = procedural_image(class, 1.6, RngSeed::new(7, 3));
            assert_eq!(a.as_raw(), b.as_raw(), "{class}");
        }
    }

    #[test]
    fn aspect_within_ten_percent() {
        for aspect in [0.2, 0.5, 1.0, 1.7, 4.0, 9.0] {
            let a = procedural_asset(ClassLabel::Equation, aspect, RngSeed::new(0, 0)).unwrap();
            assert!((a.aspect() / aspect - 1.0).abs() <= 0.10, "{aspect} -> {}", a.aspect());
        }
    }

    #[test]
    fn text_classes_have_no_procedural_assets() {
        assert!(procedural_asset(ClassLabel::Title, 1.0, RngSeed::new(0, 0)).is_err());
    }

    #[test]
    fn degrade_is_binary() {
        let img = procedural_image(ClassLabel::Figure, 1.3, RngSeed::new(2, 2));
        let d = degrade(&img);
        assert!(d.pixels().all(|p| p.0 == [0, 0, 0] || p.0 == [255, 255, 255]));
    }
}
