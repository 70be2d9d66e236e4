//! Draws concrete page configurations from a style profile.
//!
//! Every scalar is uniform inside its profile range and every discrete
//! choice is uniform over the allowed options.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BBox, CountRange, Range};
use crate::label::ClassLabel;
use crate::rng::{Purpose, RngSeed};
use crate::style::{
    AbstractLayout, CaptionSides, CaptionSpec, DistanceKind, Extent, FontRole, FontSpec, PlacementSpec, Placements,
    StyleProfile,
};

/// Slack allowed when two columns plus spacing exceed the usable width.
pub const COLUMN_FIT_TOLERANCE: f64 = 0.01;
/// Column geometry draws before spacing is clamped.
pub const COLUMN_RESAMPLE_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PageKind {
    Title,
    Inner,
}

/// Text block edges: `top`/`bottom` are y positions, `left`/`right` x positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageMargins {
    pub top: f64,
    pub bottom: f64,
    pub left: f64,
    pub right: f64,
}

impl PageMargins {
    pub fn usable_width(&self) -> f64 {
        self.right - self.left
    }

    pub fn usable_height(&self) -> f64 {
        self.bottom - self.top
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolvedFont {
    pub spec: FontSpec,
    pub size_pt: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageConfig {
    pub page_kind: PageKind,
    pub margins: PageMargins,
    pub column_width: f64,
    pub column_spacing: f64,
    /// Regular (non-mini) element counts for the four visual classes.
    pub element_counts: BTreeMap<ClassLabel, u32>,
    /// Mini (inline) figure and table counts.
    pub mini_counts: BTreeMap<ClassLabel, u32>,
    pub fonts: BTreeMap<FontRole, ResolvedFont>,
    pub distances: BTreeMap<DistanceKind, f64>,
    pub abstract_layout: AbstractLayout,
    pub keywords_line: bool,
    pub keywords_label: Option<String>,
    /// True when the column spacing had to be clamped to fit.
    pub spacing_clamped: bool,
    /// Placement envelopes carried over from the profile for composition.
    pub placements: Placements,
    pub caption: CaptionSpec,
    pub caption_sides: CaptionSides,
    /// Extent of the chosen abstract layout.
    pub abstract_extent: Extent,
}

impl PageConfig {
    pub fn distance(&self, kind: DistanceKind) -> f64 {
        self.distances.get(&kind).copied().unwrap_or(0.0)
    }

    pub fn font(&self, role: FontRole) -> Option<&ResolvedFont> {
        self.fonts.get(&role)
    }

    pub fn count(&self, label: ClassLabel) -> u32 {
        self.element_counts.get(&label).copied().unwrap_or(0)
    }

    pub fn mini_count(&self, label: ClassLabel) -> u32 {
        self.mini_counts.get(&label).copied().unwrap_or(0)
    }

    /// Left x of each column.
    pub fn column_lefts(&self) -> [f64; 2] {
        let l = self.margins.left;
        [l, l + self.column_width + self.column_spacing]
    }

    pub fn column_boxes(&self) -> [BBox; 2] {
        let [a, b] = self.column_lefts();
        let h = self.margins.usable_height();
        [
            BBox::new(a, self.margins.top, self.column_width, h),
            BBox::new(b, self.margins.top, self.column_width, h),
        ]
    }
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, r: &Range) -> f64 {
    if r.max <= r.min {
        r.min
    } else {
        rng.gen_range(r.min..=r.max)
    }
}

pub fn uniform_count<R: Rng + ?Sized>(rng: &mut R, r: &CountRange) -> u32 {
    if r.max <= r.min {
        r.min
    } else {
        rng.gen_range(r.min..=r.max)
    }
}

fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> Option<&'a T> {
    items.choose(rng)
}

pub fn sample_page_kind<R: Rng + ?Sized>(rng: &mut R, profile: &StyleProfile) -> PageKind {
    if rng.gen_bool(profile.page_types.title_fraction().clamp(0.0, 1.0)) {
        PageKind::Title
    } else {
        PageKind::Inner
    }
}

/// Draws a page configuration; the page kind follows the profile's title/inner mix.
pub fn sample_page_config(profile: &StyleProfile, seed: RngSeed) -> Result<PageConfig> {
    let mut rng = seed.rng(Purpose::PageConfig);
    let kind = sample_page_kind(&mut rng, profile);
    sample_config_inner(profile, &mut rng, kind)
}

/// Same as [`sample_page_config`] with the page kind forced.
pub fn sample_page_config_as(profile: &StyleProfile, seed: RngSeed, kind: PageKind) -> Result<PageConfig> {
    let mut rng = seed.rng(Purpose::PageConfig);
    // Burn the page-kind draw so forced and free configs share the rest of the stream.
    let _ = sample_page_kind(&mut rng, profile);
    sample_config_inner(profile, &mut rng, kind)
}

fn sample_config_inner<R: Rng + ?Sized>(profile: &StyleProfile, rng: &mut R, page_kind: PageKind) -> Result<PageConfig> {
    let (margins, column_width, column_spacing, spacing_clamped) = sample_columns(profile, rng)?;

    let c = &profile.counts;
    let mut element_counts = BTreeMap::new();
    element_counts.insert(ClassLabel::Figure, uniform_count(rng, &c.figure));
    element_counts.insert(ClassLabel::Table, uniform_count(rng, &c.table));
    element_counts.insert(ClassLabel::Algorithm, uniform_count(rng, &c.algorithm));
    element_counts.insert(ClassLabel::Equation, uniform_count(rng, &c.equation));
    let mut mini_counts = BTreeMap::new();
    mini_counts.insert(ClassLabel::Figure, uniform_count(rng, &c.mini_figure));
    mini_counts.insert(ClassLabel::Table, uniform_count(rng, &c.mini_table));

    let mut fonts = BTreeMap::new();
    for role in crate::style::FontRole::ALL {
        if let Some(spec) = pick(rng, profile.fonts_for(role)) {
            let size_pt = uniform_count(rng, &spec.size_pt);
            fonts.insert(
                role,
                ResolvedFont {
                    spec: spec.clone(),
                    size_pt,
                },
            );
        }
    }

    let mut distances = BTreeMap::new();
    for kind in DistanceKind::ALL {
        distances.insert(kind, uniform(rng, profile.distances.get(kind)));
    }

    let layouts = profile.abstract_layouts();
    let abstract_layout = *pick(rng, &layouts)
        .ok_or_else(|| Error::validation("abstract", "no abstract layout defined"))?;
    let abstract_extent = profile
        .abstract_spec
        .extent(abstract_layout)
        .cloned()
        .expect("layout drawn from defined extents");
    let keywords_line = *pick(rng, &profile.keywords_line).unwrap_or(&false);
    let keywords_label = if keywords_line {
        pick(rng, &profile.keywords_labels).cloned()
    } else {
        None
    };

    Ok(PageConfig {
        page_kind,
        margins,
        column_width,
        column_spacing,
        element_counts,
        mini_counts,
        fonts,
        distances,
        abstract_layout,
        keywords_line,
        keywords_label,
        spacing_clamped,
        placements: profile.placements.clone(),
        caption: profile.caption.clone(),
        caption_sides: profile.caption_sides.clone(),
        abstract_extent,
    })
}

/// Margins and columns; resamples until two columns fit, then clamps spacing.
fn sample_columns<R: Rng + ?Sized>(profile: &StyleProfile, rng: &mut R) -> Result<(PageMargins, f64, f64, bool)> {
    let m = &profile.margins;
    let mut last = None;
    for _ in 0..COLUMN_RESAMPLE_LIMIT {
        let margins = PageMargins {
            top: uniform(rng, &m.top),
            bottom: uniform(rng, &m.bottom),
            left: uniform(rng, &m.left),
            right: uniform(rng, &m.right),
        };
        let width = uniform(rng, &profile.column_width);
        let spacing = uniform(rng, &profile.column_spacing);
        if fits(&margins, width, spacing) {
            return Ok((margins, width, spacing, false));
        }
        last = Some((margins, width));
    }
    let (margins, width) = last.expect("resample limit is positive");
    let spacing = margins.usable_width() + COLUMN_FIT_TOLERANCE - 2.0 * width;
    let spacing = spacing.min(profile.column_spacing.max);
    if spacing < profile.column_spacing.min || !fits(&margins, width, spacing) {
        return Err(Error::UnsatisfiableGeometry(format!(
            "two columns of width {width:.4} do not fit between x={:.4} and x={:.4} \
             with spacing >= {:.4}",
            margins.left, margins.right, profile.column_spacing.min
        )));
    }
    Ok((margins, width, spacing, true))
}

fn fits(m: &PageMargins, width: f64, spacing: f64) -> bool {
    m.bottom > m.top
        && m.right > m.left
        && 2.0 * width + spacing <= m.usable_width() + COLUMN_FIT_TOLERANCE + 1e-12
        && m.left + 2.0 * width + spacing <= 1.0
}

/// Draws a box whose extent and centre lie in the spec's ranges, then clamps to the page.
///
/// The centre is drawn from the part of its range that keeps the box on the
/// page; only when that part is empty does clamping move the centre.
pub fn sample_placement_with<R: Rng + ?Sized>(spec: &PlacementSpec, rng: &mut R) -> BBox {
    let w = uniform(rng, &spec.width);
    let h = uniform(rng, &spec.height);
    let cx = match spec.center_x.intersect(w / 2.0, 1.0 - w / 2.0) {
        Some(r) => uniform(rng, &r),
        None => uniform(rng, &spec.center_x),
    };
    let cy = match spec.center_y.intersect(h / 2.0, 1.0 - h / 2.0) {
        Some(r) => uniform(rng, &r),
        None => uniform(rng, &spec.center_y),
    };
    BBox::from_center(cx, cy, w, h).clamp_to_unit()
}

pub fn sample_placement(spec: &PlacementSpec, seed: RngSeed) -> BBox {
    let mut rng = seed.rng(Purpose::Compose);
    sample_placement_with(spec, &mut rng)
}
