//! Normalized page geometry: value ranges and axis-aligned boxes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pairwise intersection area below which two boxes count as disjoint.
pub const OVERLAP_EPS: f64 = 1e-6;

/// A closed real interval, stored on disk as `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl From<[f64; 2]> for Range {
    fn from([min, max]: [f64; 2]) -> Self {
        Range { min, max }
    }
}

impl From<Range> for [f64; 2] {
    fn from(r: Range) -> Self {
        [r.min, r.max]
    }
}

impl Range {
    pub const fn new(min: f64, max: f64) -> Self {
        Range { min, max }
    }

    pub const fn point(v: f64) -> Self {
        Range { min: v, max: v }
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn contains_range(&self, other: &Range) -> bool {
        self.min <= other.min && other.max <= self.max
    }

    pub fn union(&self, other: &Range) -> Range {
        Range::new(self.min.min(other.min), self.max.max(other.max))
    }

    /// Overlap with `[lo, hi]`, or `None` when disjoint.
    pub fn intersect(&self, lo: f64, hi: f64) -> Option<Range> {
        let min = self.min.max(lo);
        let max = self.max.min(hi);
        (min <= max).then_some(Range::new(min, max))
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }

    /// Checks a normalized geometric range: `0 <= min <= max <= 1`.
    pub fn validate_unit(&self, field: &str) -> Result<()> {
        self.validate_ordered(field)?;
        if self.min < 0.0 || self.max > 1.0 {
            return Err(Error::validation(
                field,
                format!("range [{}, {}] outside [0, 1]", self.min, self.max),
            ));
        }
        Ok(())
    }

    pub fn validate_ordered(&self, field: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::validation(field, "non-finite bound"));
        }
        if self.min > self.max {
            return Err(Error::validation(
                field,
                format!("min > max ({} > {})", self.min, self.max),
            ));
        }
        Ok(())
    }
}

/// An inclusive integer interval (element counts, point sizes), stored as `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct CountRange {
    pub min: u32,
    pub max: u32,
}

impl From<[u32; 2]> for CountRange {
    fn from([min, max]: [u32; 2]) -> Self {
        CountRange { min, max }
    }
}

impl From<CountRange> for [u32; 2] {
    fn from(r: CountRange) -> Self {
        [r.min, r.max]
    }
}

impl CountRange {
    pub const fn new(min: u32, max: u32) -> Self {
        CountRange { min, max }
    }

    pub const fn point(v: u32) -> Self {
        CountRange { min: v, max: v }
    }

    pub fn contains(&self, v: u32) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn union(&self, other: &CountRange) -> CountRange {
        CountRange::new(self.min.min(other.min), self.max.max(other.max))
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        if self.min > self.max {
            return Err(Error::validation(
                field,
                format!("min > max ({} > {})", self.min, self.max),
            ));
        }
        Ok(())
    }
}

/// Axis-aligned box with top-left origin. Used both for normalized page
/// fractions and for pixel coordinates; the caller tracks which.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    pub const fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        BBox { x, y, w, h }
    }

    pub fn from_center(cx: f64, cy: f64, w: f64, h: f64) -> Self {
        BBox::new(cx - w / 2.0, cy - h / 2.0, w, h)
    }

    pub fn from_edges(left: f64, top: f64, right: f64, bottom: f64) -> Self {
        BBox::new(left, top, right - left, bottom - top)
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    pub fn area(&self) -> f64 {
        self.w.max(0.0) * self.h.max(0.0)
    }

    pub fn aspect(&self) -> f64 {
        self.w / self.h
    }

    pub fn intersection(&self, other: &BBox) -> Option<BBox> {
        let left = self.x.max(other.x);
        let top = self.y.max(other.y);
        let right = self.right().min(other.right());
        let bottom = self.bottom().min(other.bottom());
        (right > left && bottom > top).then(|| BBox::from_edges(left, top, right, bottom))
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let iw = self.right().min(other.right()) - self.x.max(other.x);
        let ih = self.bottom().min(other.bottom()) - self.y.max(other.y);
        if iw <= 0.0 || ih <= 0.0 {
            0.0
        } else {
            iw * ih
        }
    }

    pub fn overlaps(&self, other: &BBox) -> bool {
        self.intersection_area(other) >= OVERLAP_EPS
    }

    /// Smallest box covering both.
    pub fn union_hull(&self, other: &BBox) -> BBox {
        BBox::from_edges(
            self.x.min(other.x),
            self.y.min(other.y),
            self.right().max(other.right()),
            self.bottom().max(other.bottom()),
        )
    }

    /// Shifts the box into the unit square, shrinking only when it is larger than the page.
    pub fn clamp_to_unit(&self) -> BBox {
        let w = self.w.min(1.0);
        let h = self.h.min(1.0);
        let x = self.x.clamp(0.0, 1.0 - w);
        let y = self.y.clamp(0.0, 1.0 - h);
        BBox::new(x, y, w, h)
    }

    /// True when the box is non-degenerate and lies within the unit page.
    pub fn is_valid_normalized(&self) -> bool {
        const TOL: f64 = 1e-9;
        self.w > 0.0
            && self.h > 0.0
            && self.x >= -TOL
            && self.y >= -TOL
            && self.right() <= 1.0 + TOL
            && self.bottom() <= 1.0 + TOL
    }

    /// Largest box of the given aspect ratio (w/h) centred inside `self`.
    pub fn fit_aspect(&self, aspect: f64) -> BBox {
        if aspect <= 0.0 || !aspect.is_finite() {
            return *self;
        }
        let (cx, cy) = self.center();
        if self.w / self.h > aspect {
            let w = self.h * aspect;
            BBox::from_center(cx, cy, w, self.h)
        } else {
            let h = self.w / aspect;
            BBox::from_center(cx, cy, self.w, h)
        }
    }

    pub fn scale(&self, sx: f64, sy: f64) -> BBox {
        BBox::new(self.x * sx, self.y * sy, self.w * sx, self.h * sy)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x, self.y, self.w, self.h]
    }
}
