//! Minimal clipped drawing on RGB images: rectangles, lines and glyph runs.

use ab_glyph::{Font, FontArc, Glyph, PxScale, ScaleFont};
use image::{Rgb, RgbImage};

pub const BLACK: Rgb<u8> = Rgb([0, 0, 0]);
pub const WHITE: Rgb<u8> = Rgb([255, 255, 255]);

/// Pixel rectangle `[x0, x1) × [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PxRect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl PxRect {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        PxRect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> i64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0
    }

    pub fn intersect(&self, o: &PxRect) -> PxRect {
        PxRect::new(self.x0.max(o.x0), self.y0.max(o.y0), self.x1.min(o.x1), self.y1.min(o.y1))
    }

    pub fn is_empty(&self) -> bool {
        self.x1 <= self.x0 || self.y1 <= self.y0
    }
}

pub struct Canvas<'a> {
    img: &'a mut RgbImage,
    clip: PxRect,
    pub antialias: bool,
}

impl<'a> Canvas<'a> {
    pub fn new(img: &'a mut RgbImage) -> Self {
        let clip = PxRect::new(0, 0, img.width() as i64, img.height() as i64);
        Canvas {
            img,
            clip,
            antialias: true,
        }
    }

    pub fn size(&self) -> (u32, u32) {
        self.img.dimensions()
    }

    /// Restricts drawing to `rect` (intersected with the image).
    pub fn set_clip(&mut self, rect: PxRect) {
        let full = PxRect::new(0, 0, self.img.width() as i64, self.img.height() as i64);
        self.clip = rect.intersect(&full);
    }

    pub fn reset_clip(&mut self) {
        self.clip = PxRect::new(0, 0, self.img.width() as i64, self.img.height() as i64);
    }

    pub fn clip(&self) -> PxRect {
        self.clip
    }

    fn in_clip(&self, x: i64, y: i64) -> bool {
        x >= self.clip.x0 && x < self.clip.x1 && y >= self.clip.y0 && y < self.clip.y1
    }

    pub fn blend(&mut self, x: i64, y: i64, color: Rgb<u8>, alpha: f32) {
        if !self.in_clip(x, y) {
            return;
        }
        let a = if self.antialias {
            alpha.clamp(0.0, 1.0)
        } else if alpha >= 0.5 {
            1.0
        } else {
            0.0
        };
        if a <= 0.0 {
            return;
        }
        let p = self.img.get_pixel_mut(x as u32, y as u32);
        for c in 0..3 {
            let v = p.0[c] as f32 * (1.0 - a) + color.0[c] as f32 * a;
            p.0[c] = v.round() as u8;
        }
    }

    pub fn fill_rect(&mut self, rect: PxRect, color: Rgb<u8>) {
        let r = rect.intersect(&self.clip);
        for y in r.y0..r.y1.max(r.y0) {
            for x in r.x0..r.x1.max(r.x0) {
                self.img.put_pixel(x as u32, y as u32, color);
            }
        }
    }

    /// Axis-aligned or diagonal line of the given thickness.
    pub fn line(&mut self, x0: f32, y0: f32, x1: f32, y1: f32, thickness: f32, color: Rgb<u8>) {
        let dx = x1 - x0;
        let dy = y1 - y0;
        let len = (dx * dx + dy * dy).sqrt();
        let steps = (len.ceil() as usize).max(1) * 2;
        let half = (thickness / 2.0).max(0.5);
        let r = half.ceil() as i64;
        let mut last = (i64::MIN, i64::MIN);
        for i in 0..=steps {
            let t = i as f32 / steps as f32;
            let cx = x0 + dx * t;
            let cy = y0 + dy * t;
            let key = (cx.round() as i64, cy.round() as i64);
            if key == last {
                continue;
            }
            last = key;
            for oy in -r..=r {
                for ox in -r..=r {
                    let px = key.0 + ox;
                    let py = key.1 + oy;
                    let d = (((px as f32 - cx).powi(2) + (py as f32 - cy).powi(2)).sqrt() - half).max(0.0);
                    if d < 1.0 {
                        self.blend(px, py, color, 1.0 - d);
                    }
                }
            }
        }
    }

    pub fn stroke_rect(&mut self, rect: PxRect, thickness: i64, color: Rgb<u8>) {
        let t = thickness.max(1);
        self.fill_rect(PxRect::new(rect.x0, rect.y0, rect.x1, rect.y0 + t), color);
        self.fill_rect(PxRect::new(rect.x0, rect.y1 - t, rect.x1, rect.y1), color);
        self.fill_rect(PxRect::new(rect.x0, rect.y0, rect.x0 + t, rect.y1), color);
        self.fill_rect(PxRect::new(rect.x1 - t, rect.y0, rect.x1, rect.y1), color);
    }

    /// Draws `text` with its baseline at `baseline`; returns the advance width.
    pub fn text(&mut self, font: &FontArc, px: f32, x: f32, baseline: f32, text: &str, color: Rgb<u8>) -> f32 {
        let scaled = font.as_scaled(PxScale::from(px));
        let mut caret = x;
        let mut prev = None;
        for ch in text.chars() {
            let id = scaled.glyph_id(ch);
            if let Some(p) = prev {
                caret += scaled.kern(p, id);
            }
            let glyph: Glyph = id.with_scale_and_position(PxScale::from(px), ab_glyph::point(caret, baseline));
            if let Some(outlined) = font.outline_glyph(glyph) {
                let b = outlined.px_bounds();
                outlined.draw(|gx, gy, cov| {
                    self.blend(b.min.x as i64 + gx as i64, b.min.y as i64 + gy as i64, color, cov);
                });
            }
            caret += scaled.h_advance(id);
            prev = Some(id);
        }
        caret - x
    }

    pub fn blit(&mut self, src: &RgbImage, x0: i64, y0: i64) {
        for (sx, sy, p) in src.enumerate_pixels() {
            let x = x0 + sx as i64;
            let y = y0 + sy as i64;
            if self.in_clip(x, y) {
                self.img.put_pixel(x as u32, y as u32, *p);
            }
        }
    }
}

pub fn text_width(font: &FontArc, px: f32, text: &str) -> f32 {
    let scaled = font.as_scaled(PxScale::from(px));
    let mut w = 0.0;
    let mut prev = None;
    for ch in text.chars() {
        let id = scaled.glyph_id(ch);
        if let Some(p) = prev {
            w += scaled.kern(p, id);
        }
        w += scaled.h_advance(id);
        prev = Some(id);
    }
    w
}

/// Ascent in pixels at the given size.
pub fn ascent(font: &FontArc, px: f32) -> f32 {
    font.as_scaled(PxScale::from(px)).ascent()
}
