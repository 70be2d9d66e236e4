//! Page composition: places visual elements and captions, stacks the title
//! block on title pages, and fills residual column space with body text.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::assets::{AssetPool, AssetRef};
use crate::error::{Error, Result};
use crate::geom::{BBox, Range};
use crate::label::ClassLabel;
use crate::rng::{Purpose, RngSeed};
use crate::sampler::{sample_placement_with, uniform, PageConfig, PageKind};
use crate::style::{AbstractLayout, CaptionSide, DistanceKind, FontRole, PlacementSpec, Slot};
use crate::textgen::{TextBlock, TextRole, TextSource};

/// Page size in points (US Letter).
pub const PAGE_WIDTH_PT: f64 = 612.0;
pub const PAGE_HEIGHT_PT: f64 = 792.0;
/// Baseline-to-baseline distance as a multiple of the font size.
pub const LINE_SPACING: f64 = 1.2;
/// Rejection attempts per element before it is dropped.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 50;
/// Title and author boxes start above this fraction of the page height.
pub const TITLE_ZONE: f64 = 0.30;

const MAX_TITLE_LINES: f64 = 3.0;
const MAX_CAPTION_LINES: f64 = 8.0;
const MIN_CAPTION_WIDTH: f64 = 0.1;
const TEASER_MAX_HEIGHT: f64 = 0.35;

/// Normalized height of one text line at `size_pt`.
pub fn line_height(size_pt: u32) -> f64 {
    size_pt as f64 * LINE_SPACING / PAGE_HEIGHT_PT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposeOptions {
    pub max_attempts: usize,
    /// Probability that a figure, table or algorithm gets a caption.
    pub caption_rate: f64,
    /// Probability that a title page carries a full-width teaser figure.
    pub teaser_rate: f64,
    /// Probability that a body-text block opens with a section heading.
    pub heading_rate: f64,
    /// Page width over height, used to shape procedural assets.
    pub page_aspect: f64,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions {
            max_attempts: MAX_PLACEMENT_ATTEMPTS,
            caption_rate: 0.85,
            teaser_rate: 0.10,
            heading_rate: 0.35,
            page_aspect: PAGE_WIDTH_PT / PAGE_HEIGHT_PT,
        }
    }
}

/// Physical long side of a normalized box on the page, in points.
fn long_side_pt(b: &BBox) -> f64 {
    (b.w * PAGE_WIDTH_PT).max(b.h * PAGE_HEIGHT_PT)
}

/// Lead-in text drawn in its own font, e.g. "Figure 3:" or "Keywords:".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lead {
    pub font: FontRole,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub font: FontRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lead: Option<Lead>,
    pub block: TextBlock,
}

impl Paragraph {
    fn new(font: FontRole, block: TextBlock) -> Self {
        Paragraph { font, lead: None, block }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContentRef {
    Asset(AssetRef),
    Text(Vec<Paragraph>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedElement {
    /// Position in reading order.
    pub id: u32,
    pub label: ClassLabel,
    pub bbox: BBox,
    pub content: ContentRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<Slot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linked_caption: Option<u32>,
    /// For captions: the element captioned.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linked_element: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedElement {
    pub label: ClassLabel,
    pub slot: Slot,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageLayout {
    pub page_id: u64,
    pub seed: RngSeed,
    pub page_kind: PageKind,
    pub config: PageConfig,
    pub columns: [BBox; 2],
    pub elements: Vec<PlacedElement>,
    pub dropped: Vec<DroppedElement>,
    pub teaser: bool,
}

impl PageLayout {
    pub fn count(&self, label: ClassLabel) -> usize {
        self.elements.iter().filter(|e| e.label == label).count()
    }

    pub fn of_class(&self, label: ClassLabel) -> impl Iterator<Item = &PlacedElement> {
        self.elements.iter().filter(move |e| e.label == label)
    }

    pub fn get(&self, id: u32) -> Option<&PlacedElement> {
        self.elements.iter().find(|e| e.id == id)
    }

    /// Vertical gap between a caption and the element it describes.
    pub fn caption_gap(&self, caption: &PlacedElement) -> Option<f64> {
        let target = self.get(caption.linked_element?)?;
        let (c, t) = (&caption.bbox, &target.bbox);
        Some(if c.y >= t.bottom() - 1e-12 {
            c.y - t.bottom()
        } else {
            t.y - c.bottom()
        })
    }
}

/// Tries `candidate`, then up to `max_attempts - 1` resampled boxes, returning
/// the first that overlaps none of `boxes`.
pub fn place_nonoverlapping<F>(boxes: &[BBox], candidate: BBox, max_attempts: usize, mut resample: F) -> Option<BBox>
where
    F: FnMut(&BBox) -> BBox,
{
    let mut cur = candidate;
    for attempt in 0..max_attempts {
        if attempt > 0 {
            cur = resample(&cur);
        }
        if !boxes.iter().any(|b| b.overlaps(&cur)) {
            return Some(cur);
        }
    }
    None
}

/// Composes one page with default options.
pub fn compose_page(config: &PageConfig, assets: &AssetPool, text: &TextSource, seed: RngSeed) -> Result<PageLayout> {
    compose_page_with(config, assets, text, seed, &ComposeOptions::default())
}

pub fn compose_page_with(
    config: &PageConfig,
    assets: &AssetPool,
    text: &TextSource,
    seed: RngSeed,
    opts: &ComposeOptions,
) -> Result<PageLayout> {
    let mut c = Composer {
        config,
        assets,
        text,
        seed,
        opts,
        rng: seed.rng(Purpose::Compose),
        elements: Vec::new(),
        reserved: Vec::new(),
        dropped: Vec::new(),
        counter: 0,
        teaser: false,
    };
    if config.page_kind == PageKind::Title {
        c.title_block()?;
    }
    c.visual_elements()?;
    let Composer {
        elements,
        dropped,
        teaser,
        ..
    } = c;
    let layout = PageLayout {
        page_id: seed.stream_id,
        seed,
        page_kind: config.page_kind,
        config: config.clone(),
        columns: config.column_boxes(),
        elements,
        dropped,
        teaser,
    };
    Ok(fill_body_text(layout, text))
}

struct Composer<'a> {
    config: &'a PageConfig,
    assets: &'a AssetPool,
    text: &'a TextSource,
    seed: RngSeed,
    opts: &'a ComposeOptions,
    rng: rand_chacha::ChaCha8Rng,
    elements: Vec<PlacedElement>,
    /// Regions visual elements must avoid besides placed elements.
    reserved: Vec<BBox>,
    dropped: Vec<DroppedElement>,
    counter: u64,
    teaser: bool,
}

/// A visual element with its optional caption, before acceptance.
struct Candidate {
    bbox: BBox,
    caption: Option<BBox>,
}

impl Candidate {
    fn boxes(&self) -> impl Iterator<Item = &BBox> {
        std::iter::once(&self.bbox).chain(self.caption.iter())
    }
}

impl Composer<'_> {
    fn next_seed(&mut self) -> RngSeed {
        self.counter += 1;
        self.seed.child(self.counter)
    }

    fn font_size(&self, role: FontRole) -> u32 {
        self.config
            .font(role)
            .or_else(|| self.config.font(FontRole::Body))
            .map_or(10, |f| f.size_pt)
    }

    fn text_block(&mut self, role: TextRole, approx: usize) -> Result<TextBlock> {
        let seed = self.next_seed();
        self.text.pseudo_text(role, approx.max(1), seed)
    }

    fn push(&mut self, label: ClassLabel, bbox: BBox, content: ContentRef, slot: Option<Slot>) -> u32 {
        let id = self.elements.len() as u32;
        self.elements.push(PlacedElement {
            id,
            label,
            bbox,
            content,
            slot,
            linked_caption: None,
            linked_element: None,
        });
        id
    }

    fn occupied(&self) -> Vec<BBox> {
        self.elements
            .iter()
            .map(|e| e.bbox)
            .chain(self.reserved.iter().copied())
            .collect()
    }

    fn column_block(&self) -> (f64, f64) {
        let cfg = self.config;
        (cfg.margins.left, 2.0 * cfg.column_width + cfg.column_spacing)
    }

    /// Title, author block, optional teaser and abstract, stacked top-down.
    fn title_block(&mut self) -> Result<()> {
        let cfg = self.config;
        let title_specs = cfg.placements.title.clone();
        let author_specs = cfg.placements.author.clone();
        let title_spec = title_specs
            .choose(&mut self.rng)
            .cloned()
            .ok_or_else(|| Error::ComposeFailure("no title placement".into()))?;
        let author_spec = author_specs
            .choose(&mut self.rng)
            .cloned()
            .ok_or_else(|| Error::ComposeFailure("no author placement".into()))?;
        let lh_title = line_height(self.font_size(FontRole::Title));
        let lh_author = line_height(self.font_size(FontRole::Author));
        let lh_abs = line_height(self.font_size(FontRole::AbstractText));
        let lh_head = line_height(self.font_size(FontRole::AbstractHeader));
        let abs_min = lh_head + 2.0 * lh_abs;

        let title_top = cfg.margins.top + cfg.distance(DistanceKind::HeaderTitle);
        let gap_ta = cfg.distance(DistanceKind::TitleAuthor);
        let gap_aa = cfg.distance(DistanceKind::AuthorAbstract);

        let mut chosen = None;
        for attempt in 0..=self.opts.max_attempts {
            let minimal = attempt == self.opts.max_attempts;
            let title_lines = if minimal {
                1.0
            } else {
                snap_lines(uniform(&mut self.rng, &title_spec.height), lh_title).min(MAX_TITLE_LINES)
            };
            let authors = if minimal {
                1.0
            } else {
                snap_lines(uniform(&mut self.rng, &author_spec.height), lh_author).min(12.0)
            };
            let title = centered_box(
                uniform(&mut self.rng, &title_spec.center_x),
                title_top,
                uniform(&mut self.rng, &title_spec.width),
                title_lines * lh_title,
            );
            let author = centered_box(
                uniform(&mut self.rng, &author_spec.center_x),
                title.bottom() + gap_ta,
                uniform(&mut self.rng, &author_spec.width),
                authors * lh_author,
            );
            let below = author.bottom() + gap_aa;
            if title.y < TITLE_ZONE
                && author.y < TITLE_ZONE
                && author.bottom() <= 1.0
                && below + abs_min <= cfg.margins.bottom
            {
                chosen = Some((title, author, authors as usize));
                break;
            }
        }
        let (title, author, authors) = chosen.ok_or_else(|| {
            Error::ComposeFailure(format!(
                "title block does not fit above y={TITLE_ZONE} with top margin {:.3}",
                cfg.margins.top
            ))
        })?;

        let tokens = approx_tokens(&title, self.font_size(FontRole::Title)).clamp(2, 18);
        let title_text = self.text_block(TextRole::Title, tokens)?;
        self.push(
            ClassLabel::Title,
            title,
            ContentRef::Text(vec![Paragraph::new(FontRole::Title, title_text)]),
            None,
        );
        let upper = cfg
            .font(FontRole::Author)
            .is_some_and(|f| f.spec.caps == crate::style::Caps::AllCaps);
        let seed = self.next_seed();
        let author_text = self.text.author_lines(authors.clamp(1, 12), upper, seed)?;
        self.push(
            ClassLabel::Author,
            author,
            ContentRef::Text(vec![Paragraph::new(FontRole::Author, author_text)]),
            None,
        );

        let (block_x, block_w) = self.column_block();
        let hull_left = title.x.min(author.x).min(block_x);
        let hull_right = title.right().max(author.right()).max(block_x + block_w);
        self.reserved
            .push(BBox::from_edges(hull_left, 0.0, hull_right, author.bottom() + gap_aa));

        let mut abstract_top = author.bottom() + gap_aa;
        if self.rng.gen_bool(self.opts.teaser_rate.clamp(0.0, 1.0)) {
            if let Some(next_top) = self.teaser(abstract_top, abs_min)? {
                abstract_top = next_top;
            }
        }
        self.abstract_box(abstract_top, lh_head, lh_abs)
    }

    /// Full-width figure between the author block and the abstract.
    fn teaser(&mut self, top: f64, abs_min: f64) -> Result<Option<f64>> {
        let cfg = self.config;
        let Some(spec) = cfg.placements.figure.iter().find(|s| s.slot == Slot::Center).cloned() else {
            return Ok(None);
        };
        let (block_x, block_w) = self.column_block();
        let w = spec.width.clamp(block_w);
        let h = uniform(&mut self.rng, &spec.height).min(TEASER_MAX_HEIGHT);
        let bbox = BBox::new(block_x + (block_w - w) / 2.0, top, w, h);
        let (cx, cy) = bbox.center();
        let in_ranges = cfg.placements.figure.iter().any(|s| s.contains_center(cx, cy));
        if !in_ranges || !bbox.is_valid_normalized() {
            return Ok(None);
        }
        let seed = self.next_seed();
        let asset = self
            .assets
            .checkout_sized(ClassLabel::Figure, bbox.aspect() * self.opts.page_aspect, long_side_pt(&bbox), seed)?;
        let bbox = bbox.fit_aspect(asset.aspect() / self.opts.page_aspect);
        let captioned = !cfg.caption_sides.figure.is_empty()
            && self.rng.gen_bool(self.opts.caption_rate.clamp(0.0, 1.0));
        let caption = if captioned {
            match self.caption_box(&bbox, CaptionSide::Below) {
                Some(c) => Some(c),
                None => return Ok(None),
            }
        } else {
            None
        };
        let bottom = caption.map_or(bbox.bottom(), |c| c.bottom());
        let next_top = bottom + cfg.distance(DistanceKind::ImageText);
        if next_top + abs_min > cfg.margins.bottom {
            return Ok(None);
        }
        let cand = Candidate { bbox, caption };
        self.accept(ClassLabel::Figure, Slot::Center, cand, asset)?;
        self.teaser = true;
        Ok(Some(next_top))
    }

    fn abstract_box(&mut self, top: f64, lh_head: f64, lh_abs: f64) -> Result<()> {
        let cfg = self.config;
        let extent = cfg.abstract_extent.clone();
        let w = uniform(&mut self.rng, &extent.width);
        let h = uniform(&mut self.rng, &extent.height);
        let bbox = match cfg.abstract_layout {
            AbstractLayout::LeftColumn => {
                BBox::new(cfg.margins.left, top, w.min(cfg.column_width), 0.0)
            }
            AbstractLayout::TwoColumn => {
                let (bx, bw) = self.column_block();
                let w = w.min(bw);
                BBox::new(bx + (bw - w) / 2.0, top, w, 0.0)
            }
        };
        let h = h.min(cfg.margins.bottom - top).max(lh_head + 2.0 * lh_abs);
        let bbox = BBox { h, ..bbox };

        let mut paragraphs = Vec::new();
        let header = TextBlock {
            role: TextRole::Abstract,
            tokens: vec!["Abstract".to_string()],
            breaks: Vec::new(),
            target_line_count: 1,
        };
        paragraphs.push(Paragraph::new(FontRole::AbstractHeader, header));
        let kw_lines = if cfg.keywords_line { 2.0 } else { 0.0 };
        let body_h = (h - lh_head - kw_lines * lh_abs).max(lh_abs);
        let tokens = approx_tokens(&BBox { h: body_h, ..bbox }, self.font_size(FontRole::AbstractText));
        let body = self.text_block(TextRole::Abstract, tokens)?;
        paragraphs.push(Paragraph::new(FontRole::AbstractText, body));
        if cfg.keywords_line {
            let n = self.rng.gen_range(3..7);
            let kw = self.text_block(TextRole::Keywords, n)?;
            let font = if cfg.font(FontRole::Keywords).is_some() {
                FontRole::Keywords
            } else {
                FontRole::AbstractText
            };
            let label = cfg.keywords_label.clone().unwrap_or_else(|| "Keywords".into());
            paragraphs.push(Paragraph {
                font: FontRole::AbstractText,
                lead: Some(Lead {
                    font,
                    text: format!("{label}:"),
                }),
                block: kw,
            });
        }
        self.push(ClassLabel::Abstract, bbox, ContentRef::Text(paragraphs), None);
        let gap = cfg.distance(DistanceKind::AbstractText);
        self.reserved
            .push(BBox::new(bbox.x, bbox.y, bbox.w, (bbox.h + gap).min(1.0 - bbox.y)));
        Ok(())
    }

    /// Caption box on `side` of `element`, or `None` when it leaves the page.
    fn caption_box(&mut self, element: &BBox, side: CaptionSide) -> Option<BBox> {
        let cfg = self.config;
        let lh = line_height(self.font_size(FontRole::Caption));
        let h_range = cfg
            .caption
            .height
            .intersect(lh, MAX_CAPTION_LINES * lh)
            .unwrap_or(Range::point(lh));
        let h = snap_lines(uniform(&mut self.rng, &h_range), lh) * lh;
        let bound = element.w.max(cfg.column_width).min(1.0);
        let w = uniform(&mut self.rng, &cfg.caption.width).clamp(MIN_CAPTION_WIDTH.min(bound), bound);
        let gap = cfg.distance(DistanceKind::ImageCaption);
        let y = match side {
            CaptionSide::Below => element.bottom() + gap,
            CaptionSide::Above => element.y - gap - h,
        };
        let (cx, _) = element.center();
        let x = (cx - w / 2.0).clamp(0.0, 1.0 - w);
        let b = BBox::new(x, y, w, h);
        b.is_valid_normalized().then_some(b)
    }

    fn sample_candidate(
        &mut self,
        spec: &PlacementSpec,
        aspect: Option<f64>,
        captioned: Option<CaptionSide>,
    ) -> Option<Candidate> {
        let raw = sample_placement_with(spec, &mut self.rng);
        let (cx, cy) = raw.center();
        if !spec.contains_center(cx, cy) {
            return None;
        }
        let bbox = match aspect {
            Some(a) => raw.fit_aspect(a / self.opts.page_aspect),
            None => raw,
        };
        if !bbox.is_valid_normalized() {
            return None;
        }
        let caption = match captioned {
            Some(side) => Some(self.caption_box(&bbox, side)?),
            None => None,
        };
        Some(Candidate { bbox, caption })
    }

    fn visual_elements(&mut self) -> Result<()> {
        let cfg = self.config;
        struct Request {
            label: ClassLabel,
            spec: PlacementSpec,
            area: f64,
        }
        let mut requests = Vec::new();
        for label in ClassLabel::VISUAL {
            let specs = cfg.placements.for_class(label);
            let regular: Vec<&PlacementSpec> = specs.iter().filter(|s| s.slot != Slot::Mini).collect();
            let mini: Vec<&PlacementSpec> = specs.iter().filter(|s| s.slot == Slot::Mini).collect();
            for (n, pool) in [(cfg.count(label), &regular), (cfg.mini_count(label), &mini)] {
                for _ in 0..n {
                    let Some(spec) = pool.choose(&mut self.rng) else {
                        self.dropped.push(DroppedElement {
                            label,
                            slot: Slot::Mini,
                            reason: "no placement slot".into(),
                        });
                        continue;
                    };
                    let w = uniform(&mut self.rng, &spec.width);
                    let h = uniform(&mut self.rng, &spec.height);
                    requests.push(Request {
                        label,
                        spec: (*spec).clone(),
                        area: w * h,
                    });
                }
            }
        }
        requests.sort_by(|a, b| b.area.total_cmp(&a.area));

        for req in requests {
            let side = if req.label == ClassLabel::Equation {
                None
            } else {
                let sides = cfg.caption_sides.for_class(req.label);
                let on = self.rng.gen_bool(self.opts.caption_rate.clamp(0.0, 1.0));
                if on {
                    sides.choose(&mut self.rng).copied()
                } else {
                    None
                }
            };
            let seed = self.next_seed();
            let external = if self.assets.is_external(req.label) {
                Some(self.assets.checkout(req.label, 1.0, seed)?)
            } else if self.assets.can_supply(req.label) {
                None
            } else {
                return Err(Error::EmptyAssetClass(req.label));
            };
            let aspect = external.as_ref().map(|a| a.aspect());
            let occupied = self.occupied();
            let mut placed = None;
            for _ in 0..self.opts.max_attempts {
                let Some(cand) = self.sample_candidate(&req.spec, aspect, side) else {
                    continue;
                };
                if cand.boxes().all(|b| !occupied.iter().any(|o| o.overlaps(b))) {
                    placed = Some(cand);
                    break;
                }
            }
            let Some(cand) = placed else {
                self.dropped.push(DroppedElement {
                    label: req.label,
                    slot: req.spec.slot,
                    reason: format!("no free position after {} attempts", self.opts.max_attempts),
                });
                continue;
            };
            let asset = match external {
                Some(a) => a,
                None => self
                    .assets
                    .checkout_sized(req.label, cand.bbox.aspect() * self.opts.page_aspect, long_side_pt(&cand.bbox), seed)?,
            };
            self.accept(req.label, req.spec.slot, cand, asset)?;
        }
        Ok(())
    }

    fn accept(&mut self, label: ClassLabel, slot: Slot, cand: Candidate, asset: AssetRef) -> Result<()> {
        let id = self.push(label, cand.bbox, ContentRef::Asset(asset), Some(slot));
        if let Some(cap) = cand.caption {
            let number = self.rng.gen_range(1..=12);
            let kind = match label {
                ClassLabel::Table => "Table",
                ClassLabel::Algorithm => "Algorithm",
                _ => "Figure",
            };
            let tokens = approx_tokens(&cap, self.font_size(FontRole::Caption)).saturating_sub(2);
            let block = self.text_block(TextRole::Caption, tokens)?;
            let para = Paragraph {
                font: FontRole::Caption,
                lead: Some(Lead {
                    font: FontRole::CaptionNumber,
                    text: format!("{kind} {number}:"),
                }),
                block,
            };
            let cid = self.push(ClassLabel::Caption, cap, ContentRef::Text(vec![para]), None);
            self.elements[id as usize].linked_caption = Some(cid);
            self.elements[cid as usize].linked_element = Some(id);
        }
        Ok(())
    }
}

fn centered_box(cx: f64, y: f64, w: f64, h: f64) -> BBox {
    let w = w.min(1.0);
    let x = (cx - w / 2.0).clamp(0.0, 1.0 - w);
    BBox::new(x, y, w, h)
}

/// Whole number of lines closest to `h`, at least one.
fn snap_lines(h: f64, lh: f64) -> f64 {
    (h / lh).round().max(1.0)
}

/// Token budget that slightly overfills a box at the given font size.
pub fn approx_tokens(b: &BBox, size_pt: u32) -> usize {
    let size = size_pt.max(1) as f64;
    let lines = ((b.h * PAGE_HEIGHT_PT) / (size * LINE_SPACING)).floor().max(1.0);
    let chars_per_line = (b.w * PAGE_WIDTH_PT) / (0.48 * size);
    ((lines * chars_per_line / 6.0) * 1.1).ceil().clamp(1.0, 4000.0) as usize
}

/// Horizontal overlap length of a box with the span `[x0, x1]`.
fn x_overlap(b: &BBox, x0: f64, x1: f64) -> f64 {
    b.right().min(x1) - b.x.max(x0)
}

/// Adds body-text blocks in every residual vertical span of each column at
/// least one body line tall, then sorts elements into column-major reading
/// order.
pub fn fill_body_text(mut layout: PageLayout, text: &TextSource) -> PageLayout {
    let cfg = &layout.config;
    let body_size = cfg.font(FontRole::Body).map_or(10, |f| f.size_pt);
    let lh = line_height(body_size);
    let image_gap = cfg.distance(DistanceKind::ImageText);
    let abstract_gap = cfg.distance(DistanceKind::AbstractText);
    let author_gap = cfg.distance(DistanceKind::AuthorAbstract);
    let heading_rate = ComposeOptions::default().heading_rate;
    let mut rng = layout.seed.child(u64::MAX).rng(Purpose::Compose);

    let mut spans = Vec::new();
    for col in layout.columns {
        let (x0, x1) = (col.x, col.right());
        let mut blocked: Vec<(f64, f64)> = layout
            .elements
            .iter()
            .filter(|e| x_overlap(&e.bbox, x0, x1) > 1e-9)
            .map(|e| match e.label {
                ClassLabel::Title | ClassLabel::Author => (0.0, e.bbox.bottom() + author_gap),
                ClassLabel::Abstract => (e.bbox.y - abstract_gap, e.bbox.bottom() + abstract_gap),
                _ => (e.bbox.y - image_gap, e.bbox.bottom() + image_gap),
            })
            .collect();
        blocked.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cursor = col.y;
        for (a, b) in blocked.into_iter().chain(std::iter::once((col.bottom(), col.bottom()))) {
            let end = a.min(col.bottom());
            if end - cursor >= lh - 1e-12 {
                spans.push(BBox::new(x0, cursor, col.w, end - cursor));
            }
            cursor = cursor.max(b);
        }
    }

    for (k, span) in spans.into_iter().enumerate() {
        let seed = layout.seed.child(1 << 32 | k as u64);
        let mut paragraphs = Vec::new();
        let mut remaining = span;
        if rng.gen_bool(heading_rate) && span.h >= 3.0 * lh {
            let (role, font) = *[
                (TextRole::Heading1, FontRole::Heading1),
                (TextRole::Heading2, FontRole::Heading2),
                (TextRole::Heading3, FontRole::Heading3),
            ]
            .choose(&mut rng)
            .expect("non-empty");
            let n = rng.gen_range(2..6);
            if let Ok(block) = text.pseudo_text(role, n, seed.child(0)) {
                paragraphs.push(Paragraph::new(font, block));
                let hs = cfg.font(font).map_or(body_size, |f| f.size_pt);
                remaining.h -= line_height(hs) * 1.5;
            }
        }
        let mut budget = approx_tokens(&remaining, body_size);
        let mut i = 1;
        while budget > 0 {
            let n = rng.gen_range(40..140).min(budget);
            match text.pseudo_text(TextRole::Body, n, seed.child(i)) {
                Ok(block) => {
                    budget = budget.saturating_sub(block.tokens.len().max(1));
                    paragraphs.push(Paragraph::new(FontRole::Body, block));
                }
                Err(_) => break,
            }
            i += 1;
        }
        layout.elements.push(PlacedElement {
            id: layout.elements.len() as u32,
            label: ClassLabel::BodyText,
            bbox: span,
            content: ContentRef::Text(paragraphs),
            slot: None,
            linked_caption: None,
            linked_element: None,
        });
    }
    reading_order(&mut layout);
    layout
}

/// Sorts column-major, top to bottom, and renumbers ids and links.
fn reading_order(layout: &mut PageLayout) {
    let split = layout.columns[0].right() + layout.config.column_spacing / 2.0;
    let column = |b: &BBox| if b.x < split { 0 } else { 1 };
    let mut order: Vec<usize> = (0..layout.elements.len()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&layout.elements[a].bbox, &layout.elements[b].bbox);
        column(ea)
            .cmp(&column(eb))
            .then(ea.y.total_cmp(&eb.y))
            .then(ea.x.total_cmp(&eb.x))
    });
    let mut new_id = vec![0u32; order.len()];
    for (pos, &old) in order.iter().enumerate() {
        new_id[layout.elements[old].id as usize] = pos as u32;
    }
    let mut sorted: Vec<PlacedElement> = order.iter().map(|&i| layout.elements[i].clone()).collect();
    for e in &mut sorted {
        e.id = new_id[e.id as usize];
        e.linked_caption = e.linked_caption.map(|c| new_id[c as usize]);
        e.linked_element = e.linked_element.map(|c| new_id[c as usize]);
    }
    layout.elements = sorted;
}
