//! Style profiles: the min/max envelope of page geometry, element counts,
//! placements, spacings and fonts that characterizes one venue's pages.
//!
//! Profiles are TOML files. All geometric values are fractions of the page
//! width (x, widths) or height (y, heights). Margins are stored as edge
//! positions: `top`/`bottom` are y coordinates of the text block's upper and
//! lower edge, `left`/`right` are x coordinates of its left and right edge.
//! See `docs/profile-format.md` for the full schema.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{CountRange, Range};
use crate::label::ClassLabel;

/// Placement slot of a visual element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slot {
    Mini,
    Left,
    Right,
    Center,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementSpec {
    pub slot: Slot,
    pub center_x: Range,
    pub center_y: Range,
    pub width: Range,
    pub height: Range,
}

impl PlacementSpec {
    pub fn contains_center(&self, cx: f64, cy: f64) -> bool {
        self.center_x.contains(cx) && self.center_y.contains(cy)
    }

    fn validate(&self, field: &str) -> Result<()> {
        self.center_x.validate_unit(&format!("{field}.center_x"))?;
        self.center_y.validate_unit(&format!("{field}.center_y"))?;
        self.width.validate_unit(&format!("{field}.width"))?;
        self.height.validate_unit(&format!("{field}.height"))?;
        if self.width.max <= 0.0 || self.height.max <= 0.0 {
            return Err(Error::validation(field, "zero-extent placement"));
        }
        Ok(())
    }

    fn merge(&self, other: &PlacementSpec) -> PlacementSpec {
        PlacementSpec {
            slot: self.slot,
            center_x: self.center_x.union(&other.center_x),
            center_y: self.center_y.union(&other.center_y),
            width: self.width.union(&other.width),
            height: self.height.union(&other.height),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub top: Range,
    pub bottom: Range,
    pub left: Range,
    pub right: Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageTypeCounts {
    pub title_pages: u32,
    pub inner_pages: u32,
}

impl PageTypeCounts {
    pub fn title_fraction(&self) -> f64 {
        let total = self.title_pages + self.inner_pages;
        if total == 0 {
            0.0
        } else {
            self.title_pages as f64 / total as f64
        }
    }
}

/// Per-page element count ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementCounts {
    pub figure: CountRange,
    pub mini_figure: CountRange,
    pub table: CountRange,
    pub mini_table: CountRange,
    pub algorithm: CountRange,
    pub equation: CountRange,
}

impl ElementCounts {
    fn fields(&self) -> [(&'static str, &CountRange); 6] {
        [
            ("figure", &self.figure),
            ("mini_figure", &self.mini_figure),
            ("table", &self.table),
            ("mini_table", &self.mini_table),
            ("algorithm", &self.algorithm),
            ("equation", &self.equation),
        ]
    }
}

/// Placement lists keyed by class. Text classes (title, author) use a single
/// centred spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placements {
    pub figure: Vec<PlacementSpec>,
    pub table: Vec<PlacementSpec>,
    pub algorithm: Vec<PlacementSpec>,
    pub equation: Vec<PlacementSpec>,
    pub title: Vec<PlacementSpec>,
    pub author: Vec<PlacementSpec>,
}

impl Placements {
    pub fn for_class(&self, label: ClassLabel) -> &[PlacementSpec] {
        match label {
            ClassLabel::Figure => &self.figure,
            ClassLabel::Table => &self.table,
            ClassLabel::Algorithm => &self.algorithm,
            ClassLabel::Equation => &self.equation,
            ClassLabel::Title => &self.title,
            ClassLabel::Author => &self.author,
            _ => &[],
        }
    }

    fn lists(&self) -> [(&'static str, &Vec<PlacementSpec>); 6] {
        [
            ("figure", &self.figure),
            ("table", &self.table),
            ("algorithm", &self.algorithm),
            ("equation", &self.equation),
            ("title", &self.title),
            ("author", &self.author),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub width: Range,
    pub height: Range,
}

/// Abstract extents per layout; a missing layout is not produced for this style.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbstractSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_column: Option<Extent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_column: Option<Extent>,
}

impl AbstractSpec {
    pub fn extent(&self, layout: AbstractLayout) -> Option<&Extent> {
        match layout {
            AbstractLayout::LeftColumn => self.left_column.as_ref(),
            AbstractLayout::TwoColumn => self.two_column.as_ref(),
        }
    }

    pub fn layouts(&self) -> Vec<AbstractLayout> {
        let mut out = Vec::new();
        if self.left_column.is_some() {
            out.push(AbstractLayout::LeftColumn);
        }
        if self.two_column.is_some() {
            out.push(AbstractLayout::TwoColumn);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbstractLayout {
    LeftColumn,
    TwoColumn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptionSpec {
    pub center_y: Range,
    pub width: Range,
    pub height: Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaptionSide {
    Above,
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptionSides {
    pub figure: Vec<CaptionSide>,
    pub table: Vec<CaptionSide>,
    pub algorithm: Vec<CaptionSide>,
}

impl CaptionSides {
    pub fn for_class(&self, label: ClassLabel) -> &[CaptionSide] {
        match label {
            ClassLabel::Figure => &self.figure,
            ClassLabel::Table => &self.table,
            ClassLabel::Algorithm => &self.algorithm,
            _ => &[],
        }
    }
}

/// Vertical gaps between page parts, as fractions of page height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub title_author: Range,
    pub author_abstract: Range,
    pub abstract_text: Range,
    pub header_title: Range,
    pub image_caption: Range,
    pub image_text: Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceKind {
    TitleAuthor,
    AuthorAbstract,
    AbstractText,
    HeaderTitle,
    ImageCaption,
    ImageText,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 6] = [
        DistanceKind::TitleAuthor,
        DistanceKind::AuthorAbstract,
        DistanceKind::AbstractText,
        DistanceKind::HeaderTitle,
        DistanceKind::ImageCaption,
        DistanceKind::ImageText,
    ];
}

impl Distances {
    pub fn get(&self, kind: DistanceKind) -> &Range {
        match kind {
            DistanceKind::TitleAuthor => &self.title_author,
            DistanceKind::AuthorAbstract => &self.author_abstract,
            DistanceKind::AbstractText => &self.abstract_text,
            DistanceKind::HeaderTitle => &self.header_title,
            DistanceKind::ImageCaption => &self.image_caption,
            DistanceKind::ImageText => &self.image_text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weight {
    Regular,
    Bold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slant {
    Upright,
    Italic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Caps {
    None,
    SmallCaps,
    AllCaps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alignment {
    Left,
    Center,
    Distributed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FontSpec {
    /// Logical family name, resolved through a font map at render time.
    pub family: String,
    pub size_pt: CountRange,
    pub weight: Weight,
    pub slant: Slant,
    pub caps: Caps,
    pub alignment: Alignment,
}

/// Typographic role a font is chosen for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FontRole {
    Title,
    Author,
    AbstractHeader,
    AbstractText,
    Keywords,
    #[serde(rename = "heading-1")]
    Heading1,
    #[serde(rename = "heading-2")]
    Heading2,
    #[serde(rename = "heading-3")]
    Heading3,
    Body,
    Caption,
    CaptionNumber,
}

impl FontRole {
    pub const ALL: [FontRole; 11] = [
        FontRole::Title,
        FontRole::Author,
        FontRole::AbstractHeader,
        FontRole::AbstractText,
        FontRole::Keywords,
        FontRole::Heading1,
        FontRole::Heading2,
        FontRole::Heading3,
        FontRole::Body,
        FontRole::Caption,
        FontRole::CaptionNumber,
    ];

    /// Roles every profile must define.
    pub const REQUIRED: [FontRole; 10] = [
        FontRole::Title,
        FontRole::Author,
        FontRole::AbstractHeader,
        FontRole::AbstractText,
        FontRole::Heading1,
        FontRole::Heading2,
        FontRole::Heading3,
        FontRole::Body,
        FontRole::Caption,
        FontRole::CaptionNumber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FontRole::Title => "title",
            FontRole::Author => "author",
            FontRole::AbstractHeader => "abstract-header",
            FontRole::AbstractText => "abstract-text",
            FontRole::Keywords => "keywords",
            FontRole::Heading1 => "heading-1",
            FontRole::Heading2 => "heading-2",
            FontRole::Heading3 => "heading-3",
            FontRole::Body => "body",
            FontRole::Caption => "caption",
            FontRole::CaptionNumber => "caption-number",
        }
    }
}

impl fmt::Display for FontRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleProfile {
    pub name: String,
    pub page_types: PageTypeCounts,
    pub column_width: Range,
    pub column_spacing: Range,
    /// Allowed values for the keywords line under the abstract.
    pub keywords_line: Vec<bool>,
    /// Lead-in words of the keywords line, e.g. "Index Terms".
    #[serde(default)]
    pub keywords_labels: Vec<String>,
    pub margins: Margins,
    pub counts: ElementCounts,
    pub distances: Distances,
    pub caption: CaptionSpec,
    pub caption_sides: CaptionSides,
    #[serde(rename = "abstract")]
    pub abstract_spec: AbstractSpec,
    pub placements: Placements,
    pub fonts: BTreeMap<FontRole, Vec<FontSpec>>,
}

impl StyleProfile {
    pub fn parse(text: &str) -> Result<StyleProfile> {
        let profile: StyleProfile =
            toml::from_str(text).map_err(|e| Error::ProfileParse(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("style profile serializes to TOML")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    pub fn abstract_layouts(&self) -> Vec<AbstractLayout> {
        self.abstract_spec.layouts()
    }

    pub fn fonts_for(&self, role: FontRole) -> &[FontSpec] {
        self.fonts.get(&role).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks every invariant; the error names the first offending field.
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::validation("name", "empty profile name"));
        }
        let m = &self.margins;
        m.top.validate_unit("margins.top")?;
        m.bottom.validate_unit("margins.bottom")?;
        m.left.validate_unit("margins.left")?;
        m.right.validate_unit("margins.right")?;
        if m.top.min >= m.bottom.max {
            return Err(Error::validation(
                "margins",
                "top edge never above bottom edge",
            ));
        }
        if m.left.min >= m.right.max {
            return Err(Error::validation("margins", "left edge never left of right edge"));
        }
        self.column_width.validate_unit("column_width")?;
        self.column_spacing.validate_unit("column_spacing")?;
        if self.column_width.max <= 0.0 {
            return Err(Error::validation("column_width", "zero column width"));
        }
        if self.page_types.title_pages + self.page_types.inner_pages == 0 {
            return Err(Error::validation("page_types", "no pages of either type"));
        }
        for (name, r) in self.counts.fields() {
            r.validate(&format!("counts.{name}"))?;
        }
        for kind in DistanceKind::ALL {
            let field = format!("distances.{}", distance_field(kind));
            self.distances.get(kind).validate_unit(&field)?;
        }
        self.caption.center_y.validate_unit("caption.center_y")?;
        self.caption.width.validate_unit("caption.width")?;
        self.caption.height.validate_unit("caption.height")?;
        for (name, list) in self.placements.lists() {
            for (i, spec) in list.iter().enumerate() {
                spec.validate(&format!("placements.{name}[{i}]"))?;
            }
        }
        for (name, ext) in [
            ("abstract.left_column", &self.abstract_spec.left_column),
            ("abstract.two_column", &self.abstract_spec.two_column),
        ] {
            if let Some(ext) = ext {
                ext.width.validate_unit(&format!("{name}.width"))?;
                ext.height.validate_unit(&format!("{name}.height"))?;
            }
        }
        if self.abstract_layouts().is_empty() {
            return Err(Error::validation("abstract", "no abstract layout defined"));
        }
        self.validate_class_coverage()?;
        for (role, specs) in &self.fonts {
            for (i, f) in specs.iter().enumerate() {
                let field = format!("fonts.{role}[{i}]");
                if f.family.trim().is_empty() {
                    return Err(Error::validation(field, "empty font family"));
                }
                f.size_pt.validate(&format!("{field}.size_pt"))?;
                if f.size_pt.min < 4 {
                    return Err(Error::validation(
                        format!("{field}.size_pt"),
                        format!("size {} below 4 pt", f.size_pt.min),
                    ));
                }
            }
        }
        for role in FontRole::REQUIRED {
            if self.fonts_for(role).is_empty() {
                return Err(Error::validation(format!("fonts.{role}"), "no font defined"));
            }
        }
        if self.keywords_line.is_empty() {
            return Err(Error::validation("keywords_line", "no allowed value"));
        }
        if self.keywords_line.contains(&true) {
            if self.keywords_labels.is_empty() {
                return Err(Error::validation("keywords_labels", "keywords line enabled without a label"));
            }
            if self.fonts_for(FontRole::Keywords).is_empty() {
                return Err(Error::validation("fonts.keywords", "keywords line enabled without a font"));
            }
        }
        for (name, sides) in [
            ("caption_sides.figure", &self.caption_sides.figure),
            ("caption_sides.table", &self.caption_sides.table),
            ("caption_sides.algorithm", &self.caption_sides.algorithm),
        ] {
            if sides.is_empty() {
                return Err(Error::validation(name, "no caption side allowed"));
            }
        }
        Ok(())
    }

    /// Every class that can be requested must have somewhere to go.
    fn validate_class_coverage(&self) -> Result<()> {
        let c = &self.counts;
        let needs = [
            ("figure", c.figure.max, &self.placements.figure, false),
            ("figure", c.mini_figure.max, &self.placements.figure, true),
            ("table", c.table.max, &self.placements.table, false),
            ("table", c.mini_table.max, &self.placements.table, true),
            ("algorithm", c.algorithm.max, &self.placements.algorithm, false),
            ("equation", c.equation.max, &self.placements.equation, false),
        ];
        for (name, max, list, mini) in needs {
            if max == 0 {
                continue;
            }
            let ok = list.iter().any(|s| (s.slot == Slot::Mini) == mini);
            if !ok {
                let what = if mini { "mini slot" } else { "non-mini slot" };
                return Err(Error::validation(
                    format!("placements.{name}"),
                    format!("count allows elements but no {what} placement exists"),
                ));
            }
        }
        if self.page_types.title_pages > 0 {
            for (name, list) in [("title", &self.placements.title), ("author", &self.placements.author)] {
                if list.is_empty() {
                    return Err(Error::validation(
                        format!("placements.{name}"),
                        "title pages requested but no placement exists",
                    ));
                }
            }
        }
        Ok(())
    }
}

fn distance_field(kind: DistanceKind) -> &'static str {
    match kind {
        DistanceKind::TitleAuthor => "title_author",
        DistanceKind::AuthorAbstract => "author_abstract",
        DistanceKind::AbstractText => "abstract_text",
        DistanceKind::HeaderTitle => "header_title",
        DistanceKind::ImageCaption => "image_caption",
        DistanceKind::ImageText => "image_text",
    }
}

pub fn load_style_profile(path: impl AsRef<Path>) -> Result<StyleProfile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    StyleProfile::parse(&text)
}

const ACL_PROFILE: &str = include_str!("../profiles/acl.profile");
const VIS_PROFILE: &str = include_str!("../profiles/vis.profile");
const CS150_PROFILE: &str = include_str!("../profiles/cs150.profile");

/// Names accepted by [`bundled`].
pub const BUNDLED_NAMES: [&str; 4] = ["acl", "vis", "cs150", "acl+vis"];

/// Raw text of a bundled single-style profile.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "acl" => Some(ACL_PROFILE),
        "vis" => Some(VIS_PROFILE),
        "cs150" | "cs-150" => Some(CS150_PROFILE),
        _ => None,
    }
}

/// One of the bundled profiles; `acl+vis` is the merge of the first two.
pub fn bundled(name: &str) -> Option<StyleProfile> {
    let lower = name.to_ascii_lowercase();
    if let Some(src) = bundled_source(&lower) {
        return Some(StyleProfile::parse(src).expect("bundled profile is valid"));
    }
    let parts: Vec<&str> = lower.split('+').collect();
    if parts.len() < 2 {
        return None;
    }
    let mut profiles = parts.iter().map(|p| bundled(p));
    let first = profiles.next()??;
    profiles.try_fold(first, |acc, p| Some(merge_profiles(&acc, &p?)))
}

/// Resolves a bundled profile name or a path to a profile file.
pub fn resolve_profile(name_or_path: &str) -> Result<StyleProfile> {
    if let Some(p) = bundled(name_or_path) {
        return Ok(p);
    }
    load_style_profile(name_or_path)
}

fn merge_placements(a: &[PlacementSpec], b: &[PlacementSpec]) -> Vec<PlacementSpec> {
    let mut by_slot: BTreeMap<Slot, PlacementSpec> = BTreeMap::new();
    for spec in a.iter().chain(b) {
        by_slot
            .entry(spec.slot)
            .and_modify(|s| *s = s.merge(spec))
            .or_insert_with(|| spec.clone());
    }
    by_slot.into_values().collect()
}

fn merge_extent(a: &Option<Extent>, b: &Option<Extent>) -> Option<Extent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(Extent {
            width: x.width.union(&y.width),
            height: x.height.union(&y.height),
        }),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

fn merge_lists<T: Clone + PartialEq>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(a.len() + b.len());
    for item in a.iter().chain(b) {
        if !out.contains(item) {
            out.push(item.clone());
        }
    }
    out
}

/// Union of two profiles: every range widens to cover both inputs, option
/// lists are concatenated without duplicates.
pub fn merge_profiles(a: &StyleProfile, b: &StyleProfile) -> StyleProfile {
    if a == b {
        return a.clone();
    }
    let union = |x: &Range, y: &Range| x.union(y);
    let name = if a.name == b.name {
        a.name.clone()
    } else {
        format!("{}+{}", a.name, b.name)
    };
    let mut fonts = BTreeMap::new();
    for role in FontRole::ALL {
        let merged = merge_lists(a.fonts_for(role), b.fonts_for(role));
        if !merged.is_empty() {
            fonts.insert(role, merged);
        }
    }
    StyleProfile {
        name,
        // Pooled corpora: page-type tallies add up.
        page_types: PageTypeCounts {
            title_pages: a.page_types.title_pages + b.page_types.title_pages,
            inner_pages: a.page_types.inner_pages + b.page_types.inner_pages,
        },
        column_width: union(&a.column_width, &b.column_width),
        column_spacing: union(&a.column_spacing, &b.column_spacing),
        keywords_line: merge_lists(&a.keywords_line, &b.keywords_line),
        keywords_labels: merge_lists(&a.keywords_labels, &b.keywords_labels),
        margins: Margins {
            top: union(&a.margins.top, &b.margins.top),
            bottom: union(&a.margins.bottom, &b.margins.bottom),
            left: union(&a.margins.left, &b.margins.left),
            right: union(&a.margins.right, &b.margins.right),
        },
        counts: ElementCounts {
            figure: a.counts.figure.union(&b.counts.figure),
            mini_figure: a.counts.mini_figure.union(&b.counts.mini_figure),
            table: a.counts.table.union(&b.counts.table),
            mini_table: a.counts.mini_table.union(&b.counts.mini_table),
            algorithm: a.counts.algorithm.union(&b.counts.algorithm),
            equation: a.counts.equation.union(&b.counts.equation),
        },
        distances: Distances {
            title_author: union(&a.distances.title_author, &b.distances.title_author),
            author_abstract: union(&a.distances.author_abstract, &b.distances.author_abstract),
            abstract_text: union(&a.distances.abstract_text, &b.distances.abstract_text),
            header_title: union(&a.distances.header_title, &b.distances.header_title),
            image_caption: union(&a.distances.image_caption, &b.distances.image_caption),
            image_text: union(&a.distances.image_text, &b.distances.image_text),
        },
        caption: CaptionSpec {
            center_y: union(&a.caption.center_y, &b.caption.center_y),
            width: union(&a.caption.width, &b.caption.width),
            height: union(&a.caption.height, &b.caption.height),
        },
        caption_sides: CaptionSides {
            figure: merge_lists(&a.caption_sides.figure, &b.caption_sides.figure),
            table: merge_lists(&a.caption_sides.table, &b.caption_sides.table),
            algorithm: merge_lists(&a.caption_sides.algorithm, &b.caption_sides.algorithm),
        },
        abstract_spec: AbstractSpec {
            left_column: merge_extent(&a.abstract_spec.left_column, &b.abstract_spec.left_column),
            two_column: merge_extent(&a.abstract_spec.two_column, &b.abstract_spec.two_column),
        },
        placements: Placements {
            figure: merge_placements(&a.placements.figure, &b.placements.figure),
            table: merge_placements(&a.placements.table, &b.placements.table),
            algorithm: merge_placements(&a.placements.algorithm, &b.placements.algorithm),
            equation: merge_placements(&a.placements.equation, &b.placements.equation),
            title: merge_placements(&a.placements.title, &b.placements.title),
            author: merge_placements(&a.placements.author, &b.placements.author),
        },
        fonts,
    }
}
