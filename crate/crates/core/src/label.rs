use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The nine layout classes. Discriminants are the stable category ids written to manifests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassLabel {
    Abstract = 0,
    Algorithm = 1,
    Author = 2,
    BodyText = 3,
    Caption = 4,
    Equation = 5,
    Figure = 6,
    Table = 7,
    Title = 8,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 9] = [
        ClassLabel::Abstract,
        ClassLabel::Algorithm,
        ClassLabel::Author,
        ClassLabel::BodyText,
        ClassLabel::Caption,
        ClassLabel::Equation,
        ClassLabel::Figure,
        ClassLabel::Table,
        ClassLabel::Title,
    ];

    /// Classes backed by image assets rather than generated text.
    pub const VISUAL: [ClassLabel; 4] = [
        ClassLabel::Algorithm,
        ClassLabel::Equation,
        ClassLabel::Figure,
        ClassLabel::Table,
    ];

    /// Every class except body-text; the label-noise target set.
    pub const NOISE_ELIGIBLE: [ClassLabel; 8] = [
        ClassLabel::Abstract,
        ClassLabel::Algorithm,
        ClassLabel::Author,
        ClassLabel::Caption,
        ClassLabel::Equation,
        ClassLabel::Figure,
        ClassLabel::Table,
        ClassLabel::Title,
    ];

    pub fn id(self) -> u32 {
        self as u32
    }

    pub fn from_id(id: u32) -> Option<ClassLabel> {
        ClassLabel::ALL.get(id as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Abstract => "abstract",
            ClassLabel::Algorithm => "algorithm",
            ClassLabel::Author => "author",
            ClassLabel::BodyText => "body-text",
            ClassLabel::Caption => "caption",
            ClassLabel::Equation => "equation",
            ClassLabel::Figure => "figure",
            ClassLabel::Table => "table",
            ClassLabel::Title => "title",
        }
    }

    pub fn is_visual(self) -> bool {
        ClassLabel::VISUAL.contains(&self)
    }

    /// Classes that must never overlap each other on a composed page.
    pub fn is_exclusive_body(self) -> bool {
        self.is_visual() || self == ClassLabel::Caption
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        match norm.as_str() {
            "text" | "body" => return Ok(ClassLabel::BodyText),
            _ => {}
        }
        ClassLabel::ALL
            .iter()
            .copied()
            .find(|c| c.name() == norm)
            .ok_or_else(|| format!("unknown class label `{s}`"))
    }
}
