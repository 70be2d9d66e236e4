//! Logical font families resolved to font files.
//!
//! Profiles name fonts logically ("times new roman", "helvetica"). A font map
//! binds each (family, weight, slant) to a file. The built-in map uses
//! bundled metrically similar open fonts (STIX for the Times families,
//! DejaVu Sans for Helvetica).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use ab_glyph::FontArc;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::style::{Slant, Weight};

/// Environment variable that overrides the font-map path in the CLI.
pub const FONT_MAP_ENV: &str = "DOCSYNTH_FONT_MAP";

const BUILTIN_PREFIX: &str = "builtin:";

static BUILTIN_FILES: [(&str, &[u8]); 8] = [
    ("STIXGeneral.ttf", include_bytes!("../fonts/STIXGeneral.ttf")),
    ("STIXGeneralBol.ttf", include_bytes!("../fonts/STIXGeneralBol.ttf")),
    ("STIXGeneralItalic.ttf", include_bytes!("../fonts/STIXGeneralItalic.ttf")),
    ("STIXGeneralBolIta.ttf", include_bytes!("../fonts/STIXGeneralBolIta.ttf")),
    ("DejaVuSans.ttf", include_bytes!("../fonts/DejaVuSans.ttf")),
    ("DejaVuSans-Bold.ttf", include_bytes!("../fonts/DejaVuSans-Bold.ttf")),
    ("DejaVuSans-Oblique.ttf", include_bytes!("../fonts/DejaVuSans-Oblique.ttf")),
    ("DejaVuSans-BoldOblique.ttf", include_bytes!("../fonts/DejaVuSans-BoldOblique.ttf")),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FontMapEntry {
    pub family: String,
    pub weight: Weight,
    pub slant: Slant,
    /// Path relative to the map file, or `builtin:<name>`.
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FontMap {
    #[serde(rename = "font")]
    pub entries: Vec<FontMapEntry>,
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

impl FontMap {
    pub fn builtin() -> FontMap {
        let serif = ["STIXGeneral.ttf", "STIXGeneralBol.ttf", "STIXGeneralItalic.ttf", "STIXGeneralBolIta.ttf"];
        let sans = [
            "DejaVuSans.ttf",
            "DejaVuSans-Bold.ttf",
            "DejaVuSans-Oblique.ttf",
            "DejaVuSans-BoldOblique.ttf",
        ];
        let mut entries = Vec::new();
        for (family, files) in [("times new roman", serif), ("times", serif), ("helvetica", sans)] {
            let styles = [
                (Weight::Regular, Slant::Upright),
                (Weight::Bold, Slant::Upright),
                (Weight::Regular, Slant::Italic),
                (Weight::Bold, Slant::Italic),
            ];
            for ((weight, slant), file) in styles.into_iter().zip(files) {
                entries.push(FontMapEntry {
                    family: family.to_string(),
                    weight,
                    slant,
                    file: format!("{BUILTIN_PREFIX}{file}"),
                });
            }
        }
        FontMap {
            entries,
            base_dir: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FontMap> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut map: FontMap = toml::from_str(&text).map_err(|e| Error::FontResolution(format!("{}: {e}", path.display())))?;
        map.base_dir = path.parent().map(Path::to_path_buf);
        Ok(map)
    }

    /// Logical family → file name, for provenance records.
    pub fn substitutions(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|e| {
                let key = format!("{} {:?} {:?}", e.family, e.weight, e.slant).to_lowercase();
                (key, e.file.trim_start_matches(BUILTIN_PREFIX).to_string())
            })
            .collect()
    }

    fn find(&self, family: &str, weight: Weight, slant: Slant) -> Option<&FontMapEntry> {
        let family = family.to_lowercase();
        let same = |e: &&FontMapEntry| e.family.to_lowercase() == family;
        self.entries
            .iter()
            .filter(same)
            .find(|e| e.weight == weight && e.slant == slant)
            .or_else(|| self.entries.iter().filter(same).find(|e| e.weight == weight))
            .or_else(|| self.entries.iter().find(same))
    }

    /// Loads every mapped face.
    pub fn into_book(self) -> Result<FontBook> {
        let mut faces = BTreeMap::new();
        for e in &self.entries {
            let key = (e.family.to_lowercase(), e.weight, e.slant);
            if faces.contains_key(&key) {
                continue;
            }
            faces.insert(key, load_face(&e.file, self.base_dir.as_deref())?);
        }
        Ok(FontBook {
            map: self,
            faces: Arc::new(faces),
        })
    }
}

fn load_face(file: &str, base: Option<&Path>) -> Result<FontArc> {
    if let Some(name) = file.strip_prefix(BUILTIN_PREFIX) {
        let bytes = BUILTIN_FILES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, b)| *b)
            .ok_or_else(|| Error::FontResolution(format!("no built-in font {name}")))?;
        return FontArc::try_from_slice(bytes).map_err(|e| Error::FontResolution(format!("{name}: {e}")));
    }
    let path = match base {
        Some(b) if Path::new(file).is_relative() => b.join(file),
        _ => PathBuf::from(file),
    };
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    FontArc::try_from_vec(bytes).map_err(|e| Error::FontResolution(format!("{}: {e}", path.display())))
}

type FaceKey = (String, Weight, Slant);

/// Loaded faces, shareable across render workers.
#[derive(Clone)]
pub struct FontBook {
    map: FontMap,
    faces: Arc<BTreeMap<FaceKey, FontArc>>,
}

impl std::fmt::Debug for FontBook {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FontBook").field("faces", &self.faces.len()).finish()
    }
}

impl FontBook {
    pub fn builtin() -> FontBook {
        static BOOK: OnceLock<FontBook> = OnceLock::new();
        BOOK.get_or_init(|| FontMap::builtin().into_book().expect("built-in fonts load"))
            .clone()
    }

    pub fn map(&self) -> &FontMap {
        &self.map
    }

    pub fn resolve(&self, family: &str, weight: Weight, slant: Slant) -> Result<&FontArc> {
        let e = self
            .map
            .find(family, weight, slant)
            .ok_or_else(|| Error::FontResolution(format!("family `{family}`")))?;
        self.faces
            .get(&(e.family.to_lowercase(), e.weight, e.slant))
            .ok_or_else(|| Error::FontResolution(format!("family `{family}`")))
    }

    pub fn has_family(&self, family: &str) -> bool {
        let f = family.to_lowercase();
        self.map.entries.iter().any(|e| e.family.to_lowercase() == f)
    }
}
