//! Synthetic scholarly-page generation with pixel-exact layout ground truth,
//! plus corpus manipulation and detection evaluation for the nine layout
//! classes (abstract, algorithm, author, body-text, caption, equation,
//! figure, table, title).
//!
//! The pipeline is `style` → `sampler` → `compose` → `render` → `corpus`,
//! with `eval` scoring detector output against the generated manifests.
//!
//! ```
//! use docsynth::style::bundled;
//! use docsynth::{evaluate, generate_corpus, PredictionSet};
//!
//! let profile = bundled("acl").unwrap();
//! let corpus = generate_corpus(&profile, 10, 2, 42)?;
//! let preds = PredictionSet::from_ground_truth(&corpus.val);
//! let reports = evaluate(&preds, &corpus.val, &[0.8])?;
//! assert_eq!(reports[0].map, Some(1.0));
//! # Ok::<(), docsynth::Error>(())
//! ```

pub mod assets;
pub mod compose;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod fonts;
pub mod geom;
pub mod label;
pub mod manifest;
pub mod raster;
pub mod render;
pub mod rng;
pub mod sampler;
pub mod style;
pub mod textgen;

pub use assets::{load_asset_dir, procedural_asset, AssetPool, AssetRef, UsagePolicy};
pub use compose::{compose_page, fill_body_text, place_nonoverlapping, PageLayout, PlacedElement};
pub use corpus::{corpus_stats, downsample, generate_corpus, inject_label_noise, Generator, NoiseConfig, StatsTable};
pub use error::{Error, Result};
pub use eval::{
    apply_heuristics, average_precision, error_distribution, evaluate, iou, match_detections, Detection, ErrorBreakdown, EvalReport,
    Heuristic, PredictionSet,
};
pub use geom::{BBox, CountRange, Range};
pub use label::ClassLabel;
pub use manifest::{DatasetManifest, ManifestInfo};
pub use render::{export_coco, render_page, RenderSpec, RenderedPage};
pub use rng::RngSeed;
pub use sampler::{sample_page_config, sample_placement, PageConfig, PageKind};
pub use style::{load_style_profile, merge_profiles, StyleProfile};
pub use textgen::{pseudo_authors, pseudo_text, TextBlock, TextRole, TextSource};

/// Generator version recorded in manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
