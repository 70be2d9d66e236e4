use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use docsynth::assets::UsagePolicy;
use docsynth::eval::{CoordSpace, Heuristic};

#[derive(Debug, Parser)]
#[command(name = "docsynth", version, about = "Synthetic scholarly-page generator and layout-detection evaluator")]
pub struct Cli {
    /// Worker threads for composition, rendering and matching (default: logical cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Font map file binding logical families to font files.
    #[arg(long, global = true, env = "DOCSYNTH_FONT_MAP")]
    pub font_map: Option<PathBuf>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Generate train and validation splits with manifests.
    Generate(GenerateArgs),
    /// Swap non-body-text labels uniformly at a given rate.
    Noise(NoiseArgs),
    /// Keep a seeded random fraction of the pages of a manifest.
    Downsample(DownsampleArgs),
    /// Score predictions against a manifest.
    Eval(EvalArgs),
    /// Write per-instance and per-page class statistics as CSV.
    Stats(StatsArgs),
    /// Filter predictions with page-order and position rules.
    Heuristics(HeuristicsArgs),
    /// Export the ground truth of a manifest as a prediction file.
    GtToPred(GtToPredArgs),
    /// Re-run the command recorded in a run.json.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Noise(_) => "noise",
            Command::Downsample(_) => "downsample",
            Command::Eval(_) => "eval",
            Command::Stats(_) => "stats",
            Command::Heuristics(_) => "heuristics",
            Command::GtToPred(_) => "gt-to-pred",
            Command::Replay(_) => "replay",
        }
    }

    pub fn out_dir(&self) -> Option<&Path> {
        match self {
            Command::Generate(a) => Some(&a.out),
            Command::Noise(a) => Some(&a.out),
            Command::Downsample(a) => Some(&a.out),
            Command::Eval(a) => Some(&a.out),
            Command::Stats(a) => Some(&a.out),
            Command::Heuristics(a) => Some(&a.out),
            Command::GtToPred(a) => Some(&a.out),
            Command::Replay(_) => None,
        }
    }

    pub fn set_out_dir(&mut self, dir: PathBuf) {
        match self {
            Command::Generate(a) => a.out = dir,
            Command::Noise(a) => a.out = dir,
            Command::Downsample(a) => a.out = dir,
            Command::Eval(a) => a.out = dir,
            Command::Stats(a) => a.out = dir,
            Command::Heuristics(a) => a.out = dir,
            Command::GtToPred(a) => a.out = dir,
            Command::Replay(_) => {}
        }
    }

    /// Makes every path argument absolute.
    pub fn absolutize(&mut self, cwd: &Path) {
        let abs = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = cwd.join(&*p);
            }
        };
        match self {
            Command::Generate(a) => {
                abs(&mut a.out);
                for p in [&mut a.assets, &mut a.text_corpus, &mut a.names].into_iter().flatten() {
                    abs(p);
                }
                if docsynth::style::bundled(&a.profile).is_none() {
                    let p = Path::new(&a.profile);
                    if p.is_relative() {
                        a.profile = cwd.join(p).to_string_lossy().into_owned();
                    }
                }
            }
            Command::Noise(a) => {
                abs(&mut a.manifest);
                abs(&mut a.out);
            }
            Command::Downsample(a) => {
                abs(&mut a.manifest);
                abs(&mut a.out);
            }
            Command::Eval(a) => {
                abs(&mut a.manifest);
                abs(&mut a.pred);
                abs(&mut a.out);
            }
            Command::Stats(a) => {
                abs(&mut a.manifest);
                abs(&mut a.out);
            }
            Command::Heuristics(a) => {
                abs(&mut a.manifest);
                abs(&mut a.pred);
                abs(&mut a.out);
            }
            Command::GtToPred(a) => {
                abs(&mut a.manifest);
                abs(&mut a.out);
            }
            Command::Replay(a) => abs(&mut a.run),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyArg {
    Once,
    WithReplacement,
}

impl From<PolicyArg> for UsagePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Once => UsagePolicy::Once,
            PolicyArg::WithReplacement => UsagePolicy::WithReplacement,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordArg {
    Pixel,
    Normalized,
}

impl From<CoordArg> for CoordSpace {
    fn from(c: CoordArg) -> Self {
        match c {
            CoordArg::Pixel => CoordSpace::Pixel,
            CoordArg::Normalized => CoordSpace::Normalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeuristicArg {
    PageOrder,
    Position,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::PageOrder => Heuristic::PageOrder,
            HeuristicArg::Position => Heuristic::Position,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    /// Bundled profile name (acl, vis, cs150, acl+vis) or path to a profile file.
    #[arg(long, default_value = "acl+vis")]
    pub profile: String,
    /// Number of training pages.
    #[arg(long)]
    pub train: usize,
    /// Number of validation pages.
    #[arg(long, default_value_t = 0)]
    pub val: usize,
    /// Master seed; every random draw derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Directory of `<class>/<image>` assets for figures, tables, algorithms and equations.
    #[arg(long)]
    pub assets: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PolicyArg::Once)]
    pub asset_policy: PolicyArg,
    /// Draw procedural placeholders for classes missing from --assets.
    #[arg(long)]
    pub procedural_fallback: bool,
    /// Plain-text corpus for pseudo-text.
    #[arg(long)]
    pub text_corpus: Option<PathBuf>,
    /// Name list for pseudo-authors, one per line.
    #[arg(long)]
    pub names: Option<PathBuf>,
    #[arg(long, default_value_t = docsynth::render::DEFAULT_WIDTH)]
    pub width: u32,
    #[arg(long, default_value_t = docsynth::render::DEFAULT_HEIGHT)]
    pub height: u32,
    #[arg(long)]
    pub no_antialias: bool,
    /// Blur, resample and threshold placed assets.
    #[arg(long)]
    pub degrade_assets: bool,
    /// Write manifests only, without rendering page images.
    #[arg(long)]
    pub no_images: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct NoiseArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Per-annotation swap probability.
    #[arg(long)]
    pub rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DownsampleArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Fraction of pages to keep, in [0, 1].
    #[arg(long)]
    pub fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Prediction file: JSON lines of {image_id, category_id, bbox, score}.
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, value_enum, default_value_t = CoordArg::Pixel)]
    pub coords: CoordArg,
    /// IoU thresholds, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.7, 0.8, 0.9])]
    pub iou: Vec<f64>,
    /// Also break errors down by cause.
    #[arg(long)]
    pub errors: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct StatsArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HeuristicsArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, value_enum, default_value_t = CoordArg::Pixel)]
    pub coords: CoordArg,
    /// Heuristics to apply, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [HeuristicArg::PageOrder, HeuristicArg::Position])]
    pub which: Vec<HeuristicArg>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GtToPredArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A run.json written by an earlier invocation.
    pub run: PathBuf,
    /// Output directory overriding the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
