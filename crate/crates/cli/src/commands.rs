use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use docsynth::assets::{load_asset_dir, AssetPool, ClassMap};
use docsynth::corpus::{corpus_stats, downsample, inject_label_noise, Generator, NoiseConfig};
use docsynth::eval::{apply_heuristics, error_distribution, evaluate, ErrorBreakdown, EvalReport, PredictionSet};
use docsynth::fonts::{FontBook, FontMap};
use docsynth::manifest::DatasetManifest;
use docsynth::render::RenderSpec;
use docsynth::style::resolve_profile;
use docsynth::textgen::TextSource;

use crate::args::{
    Command, DownsampleArgs, EvalArgs, GenerateArgs, GtToPredArgs, HeuristicsArgs, NoiseArgs, StatsArgs,
};

pub const RUN_FILE: &str = "run.json";

/// Fully resolved invocation, enough to repeat the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool: String,
    pub version: String,
    pub jobs: Option<usize>,
    pub font_map: Option<PathBuf>,
    pub command: Command,
}

pub struct RunContext {
    pub font_map: Option<PathBuf>,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    std::fs::write(path, s).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_run_record(record: &RunRecord) -> Result<()> {
    if let Some(dir) = record.command.out_dir() {
        create_dir(dir)?;
        write_json(&dir.join(RUN_FILE), record)?;
    }
    Ok(())
}

pub fn read_run_record(path: &Path) -> Result<RunRecord> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a run record", path.display()))
}

fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    DatasetManifest::load(path).with_context(|| format!("cannot load manifest {}", path.display()))
}

fn file_name(path: &Path) -> Result<&std::ffi::OsStr> {
    path.file_name().with_context(|| format!("{} has no file name", path.display()))
}

/// Points `image_dir` at the images of the source manifest so the derived
/// manifest stays usable from its new location.
fn rebase_image_dir(m: &mut DatasetManifest, source: &Path) {
    if let Some(dir) = &m.info.image_dir {
        let p = Path::new(dir);
        if p.is_relative() {
            let base = source.parent().unwrap_or(Path::new("."));
            m.info.image_dir = Some(base.join(p).to_string_lossy().into_owned());
        }
    }
}

pub fn run(command: &Command, ctx: &RunContext) -> Result<()> {
    match command {
        Command::Generate(a) => generate(a, ctx),
        Command::Noise(a) => noise(a),
        Command::Downsample(a) => downsample_cmd(a),
        Command::Eval(a) => eval(a),
        Command::Stats(a) => stats(a),
        Command::Heuristics(a) => heuristics(a),
        Command::GtToPred(a) => gt_to_pred(a),
        Command::Replay(_) => bail!("replay cannot be nested"),
    }
}

fn generate(a: &GenerateArgs, ctx: &RunContext) -> Result<()> {
    let profile = resolve_profile(&a.profile).with_context(|| format!("cannot load profile {}", a.profile))?;
    let mut gen = Generator::new(profile, a.train, a.val, a.seed);
    gen.render = RenderSpec {
        width: a.width,
        height: a.height,
        antialias: !a.no_antialias,
        degrade_assets: a.degrade_assets,
    };
    gen.render.validate()?;
    if let Some(path) = &ctx.font_map {
        gen.fonts = FontMap::load(path)?.into_book()?;
    } else {
        gen.fonts = FontBook::builtin();
    }
    if a.text_corpus.is_some() || a.names.is_some() {
        gen.text = TextSource::from_files(a.text_corpus.as_deref(), a.names.as_deref())?;
    }
    gen.assets = match &a.assets {
        Some(dir) => load_asset_dir(dir, &ClassMap::default(), a.asset_policy.into())?
            .with_procedural_fallback(a.procedural_fallback)
            .shuffled(a.seed),
        None => AssetPool::procedural().with_policy(a.asset_policy.into()),
    };
    create_dir(&a.out)?;
    let out = if a.no_images { None } else { Some(a.out.as_path()) };
    let corpus = gen.run(out)?;
    if a.no_images {
        corpus.train.save(a.out.join("train.json"))?;
        corpus.val.save(a.out.join("val.json"))?;
    }
    println!(
        "generated {} train and {} val pages ({} + {} annotations) in {}",
        corpus.train.images.len(),
        corpus.val.images.len(),
        corpus.train.annotations.len(),
        corpus.val.annotations.len(),
        a.out.display()
    );
    if corpus.dropped > 0 || corpus.truncated > 0 {
        println!("{} elements dropped, {} text boxes truncated", corpus.dropped, corpus.truncated);
    }
    Ok(())
}

fn noise(a: &NoiseArgs) -> Result<()> {
    let m = load_manifest(&a.manifest)?;
    let cfg = NoiseConfig { rate: a.rate, seed: a.seed };
    let mut noisy = inject_label_noise(&m, &cfg)?;
    rebase_image_dir(&mut noisy, &a.manifest);
    let changed = m
        .annotations
        .iter()
        .zip(&noisy.annotations)
        .filter(|(x, y)| x.category_id != y.category_id)
        .count();
    create_dir(&a.out)?;
    let dest = a.out.join(file_name(&a.manifest)?);
    noisy.save(&dest)?;
    println!("{changed} of {} labels swapped, written to {}", m.annotations.len(), dest.display());
    Ok(())
}

fn downsample_cmd(a: &DownsampleArgs) -> Result<()> {
    let m = load_manifest(&a.manifest)?;
    let mut sub = downsample(&m, a.fraction, a.seed)?;
    rebase_image_dir(&mut sub, &a.manifest);
    create_dir(&a.out)?;
    let dest = a.out.join(file_name(&a.manifest)?);
    sub.save(&dest)?;
    println!("kept {} of {} pages, written to {}", sub.images.len(), m.images.len(), dest.display());
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

pub fn format_report(r: &EvalReport) -> String {
    let mut s = format!("IoU {:.2}\n", r.iou_threshold);
    s.push_str(&format!(
        "{:<10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8}\n",
        "class", "gt", "pred", "tp", "fp", "fn", "P", "R", "F1", "AP"
    ));
    for c in &r.classes {
        s.push_str(&format!(
            "{:<10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8}\n",
            c.class.name(),
            c.n_gt,
            c.n_pred,
            c.tp,
            c.fp,
            c.fn_,
            fmt_opt(c.precision),
            fmt_opt(c.recall),
            fmt_opt(c.f1),
            fmt_opt(c.ap)
        ));
    }
    s.push_str(&format!("mAP@{:.2} = {}", r.iou_threshold, fmt_opt(r.map)));
    if !r.excluded_from_map.is_empty() {
        let names: Vec<&str> = r.excluded_from_map.iter().map(|c| c.name()).collect();
        s.push_str(&format!(" (no ground truth: {})", names.join(", ")));
    }
    s.push('\n');
    s
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    reports: &'a [EvalReport],
    #[serde(skip_serializing_if = "Vec::is_empty")]
    errors: Vec<ErrorBreakdown>,
}

fn eval(a: &EvalArgs) -> Result<()> {
    let m = load_manifest(&a.manifest)?;
    let preds = PredictionSet::load(&a.pred, a.coords.into())
        .with_context(|| format!("cannot load predictions {}", a.pred.display()))?;
    let reports = evaluate(&preds, &m, &a.iou)?;
    let errors = if a.errors {
        a.iou.iter().map(|t| error_distribution(&preds, &m, *t)).collect::<docsynth::Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let mut stdout = std::io::stdout().lock();
    for r in &reports {
        writeln!(stdout, "{}", format_report(r))?;
    }
    for e in &errors {
        writeln!(stdout, "errors at IoU {:.2}", e.iou_threshold)?;
        writeln!(
            stdout,
            "{:<10} {:>10} {:>13} {:>12} {:>7} {:>9}",
            "class", "misplaced", "misclassified", "hallucinated", "missed", "absorbed"
        )?;
        for (c, x) in &e.classes {
            writeln!(
                stdout,
                "{:<10} {:>10} {:>13} {:>12} {:>7} {:>9}",
                c.name(),
                x.misplaced,
                x.misclassified,
                x.hallucinated,
                x.missed,
                x.absorbed
            )?;
        }
        writeln!(stdout)?;
    }
    create_dir(&a.out)?;
    write_json(&a.out.join("eval.json"), &EvalOutput { reports: &reports, errors })?;
    Ok(())
}

fn stats(a: &StatsArgs) -> Result<()> {
    let m = load_manifest(&a.manifest)?;
    let table = corpus_stats(&m);
    create_dir(&a.out)?;
    table.write_csv(&a.out)?;
    println!(
        "{:<10} {:>9} {:>6} {:>8} {:>8} {:>8} {:>8}",
        "class", "instances", "pages", "mean_cx", "mean_cy", "mean_w", "mean_h"
    );
    for s in table.summary() {
        println!(
            "{:<10} {:>9} {:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            s.class.name(),
            s.instances,
            s.pages_with,
            s.mean_center_x,
            s.mean_center_y,
            s.mean_width,
            s.mean_height
        );
    }
    Ok(())
}

fn heuristics(a: &HeuristicsArgs) -> Result<()> {
    let m = load_manifest(&a.manifest)?;
    let preds = PredictionSet::load(&a.pred, a.coords.into())
        .with_context(|| format!("cannot load predictions {}", a.pred.display()))?;
    let which: BTreeSet<_> = a.which.iter().map(|h| (*h).into()).collect();
    let outcome = apply_heuristics(&preds, &m, &which)?;
    create_dir(&a.out)?;
    outcome.kept.save_jsonl(a.out.join("predictions.jsonl"))?;
    write_json(&a.out.join("removed.json"), &outcome.removed)?;
    for h in &outcome.skipped {
        eprintln!("warning: {h:?} heuristic skipped, manifest lacks page numbers");
    }
    println!("kept {} of {} detections, removed {}", outcome.kept.len(), preds.len(), outcome.removed.len());
    Ok(())
}

fn gt_to_pred(a: &GtToPredArgs) -> Result<()> {
    let m = load_manifest(&a.manifest)?;
    let preds = PredictionSet::from_ground_truth(&m);
    create_dir(&a.out)?;
    let dest = a.out.join("predictions.jsonl");
    preds.save_jsonl(&dest)?;
    println!("{} detections written to {}", preds.len(), dest.display());
    Ok(())
}
