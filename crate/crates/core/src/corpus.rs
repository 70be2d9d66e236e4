//! Corpus orchestration: split generation, label noise, downsampling and
//! per-class statistics.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assets::{AssetPool, UsagePolicy};
use crate::compose::{compose_page_with, ComposeOptions, PageLayout};
use crate::error::{Error, Result};
use crate::fonts::FontBook;
use crate::label::ClassLabel;
use crate::manifest::{assign_documents, AnnotationRecord, DatasetManifest, ImageRecord, ManifestInfo};
use crate::render::{pixel_annotations, render_page, RenderSpec};
use crate::rng::{mix64, Purpose, RngSeed};
use crate::sampler::sample_page_config;
use crate::style::StyleProfile;
use crate::textgen::TextSource;

/// Noise rates above this are accepted with a warning.
pub const NOISE_WARN_RATE: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Split {
    Train,
    Val,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub train: DatasetManifest,
    pub val: DatasetManifest,
    /// Elements dropped after failed placement, over both splits.
    pub dropped: usize,
    /// Text elements truncated while rendering.
    pub truncated: usize,
}

/// Full generation pipeline with swappable content sources.
#[derive(Debug, Clone)]
pub struct Generator {
    pub profile: StyleProfile,
    pub n_train: usize,
    pub n_val: usize,
    pub master_seed: u64,
    pub render: RenderSpec,
    pub compose: ComposeOptions,
    pub assets: AssetPool,
    pub text: TextSource,
    pub fonts: FontBook,
}

impl Generator {
    pub fn new(profile: StyleProfile, n_train: usize, n_val: usize, master_seed: u64) -> Self {
        Generator {
            profile,
            n_train,
            n_val,
            master_seed,
            render: RenderSpec::default(),
            compose: ComposeOptions::default(),
            assets: AssetPool::procedural(),
            text: TextSource::bundled(),
            fonts: FontBook::builtin(),
        }
    }

    /// Stream ids of a split: train pages come first, then validation pages.
    pub fn stream_ids(&self, split: Split) -> std::ops::Range<u64> {
        let (t, v) = (self.n_train as u64, self.n_val as u64);
        match split {
            Split::Train => 0..t,
            Split::Val => t..t + v,
        }
    }

    pub fn page_seed(&self, stream_id: u64) -> RngSeed {
        RngSeed::new(self.master_seed, stream_id)
    }

    /// Composes one page of the corpus.
    pub fn compose_one(&self, stream_id: u64, assets: &AssetPool) -> Result<PageLayout> {
        let seed = self.page_seed(stream_id);
        let config = sample_page_config(&self.profile, seed)?;
        compose_page_with(&config, assets, &self.text, seed, &self.compose)
    }

    /// Asset pools per split; disjoint under the `once` policy.
    fn split_pools(&self) -> (AssetPool, AssetPool) {
        match self.assets.policy() {
            UsagePolicy::Once => {
                let mut parts = self.assets.partition(&[self.n_train, self.n_val]);
                let val = parts.pop().expect("two parts");
                let train = parts.pop().expect("two parts");
                (train, val)
            }
            UsagePolicy::WithReplacement => (self.assets.clone(), self.assets.clone()),
        }
    }

    pub fn compose_split(&self, split: Split, assets: &AssetPool) -> Result<Vec<PageLayout>> {
        let ids = self.stream_ids(split);
        let sequential = self.assets.policy() == UsagePolicy::Once
            && ClassLabel::VISUAL.iter().any(|c| assets.is_external(*c));
        if sequential {
            ids.map(|id| self.compose_one(id, assets)).collect()
        } else {
            ids.into_par_iter().map(|id| self.compose_one(id, assets)).collect()
        }
    }

    fn info(&self, split: Split) -> ManifestInfo {
        let mut info = ManifestInfo::new(self.profile.name.clone());
        info.master_seed = Some(self.master_seed);
        info.split = Some(split.name().to_string());
        info.asset_policy = Some(
            match self.assets.policy() {
                UsagePolicy::Once => "once",
                UsagePolicy::WithReplacement => "with-replacement",
            }
            .to_string(),
        );
        info.font_substitutions = self.fonts.map().substitutions();
        info
    }

    /// Builds a split manifest; renders and writes PNGs when `image_dir` is given.
    pub fn build_split(&self, split: Split, layouts: &[PageLayout], image_dir: Option<&Path>) -> Result<(DatasetManifest, usize)> {
        let (w, h) = (self.render.width, self.render.height);
        let per_page: Vec<(Vec<crate::render::PixelAnnotation>, usize)> = match image_dir {
            None => layouts.iter().map(|l| (pixel_annotations(l, w, h), 0)).collect(),
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                layouts
                    .par_iter()
                    .map(|l| {
                        let page = render_page(l, &self.render, &self.fonts)?;
                        let path = dir.join(page_file_name(l.page_id));
                        page.image.save(&path).map_err(|e| Error::AssetLoad {
                            path: path.clone(),
                            reason: e.to_string(),
                        })?;
                        Ok((page.annotations, page.truncated.len()))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let mut images = Vec::with_capacity(layouts.len());
        let mut annotations = Vec::new();
        let mut truncated = 0;
        for (layout, (anns, t)) in layouts.iter().zip(per_page) {
            truncated += t;
            images.push(ImageRecord {
                id: layout.page_id,
                file_name: page_file_name(layout.page_id),
                width: w,
                height: h,
                page_seed: Some(layout.seed),
                page_kind: Some(layout.page_kind),
                document_id: None,
                page_number: None,
            });
            for a in &anns {
                let id = annotations.len() as u64 + 1;
                annotations.push(AnnotationRecord::from_pixel(id, layout.page_id, a));
            }
        }
        assign_documents(&mut images);
        let mut info = self.info(split);
        if image_dir.is_some() {
            info.image_dir = Some(split.name().to_string());
        }
        Ok((DatasetManifest::new(info, images, annotations), truncated))
    }

    /// Generates both splits. With `out_dir`, writes `<out>/train/*.png`,
    /// `<out>/val/*.png`, `<out>/train.json` and `<out>/val.json`.
    pub fn run(&self, out_dir: Option<&Path>) -> Result<Corpus> {
        self.render.validate()?;
        let (train_pool, val_pool) = self.split_pools();
        let mut dropped = 0;
        let mut truncated = 0;
        let mut manifests = Vec::new();
        for (split, pool) in [(Split::Train, &train_pool), (Split::Val, &val_pool)] {
            let layouts = self.compose_split(split, pool)?;
            dropped += layouts.iter().map(|l| l.dropped.len()).sum::<usize>();
            let image_dir: Option<PathBuf> = out_dir.map(|d| d.join(split.name()));
            let (m, t) = self.build_split(split, &layouts, image_dir.as_deref())?;
            truncated += t;
            if let Some(d) = out_dir {
                m.save(d.join(format!("{}.json", split.name())))?;
            }
            manifests.push(m);
        }
        let val = manifests.pop().expect("two splits");
        let train = manifests.pop().expect("two splits");
        if dropped > 0 {
            log::info!("{dropped} elements dropped after failed placement");
        }
        Ok(Corpus {
            train,
            val,
            dropped,
            truncated,
        })
    }
}

pub fn page_file_name(stream_id: u64) -> String {
    format!("page_{stream_id:06}.png")
}

/// Composes both splits with default sources and returns their manifests
/// (pixel annotations at the default page size) without rendering.
pub fn generate_corpus(profile: &StyleProfile, n_train: usize, n_val: usize, master_seed: u64) -> Result<Corpus> {
    Generator::new(profile.clone(), n_train, n_val, master_seed).run(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub rate: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.rate) || self.rate.is_nan() {
            return Err(Error::validation("rate", format!("{} outside [0, 1]", self.rate)));
        }
        if self.rate > NOISE_WARN_RATE {
            log::warn!("noise rate {} exceeds {NOISE_WARN_RATE}", self.rate);
        }
        Ok(())
    }
}

/// Flips each non-body-text annotation with probability `rate` to a class
/// drawn uniformly from the other seven eligible classes.
pub fn inject_label_noise(m: &DatasetManifest, cfg: &NoiseConfig) -> Result<DatasetManifest> {
    cfg.validate()?;
    let mut out = m.clone();
    let mut rng = RngSeed::new(cfg.seed, 0).rng(Purpose::Noise);
    for a in &mut out.annotations {
        let Some(label) = a.label() else { continue };
        if label == ClassLabel::BodyText {
            continue;
        }
        if rng.gen::<f64>() < cfg.rate {
            let others: Vec<ClassLabel> = ClassLabel::NOISE_ELIGIBLE
                .iter()
                .copied()
                .filter(|c| *c != label)
                .collect();
            a.category_id = others[rng.gen_range(0..others.len())].id();
        }
    }
    out.info.noise_rate = cfg.rate;
    out.info.noise_seed = Some(cfg.seed);
    Ok(out)
}

/// `round(fraction · n)` with halves rounded up.
pub fn downsample_count(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64) + 0.5).floor() as usize
}

/// Keeps a uniform sample of pages without replacement, in original order.
pub fn downsample(m: &DatasetManifest, fraction: f64, seed: u64) -> Result<DatasetManifest> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::validation("fraction", format!("{fraction} outside (0, 1]")));
    }
    let n = m.images.len();
    let k = downsample_count(n, fraction).min(n);
    let mut rng = RngSeed::new(seed, 0).rng(Purpose::Downsample);
    let mut keep = index::sample(&mut rng, n, k).into_vec();
    keep.sort_unstable();
    let images: Vec<ImageRecord> = keep.iter().map(|&i| m.images[i].clone()).collect();
    let ids: std::collections::HashSet<u64> = images.iter().map(|i| i.id).collect();
    let annotations = m
        .annotations
        .iter()
        .filter(|a| ids.contains(&a.image_id))
        .cloned()
        .collect();
    let mut info = m.info.clone();
    info.sample_fraction *= fraction;
    info.sample_seeds.push(seed);
    Ok(DatasetManifest::new(info, images, annotations))
}

/// Seed for the next step of a halving chain.
pub fn chained_seed(seed: u64) -> u64 {
    mix64(seed ^ 0x5eed_c4a1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceStat {
    pub class: ClassLabel,
    pub image_id: u64,
    pub center_x: f64,
    pub center_y: f64,
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageCount {
    pub image_id: u64,
    pub class: ClassLabel,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub class: ClassLabel,
    pub instances: usize,
    pub pages_with: usize,
    pub mean_center_x: f64,
    pub mean_center_y: f64,
    pub mean_width: f64,
    pub mean_height: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsTable {
    pub instances: Vec<InstanceStat>,
    pub page_counts: Vec<PageCount>,
}

impl StatsTable {
    pub fn is_empty(&self) -> bool {
        self.instances.is_empty() && self.page_counts.is_empty()
    }

    pub fn of_class(&self, class: ClassLabel) -> impl Iterator<Item = &InstanceStat> {
        self.instances.iter().filter(move |s| s.class == class)
    }

    pub fn summary(&self) -> Vec<ClassSummary> {
        ClassLabel::ALL
            .iter()
            .map(|&class| {
                let xs: Vec<&InstanceStat> = self.of_class(class).collect();
                let n = xs.len();
                let mean = |f: fn(&InstanceStat) -> f64| {
                    if n == 0 {
                        0.0
                    } else {
                        xs.iter().map(|s| f(s)).sum::<f64>() / n as f64
                    }
                };
                ClassSummary {
                    class,
                    instances: n,
                    pages_with: self
                        .page_counts
                        .iter()
                        .filter(|p| p.class == class && p.count > 0)
                        .count(),
                    mean_center_x: mean(|s| s.center_x),
                    mean_center_y: mean(|s| s.center_y),
                    mean_width: mean(|s| s.width),
                    mean_height: mean(|s| s.height),
                }
            })
            .collect()
    }

    /// Writes `instances.csv`, `page_counts.csv` and `summary.csv` into `dir`.
    pub fn write_csv(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_rows(&dir.join("instances.csv"), &self.instances)?;
        write_rows(&dir.join("page_counts.csv"), &self.page_counts)?;
        write_rows(&dir.join("summary.csv"), &self.summary())
    }
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::AssetLoad {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Normalized centroids, extents and per-page counts for every class.
pub fn corpus_stats(m: &DatasetManifest) -> StatsTable {
    let index = m.image_index();
    let mut instances = Vec::new();
    let mut counts: BTreeMap<u64, BTreeMap<ClassLabel, u32>> = m
        .images
        .iter()
        .map(|i| (i.id, ClassLabel::ALL.iter().map(|c| (*c, 0)).collect()))
        .collect();
    for a in &m.annotations {
        let (Some(class), Some(img)) = (a.label(), index.get(&a.image_id)) else {
            continue;
        };
        let (w, h) = (img.width as f64, img.height as f64);
        let b = a.bbox;
        instances.push(InstanceStat {
            class,
            image_id: a.image_id,
            center_x: (b[0] + b[2] / 2.0) / w,
            center_y: (b[1] + b[3] / 2.0) / h,
            width: b[2] / w,
            height: b[3] / h,
        });
        *counts.entry(a.image_id).or_default().entry(class).or_default() += 1;
    }
    let page_counts = counts
        .into_iter()
        .flat_map(|(image_id, per)| {
            per.into_iter().map(move |(class, count)| PageCount { image_id, class, count })
        })
        .collect();
    StatsTable {
        instances,
        page_counts,
    }
}
