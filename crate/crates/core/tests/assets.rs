use std::collections::BTreeSet;
use std::path::Path;

use docsynth::assets::{load_asset_dir, procedural_image, AssetPool, AssetSourceKind, ClassMap, UsagePolicy};
use docsynth::corpus::Generator;
use docsynth::error::Error;
use docsynth::rng::RngSeed;
use docsynth::style::bundled;
use docsynth::ClassLabel;
use image::{Rgb, RgbImage};

fn write_png(path: &Path, w: u32, h: u32, shade: u8) {
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    RgbImage::from_pixel(w, h, Rgb([shade, shade, shade])).save(path).unwrap();
}

fn asset_dir(figures: usize, tables: usize) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..figures {
        write_png(&dir.path().join(format!("figure/f{i:03}.png")), 40 + i as u32, 30, 200);
    }
    for i in 0..tables {
        write_png(&dir.path().join(format!("tables/t{i:03}.png")), 50, 20, 100);
    }
    dir
}

#[test]
fn directory_pool_sizes() {
    let dir = asset_dir(3, 1);
    std::fs::write(dir.path().join("figure/readme.txt"), "not an image").unwrap();
    let pool = load_asset_dir(dir.path(), &ClassMap::default(), UsagePolicy::Once).unwrap();
    let sizes: Vec<(ClassLabel, usize)> = pool.sizes().into_iter().filter(|(_, n)| *n > 0).collect();
    assert_eq!(sizes, vec![(ClassLabel::Figure, 3), (ClassLabel::Table, 1)]);
    let a = pool.checkout(ClassLabel::Table, 1.0, RngSeed::new(0, 0)).unwrap();
    assert_eq!((a.width, a.height, a.source), (50, 20, AssetSourceKind::External));
    assert_eq!(a.id, "tables/t000.png");
}

#[test]
fn corrupt_file_is_named_in_the_error() {
    let dir = asset_dir(2, 0);
    let bad = dir.path().join("figure/broken.png");
    std::fs::write(&bad, b"\x89PNG\r\n\x1a\nnot really").unwrap();
    match load_asset_dir(dir.path(), &ClassMap::default(), UsagePolicy::Once) {
        Err(e @ Error::AssetLoad { .. }) => assert!(e.to_string().contains("broken.png"), "{e}"),
        other => panic!("expected asset load error, got {other:?}"),
    }
}

#[test]
fn once_pool_exhausts_after_its_size() {
    let dir = asset_dir(5, 0);
    let pool = load_asset_dir(dir.path(), &ClassMap::default(), UsagePolicy::Once).unwrap();
    let mut ids = BTreeSet::new();
    for k in 0..5 {
        ids.insert(pool.checkout(ClassLabel::Figure, 1.0, RngSeed::new(1, k)).unwrap().id);
    }
    assert_eq!(ids.len(), 5);
    assert!(matches!(
        pool.checkout(ClassLabel::Figure, 1.0, RngSeed::new(1, 9)),
        Err(Error::ExhaustedAssets(ClassLabel::Figure))
    ));
    assert_eq!(pool.used(ClassLabel::Figure), 5);
}

#[test]
fn replacement_pool_never_exhausts() {
    let dir = asset_dir(2, 0);
    let pool = load_asset_dir(dir.path(), &ClassMap::default(), UsagePolicy::WithReplacement).unwrap();
    for k in 0..50 {
        pool.checkout(ClassLabel::Figure, 1.0, RngSeed::new(2, k)).unwrap();
    }
}

#[test]
fn once_policy_never_repeats_an_asset_in_a_corpus() {
    let dir = asset_dir(400, 0);
    let pool = load_asset_dir(dir.path(), &ClassMap::default(), UsagePolicy::Once)
        .unwrap()
        .with_procedural_fallback(true)
        .shuffled(4);
    let mut gen = Generator::new(bundled("vis").unwrap(), 40, 10, 11);
    gen.assets = pool;
    let corpus = gen.run(None).unwrap();
    let external: Vec<&str> = corpus
        .train
        .annotations
        .iter()
        .chain(&corpus.val.annotations)
        .filter_map(|a| a.asset_id.as_deref())
        .filter(|id| id.starts_with("figure/"))
        .collect();
    let unique: BTreeSet<&str> = external.iter().copied().collect();
    println!("external figures placed: {}", external.len());
    assert!(!external.is_empty());
    assert_eq!(unique.len(), external.len());
}

fn dark(p: &Rgb<u8>) -> bool {
    p.0.iter().map(|&v| v as u32).sum::<u32>() < 3 * 96
}

/// Longest run of dark pixels along one column or row.
fn longest_run(img: &RgbImage, vertical: bool, index: u32) -> u32 {
    let n = if vertical { img.height() } else { img.width() };
    let (mut best, mut cur) = (0, 0);
    for k in 0..n {
        let p = if vertical { img.get_pixel(index, k) } else { img.get_pixel(k, index) };
        cur = if dark(p) { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best
}

/// A vertical dark line in the left half and a horizontal one in the lower half, each spanning over half the image.
fn has_axes(img: &RgbImage) -> bool {
    let (w, h) = img.dimensions();
    let v = (0..w / 2).any(|x| longest_run(img, true, x) * 2 > h);
    let hz = (h / 2..h).any(|y| longest_run(img, false, y) * 2 > w);
    v && hz
}

#[test]
fn procedural_figures_have_axes() {
    let n = 1000;
    let found = (0..n)
        .filter(|&k| {
            let aspect = 0.6 + (k % 13) as f64 * 0.12;
            has_axes(&procedural_image(ClassLabel::Figure, aspect, RngSeed::new(77, k)))
        })
        .count();
    println!("axes detected in {found}/{n}");
    assert!(found * 100 >= n as usize * 99, "{found}");
}

#[test]
fn square_table_placeholder() {
    let a = AssetPool::procedural()
        .checkout(ClassLabel::Table, 1.0, RngSeed::new(5, 5))
        .unwrap();
    assert_eq!(a.width, a.height);
    let img = a.load_image().unwrap();
    assert_eq!(img.width(), img.height());
    assert!(img.pixels().any(dark));
}
