mod common;

use std::collections::{BTreeMap, HashMap};

use docsynth::corpus::{chained_seed, corpus_stats, downsample, inject_label_noise, Generator, NoiseConfig};
use docsynth::manifest::DatasetManifest;
use docsynth::sampler::PageKind;
use docsynth::style::bundled;
use docsynth::ClassLabel;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const ELIGIBLE: [ClassLabel; 8] = [
    ClassLabel::Abstract,
    ClassLabel::Algorithm,
    ClassLabel::Author,
    ClassLabel::Caption,
    ClassLabel::Equation,
    ClassLabel::Figure,
    ClassLabel::Table,
    ClassLabel::Title,
];

/// 10 000 eligible annotations (1250 per class) and 2 000 body-text ones over 1 000 pages.
fn noise_manifest() -> DatasetManifest {
    let images = (0..1000).map(|i| common::image(i, PageKind::Inner, 0, 2)).collect();
    let mut gts = Vec::new();
    for k in 0..10_000u64 {
        gts.push((k % 1000, ELIGIBLE[(k % 8) as usize], [1.0, 2.0 + k as f64 % 7.0, 30.0, 40.0]));
    }
    for k in 0..2_000u64 {
        gts.push((k % 1000, ClassLabel::BodyText, [5.0, 6.0, 70.0, 80.0]));
    }
    common::manifest(images, &gts)
}

#[test]
fn noise_flip_count_and_destination_uniformity() {
    let m = noise_manifest();
    let noisy = inject_label_noise(&m, &NoiseConfig { rate: 0.10, seed: 42 }).unwrap();
    let mut flips = 0;
    let mut body_flips = 0;
    let mut pairs: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut from: BTreeMap<u32, usize> = BTreeMap::new();
    for (a, b) in m.annotations.iter().zip(&noisy.annotations) {
        assert_eq!((a.id, a.image_id, a.bbox, a.area), (b.id, b.image_id, b.bbox, b.area));
        if a.category_id != b.category_id {
            if a.label() == Some(ClassLabel::BodyText) {
                body_flips += 1;
            }
            assert_ne!(b.label(), Some(ClassLabel::BodyText));
            flips += 1;
            *pairs.entry((a.category_id, b.category_id)).or_default() += 1;
            *from.entry(a.category_id).or_default() += 1;
        }
    }
    // Binomial(10 000, 0.1): mean 1000, sigma 30.
    println!("flips: {flips}, body-text flips: {body_flips}");
    assert!((900..=1100).contains(&flips), "{flips}");
    assert_eq!(body_flips, 0);

    let mut chi2 = 0.0;
    for src in ELIGIBLE {
        let n = *from.get(&src.id()).unwrap_or(&0) as f64;
        let expected = n / 7.0;
        for dst in ELIGIBLE.iter().filter(|d| **d != src) {
            let o = *pairs.get(&(src.id(), dst.id())).unwrap_or(&0) as f64;
            chi2 += (o - expected).powi(2) / expected;
        }
    }
    let dof = 8.0 * 6.0;
    let p = 1.0 - ChiSquared::new(dof).unwrap().cdf(chi2);
    println!("destination chi2 = {chi2:.2} on {dof} dof, p = {p:.4}");
    assert!(p > 0.001, "chi2 {chi2} p {p}");
    assert_eq!(noisy.info.noise_rate, 0.10);
    assert_eq!(noisy.info.noise_seed, Some(42));
}

#[test]
fn zero_rate_changes_only_provenance() {
    let m = noise_manifest();
    let noisy = inject_label_noise(&m, &NoiseConfig { rate: 0.0, seed: 1 }).unwrap();
    assert_eq!(noisy.annotations, m.annotations);
    assert_eq!(noisy.images, m.images);
    assert_eq!(noisy.info.noise_seed, Some(1));
}

#[test]
fn full_rate_flips_every_eligible_label() {
    let m = noise_manifest();
    let noisy = inject_label_noise(&m, &NoiseConfig { rate: 1.0, seed: 3 }).unwrap();
    let flipped = m
        .annotations
        .iter()
        .zip(&noisy.annotations)
        .filter(|(a, b)| a.category_id != b.category_id)
        .count();
    assert_eq!(flipped, 10_000);
}

#[test]
fn invalid_rates_are_rejected() {
    let m = noise_manifest();
    for rate in [-0.1, 1.5, f64::NAN] {
        assert!(inject_label_noise(&m, &NoiseConfig { rate, seed: 0 }).is_err());
    }
}

fn pages(n: u64) -> DatasetManifest {
    let images = (0..n).map(|i| common::image(i, PageKind::Inner, 0, 2)).collect();
    let gts: Vec<_> = (0..n).map(|i| (i, ClassLabel::Figure, [i as f64 % 50.0, 0.0, 10.0, 10.0])).collect();
    common::manifest(images, &gts)
}

#[test]
fn halving_counts_from_fifteen_thousand() {
    let m = pages(15_000);
    let want = [7500, 3750, 1875, 938];
    for (f, n) in [0.5, 0.25, 0.125, 0.0625].iter().zip(want) {
        assert_eq!(downsample(&m, *f, 9).unwrap().images.len(), n, "fraction {f}");
    }
    let mut cur = m.clone();
    let mut seed = 9;
    let mut got = Vec::new();
    for _ in 0..4 {
        cur = downsample(&cur, 0.5, seed).unwrap();
        seed = chained_seed(seed);
        got.push(cur.images.len());
    }
    assert_eq!(got, want);
    assert_eq!(cur.info.sample_fraction, 0.0625);
    assert_eq!(cur.info.sample_seeds.len(), 4);
}

#[test]
fn downsample_keeps_strict_subsets_with_identical_pages() {
    let profile = bundled("acl").unwrap();
    let corpus = Generator::new(profile, 200, 0, 5).run(None).unwrap();
    let m = corpus.train;
    let sub = downsample(&m, 0.5, 77).unwrap();
    assert!(sub.images.len() < m.images.len());
    let full: HashMap<u64, _> = m.images.iter().map(|i| (i.id, i)).collect();
    for img in &sub.images {
        assert_eq!(full[&img.id], img);
    }
    let by_image = m.annotations_by_image();
    let sub_by_image = sub.annotations_by_image();
    for img in &sub.images {
        assert_eq!(by_image[&img.id], sub_by_image[&img.id]);
    }
    assert_eq!(
        sub.annotations.len(),
        sub_by_image.values().map(Vec::len).sum::<usize>()
    );
    assert_eq!(downsample(&m, 0.5, 77).unwrap(), sub);
    assert!(downsample(&m, 0.0, 1).is_err());
    assert!(downsample(&m, 1.2, 1).is_err());
}

#[test]
fn identical_runs_write_identical_manifests() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let profile = bundled("vis").unwrap();
    for dir in [a.path(), b.path()] {
        Generator::new(profile.clone(), 6, 3, 1234).run(Some(dir)).unwrap();
    }
    for name in ["train.json", "val.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    for i in 0..6 {
        let f = format!("train/page_{i:06}.png");
        assert_eq!(std::fs::read(a.path().join(&f)).unwrap(), std::fs::read(b.path().join(&f)).unwrap());
    }
}

#[test]
fn splits_use_disjoint_streams() {
    let profile = bundled("acl").unwrap();
    let c = Generator::new(profile, 5, 4, 8).run(None).unwrap();
    let train: Vec<u64> = c.train.images.iter().map(|i| i.id).collect();
    let val: Vec<u64> = c.val.images.iter().map(|i| i.id).collect();
    assert_eq!(train, (0..5).collect::<Vec<_>>());
    assert_eq!(val, (5..9).collect::<Vec<_>>());
}

#[test]
fn stats_cover_every_annotation() {
    let profile = bundled("cs150").unwrap();
    let m = Generator::new(profile, 40, 0, 3).run(None).unwrap().train;
    let s = corpus_stats(&m);
    assert_eq!(s.instances.len(), m.annotations.len());
    for i in &s.instances {
        assert!((0.0..=1.0).contains(&i.center_x) && (0.0..=1.0).contains(&i.center_y));
    }
    let per_page: usize = s.page_counts.iter().map(|p| p.count as usize).sum();
    assert_eq!(per_page, m.annotations.len());
    let dir = tempfile::tempdir().unwrap();
    s.write_csv(dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("instances.csv")).unwrap();
    assert_eq!(text.lines().count(), m.annotations.len() + 1);
}
