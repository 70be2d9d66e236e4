mod common;

use std::collections::BTreeSet;

use docsynth::corpus::{downsample, inject_label_noise, NoiseConfig};
use docsynth::eval::{
    apply_heuristics, average_precision, iou, match_detections, CoordSpace, Detection, Heuristic, PredictionSet,
    ScoredOutcome,
};
use docsynth::sampler::{sample_page_config, sample_placement, PageKind};
use docsynth::style::{bundled, merge_profiles, FontRole, StyleProfile, BUNDLED_NAMES};
use docsynth::textgen::{pseudo_text, TextRole};
use docsynth::{BBox, ClassLabel, Range, RngSeed};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn bbox() -> impl Strategy<Value = BBox> {
    (0.0..0.9f64, 0.0..0.9f64, 0.001..0.5f64, 0.001..0.5f64).prop_map(|(x, y, w, h)| BBox::new(x, y, w, h))
}

fn scored() -> impl Strategy<Value = Vec<(BBox, f64)>> {
    prop::collection::vec((bbox(), 0.0..1.0f64), 0..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn iou_is_symmetric_and_bounded(a in bbox(), b in bbox()) {
        let ab = iou(&a, &b);
        prop_assert_eq!(ab, iou(&b, &a));
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((iou(&a, &a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matching_conserves_counts(preds in scored(), gts in prop::collection::vec(bbox(), 0..10), thr in 0.05..1.0f64) {
        let r = match_detections(&preds, &gts, thr);
        prop_assert_eq!(r.tp.len() + r.fp.len(), preds.len());
        prop_assert_eq!(r.tp.len() + r.fn_.len(), gts.len());
        let used_p: BTreeSet<usize> = r.tp.iter().map(|t| t.0).chain(r.fp.iter().copied()).collect();
        let used_g: BTreeSet<usize> = r.tp.iter().map(|t| t.1).chain(r.fn_.iter().copied()).collect();
        prop_assert_eq!(used_p.len(), preds.len());
        prop_assert_eq!(used_g.len(), gts.len());
        for (p, g, v) in &r.tp {
            prop_assert!(*v >= thr);
            prop_assert_eq!(*v, iou(&preds[*p].0, &gts[*g]));
        }
    }

    #[test]
    fn adding_a_true_positive_never_lowers_ap(
        outcomes in prop::collection::vec((0.0..1.0f64, any::<bool>()), 0..20),
        extra_gt in 1usize..5,
        conf in 0.0..1.0f64,
    ) {
        let o: Vec<ScoredOutcome> = outcomes.iter().map(|&(confidence, tp)| ScoredOutcome { confidence, tp }).collect();
        let n_gt = o.iter().filter(|x| x.tp).count() + extra_gt;
        let before = average_precision(&o, n_gt).unwrap();
        let mut more = o.clone();
        more.push(ScoredOutcome { confidence: conf, tp: true });
        let after = average_precision(&more, n_gt).unwrap();
        prop_assert!(after >= before - 1e-12, "{} -> {}", before, after);
    }

    #[test]
    fn adding_a_trailing_false_positive_never_raises_ap(
        outcomes in prop::collection::vec((0.01..1.0f64, any::<bool>()), 0..20),
        extra_gt in 0usize..5,
    ) {
        let o: Vec<ScoredOutcome> = outcomes.iter().map(|&(confidence, tp)| ScoredOutcome { confidence, tp }).collect();
        let n_gt = (o.iter().filter(|x| x.tp).count() + extra_gt).max(1);
        let before = average_precision(&o, n_gt).unwrap();
        let mut more = o.clone();
        more.push(ScoredOutcome { confidence: 0.0, tp: false });
        prop_assert!(average_precision(&more, n_gt).unwrap() <= before + 1e-12);
    }

    #[test]
    fn heuristics_are_idempotent(dets in prop::collection::vec((0u64..6, 0u32..9, bbox(), 0.0..1.0f64), 0..40)) {
        let m = heuristic_manifest();
        let preds = PredictionSet::new(
            CoordSpace::Normalized,
            dets.into_iter()
                .map(|(image_id, c, bbox, confidence)| Detection { image_id, label: ClassLabel::from_id(c).unwrap(), bbox, confidence })
                .collect(),
        );
        let all: BTreeSet<Heuristic> = [Heuristic::PageOrder, Heuristic::Position].into();
        let once = apply_heuristics(&preds, &m, &all).unwrap();
        let twice = apply_heuristics(&once.kept, &m, &all).unwrap();
        prop_assert_eq!(&twice.kept, &once.kept);
        prop_assert!(twice.removed.is_empty());
        prop_assert_eq!(once.kept.len() + once.removed.len(), preds.len());
    }

    #[test]
    fn noise_only_changes_eligible_labels(rate in 0.0..=1.0f64, seed in any::<u64>(), n in 1usize..200) {
        let m = labelled_manifest(n, seed);
        let noisy = inject_label_noise(&m, &NoiseConfig { rate, seed }).unwrap();
        prop_assert_eq!(noisy.images, m.images.clone());
        prop_assert_eq!(noisy.annotations.len(), m.annotations.len());
        for (a, b) in m.annotations.iter().zip(&noisy.annotations) {
            prop_assert_eq!((a.id, a.image_id, a.bbox, a.area), (b.id, b.image_id, b.bbox, b.area));
            if a.label() == Some(ClassLabel::BodyText) || b.label() == Some(ClassLabel::BodyText) {
                prop_assert_eq!(a.category_id, b.category_id);
            }
        }
    }

    #[test]
    fn downsample_is_a_subset(n in 1usize..300, fraction in 0.01..=1.0f64, seed in any::<u64>()) {
        let m = labelled_manifest(n, seed);
        let sub = downsample(&m, fraction, seed).unwrap();
        prop_assert_eq!(sub.images.len(), ((fraction * n as f64) + 0.5).floor() as usize);
        let parent: Vec<_> = m.images.iter().collect();
        for img in &sub.images {
            prop_assert!(parent.contains(&img));
        }
        let kept: BTreeSet<u64> = sub.images.iter().map(|i| i.id).collect();
        let expect: Vec<_> = m.annotations.iter().filter(|a| kept.contains(&a.image_id)).cloned().collect();
        prop_assert_eq!(sub.annotations, expect);
    }

    #[test]
    fn placement_stays_in_ranges(name in prop::sample::select(BUNDLED_NAMES.to_vec()), seed in any::<u64>()) {
        let p = bundled(name).unwrap();
        for label in ClassLabel::VISUAL {
            for spec in p.placements.for_class(label) {
                let b = sample_placement(spec, RngSeed::new(seed, 1));
                prop_assert!(b.is_valid_normalized());
                prop_assert!(spec.width.contains(b.w) || b.w < spec.width.min);
                prop_assert!(spec.height.contains(b.h) || b.h < spec.height.min);
            }
        }
    }

    #[test]
    fn text_length_within_bounds(approx in 1usize..300, seed in any::<u64>(), role in prop::sample::select(vec![TextRole::Body, TextRole::Abstract, TextRole::Caption])) {
        let t = pseudo_text(role, approx, RngSeed::new(seed, 0)).unwrap();
        let lo = ((0.8 * approx as f64).floor() as usize).max(1);
        let hi = ((1.2 * approx as f64).ceil() as usize).max(1);
        prop_assert!((lo..=hi).contains(&t.tokens.len()), "{} not in [{}, {}]", t.tokens.len(), lo, hi);
        prop_assert_eq!(t, pseudo_text(role, approx, RngSeed::new(seed, 0)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn merge_covers_both_inputs(a in jittered(), b in jittered()) {
        let m = merge_profiles(&a, &b);
        let mv = serde_json::to_value(&m).unwrap();
        for side in [&a, &b] {
            let sv = serde_json::to_value(side).unwrap();
            if let Err(path) = covers(&mv, &sv, "") {
                return Err(TestCaseError::fail(format!("merged profile does not cover {path}")));
            }
        }
        prop_assert_eq!(merge_profiles(&a, &a), a);
    }

    #[test]
    fn profile_survives_save_and_load(p in jittered()) {
        prop_assume!(p.validate().is_ok());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.toml");
        p.save(&path).unwrap();
        prop_assert_eq!(docsynth::load_style_profile(&path).unwrap(), p);
    }
}

/// Every range of a bundled profile replaced by a random sub-range.
fn jittered() -> impl Strategy<Value = StyleProfile> {
    (prop::sample::select(BUNDLED_NAMES.to_vec()), any::<u64>()).prop_map(|(name, seed)| {
        let mut v = serde_json::to_value(bundled(name).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        shrink_ranges(&mut v, &mut rng);
        serde_json::from_value(v).unwrap()
    })
}

fn as_pair(v: &Value) -> Option<(f64, f64)> {
    match v.as_array()?.as_slice() {
        [a, b] if a.is_number() && b.is_number() => Some((a.as_f64()?, b.as_f64()?)),
        _ => None,
    }
}

fn shrink_ranges(v: &mut Value, rng: &mut ChaCha8Rng) {
    if let Some((lo, hi)) = as_pair(v) {
        let integer = v[0].is_u64() && v[1].is_u64();
        let (mut a, mut b) = (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        *v = if integer {
            serde_json::json!([a.round() as u64, b.round() as u64])
        } else {
            serde_json::json!([a, b])
        };
        return;
    }
    match v {
        Value::Array(xs) => xs.iter_mut().for_each(|x| shrink_ranges(x, rng)),
        Value::Object(m) => m.values_mut().for_each(|x| shrink_ranges(x, rng)),
        _ => {}
    }
}

/// Checks that every range in `small` lies inside its counterpart in `big`
/// and every listed option of `small` is present in `big`. Returns the offending path.
fn covers(big: &Value, small: &Value, path: &str) -> Result<(), String> {
    if let (Some((bl, bh)), Some((sl, sh))) = (as_pair(big), as_pair(small)) {
        return if bl <= sl && sh <= bh { Ok(()) } else { Err(path.to_string()) };
    }
    match (big, small) {
        (Value::Object(b), Value::Object(s)) => {
            for (k, sv) in s {
                match b.get(k) {
                    Some(bv) => covers(bv, sv, &format!("{path}.{k}"))?,
                    None if sv.is_null() => {}
                    None => return Err(format!("{path}.{k}")),
                }
            }
            Ok(())
        }
        (Value::Array(b), Value::Array(s)) => {
            for (i, sv) in s.iter().enumerate() {
                let p = format!("{path}[{i}]");
                let found = match sv.get("slot") {
                    Some(slot) => b.iter().find(|bv| bv.get("slot") == Some(slot)).map(|bv| covers(bv, sv, &p)),
                    None => b.iter().any(|bv| bv == sv).then_some(Ok(())),
                };
                found.unwrap_or(Err(p))?;
            }
            Ok(())
        }
        // Names and page-type tallies combine rather than cover.
        _ => Ok(()),
    }
}

fn heuristic_manifest() -> docsynth::DatasetManifest {
    let images = (0..6)
        .map(|i| common::image(i, if i % 3 == 0 { PageKind::Title } else { PageKind::Inner }, i / 3, (i % 3 + 1) as u32))
        .collect();
    common::manifest(images, &[])
}

fn labelled_manifest(n: usize, seed: u64) -> docsynth::DatasetManifest {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = (0..n as u64).map(|i| common::image(i, PageKind::Inner, 0, 2)).collect();
    let gts: Vec<_> = (0..n * 2)
        .map(|_| {
            let label = ClassLabel::ALL[rng.gen_range(0..9)];
            (rng.gen_range(0..n as u64), label, [rng.gen_range(0.0..500.0), rng.gen_range(0.0..500.0), 20.0, 30.0])
        })
        .collect();
    common::manifest(images, &gts)
}

/// Every sampled scalar lies in its profile range, over 10^5 draws per profile.
#[test]
fn page_config_values_stay_in_ranges() {
    let in_range = |r: &Range, v: f64| r.min <= v && v <= r.max;
    for name in BUNDLED_NAMES {
        let p = bundled(name).unwrap();
        for k in 0..100_000u64 {
            let c = sample_page_config(&p, RngSeed::new(k, k % 7)).unwrap();
            assert!(in_range(&p.margins.top, c.margins.top), "{name} top");
            assert!(in_range(&p.margins.left, c.margins.left), "{name} left");
            assert!(in_range(&p.column_width, c.column_width), "{name} column_width");
            assert!(in_range(&p.column_spacing, c.column_spacing), "{name} spacing");
            assert!(c.margins.usable_width() > 0.0 && c.margins.usable_height() > 0.0);
            assert!(2.0 * c.column_width + c.column_spacing <= c.margins.usable_width() + 0.01 + 1e-12);
            for (kind, v) in &c.distances {
                assert!(in_range(p.distances.get(*kind), *v), "{name} {kind:?}");
            }
            for (role, f) in &c.fonts {
                assert!(f.spec.size_pt.contains(f.size_pt), "{name} {role:?}");
                assert!(p.fonts_for(*role).contains(&f.spec));
            }
            for label in [ClassLabel::Figure, ClassLabel::Table, ClassLabel::Algorithm, ClassLabel::Equation] {
                let r = match label {
                    ClassLabel::Figure => &p.counts.figure,
                    ClassLabel::Table => &p.counts.table,
                    ClassLabel::Algorithm => &p.counts.algorithm,
                    _ => &p.counts.equation,
                };
                assert!(r.contains(c.count(label)), "{name} {label}");
            }
            assert!(p.counts.mini_figure.contains(c.mini_count(ClassLabel::Figure)));
            assert!(p.counts.mini_table.contains(c.mini_count(ClassLabel::Table)));
            assert!(p.keywords_line.contains(&c.keywords_line));
            assert!(p.fonts_for(FontRole::Body).is_empty() || c.font(FontRole::Body).is_some());
        }
    }
}
