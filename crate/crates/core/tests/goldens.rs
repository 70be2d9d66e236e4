//! Golden outputs for text generation and rendering. Run with
//! `DOCSYNTH_BLESS=1` to rewrite them after an intentional change.

use std::path::PathBuf;

use docsynth::corpus::Generator;
use docsynth::render::render_page;
use docsynth::style::bundled;
use docsynth::textgen::pseudo_authors;
use docsynth::RngSeed;

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden").join(name);
    if std::env::var_os("DOCSYNTH_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

#[test]
fn vis_author_block() {
    let vis = bundled("vis").unwrap();
    let block = pseudo_authors(4, &vis, RngSeed::new(2024, 3)).unwrap();
    let text: String = block.lines().iter().map(|l| l.join(" ") + "\n").collect();
    golden("vis_authors.txt", &text);
}

#[test]
fn acl_page_ink_mask() {
    let gen = Generator::new(bundled("acl").unwrap(), 1, 0, 7);
    let layout = gen.compose_one(0, &gen.assets).unwrap();
    let page = render_page(&layout, &gen.render, &gen.fonts).unwrap();
    let mask = page.image.pixels().map(|p| (p.0.iter().map(|&v| v as u32).sum::<u32>() < 3 * 128) as u8);
    let ink = mask.clone().filter(|&m| m == 1).count();
    let boxes = serde_json::to_string(&page.annotations).unwrap();
    let summary = format!(
        "size {}x{}\nink_pixels {ink}\nink_hash {:016x}\nannotation_hash {:016x}\n",
        page.image.width(),
        page.image.height(),
        fnv1a(mask),
        fnv1a(boxes.bytes())
    );
    golden("acl_page_ink.txt", &summary);
}
