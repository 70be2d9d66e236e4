//! Bundled profiles against the transcribed parameter tables in `fixtures/`.
//! Mismatches panic with the offending field.
#![allow(dead_code)]

use docsynth::style::bundled;
use serde_json::Value;

const PAGE_ATTRIBUTES: &str = include_str!("../fixtures/page_attributes.tsv");
const FONT_ATTRIBUTES: &str = include_str!("../fixtures/font_attributes.tsv");
const PROFILES: [&str; 3] = ["acl", "vis", "cs150"];

fn rows(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split('\t').collect())
}

fn numbers(cell: &str) -> Vec<f64> {
    cell.split_whitespace().map(|t| t.parse().expect("numeric cell")).collect()
}

pub fn profile_json(name: &str) -> Value {
    serde_json::to_value(bundled(name).expect("bundled profile")).unwrap()
}

fn at<'a>(v: &'a Value, path: &str) -> &'a Value {
    path.split('.').fold(v, |v, k| &v[k])
}

fn pair(v: &Value) -> [f64; 2] {
    let a = v.as_array().unwrap_or_else(|| panic!("range expected, got {v}"));
    [a[0].as_f64().unwrap(), a[1].as_f64().unwrap()]
}

fn slot_name(class: &str, index: usize) -> &'static str {
    match class {
        "figure" | "table" => ["mini", "left", "right", "center"][index],
        _ => ["left", "right", "center"][index],
    }
}

/// Compares one table cell; returns the number of numeric values checked.
fn check_cell(p: &Value, field: &str, cell: &[f64], who: &str) -> usize {
    let ctx = format!("{who}.{field}");
    match field {
        "page_types" => {
            let t = &p["page_types"];
            assert_eq!(t["title_pages"].as_f64().unwrap(), cell[0], "{ctx}");
            assert_eq!(t["inner_pages"].as_f64().unwrap(), cell[1], "{ctx}");
            2
        }
        "caption" => {
            for (i, key) in ["center_y", "width", "height"].iter().enumerate() {
                assert_eq!(pair(&p["caption"][key]), [cell[2 * i], cell[2 * i + 1]], "{ctx}.{key}");
            }
            6
        }
        "placements.title" | "placements.author" => {
            let specs = at(p, field).as_array().unwrap();
            assert_eq!(specs.len(), 1, "{ctx}");
            check_placement(&specs[0], &cell[..8], &ctx);
            8
        }
        "abstract" => {
            let mut i = 0;
            let mut seen = 0;
            while i < cell.len() {
                let key = ["left_column", "two_column"][cell[i] as usize];
                // A row has four values, or five when the width cell lists a middle value too.
                let next = cell[i + 1..].iter().position(|v| *v == 1.0).map_or(cell.len(), |k| i + 1 + k);
                let vals = &cell[i + 1..next];
                let (widths, heights) = vals.split_at(vals.len() - 2);
                let w_min = widths.iter().cloned().fold(f64::INFINITY, f64::min);
                let w_max = widths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let e = &p["abstract"][key];
                assert_eq!(pair(&e["width"]), [w_min, w_max], "{ctx}.{key}.width");
                assert_eq!(pair(&e["height"]), [heights[0], heights[1]], "{ctx}.{key}.height");
                seen += 1;
                i = next;
            }
            let declared = ["left_column", "two_column"].iter().filter(|k| !p["abstract"][**k].is_null()).count();
            assert_eq!(seen, declared, "{ctx}: extra abstract layouts");
            cell.len()
        }
        f if f.starts_with("placements.") => {
            let class = &f["placements.".len()..];
            let specs = at(p, f).as_array().unwrap();
            assert_eq!(cell.len() % 9, 0, "{ctx}");
            assert_eq!(specs.len(), cell.len() / 9, "{ctx}: slot count");
            for row in cell.chunks(9) {
                let slot = slot_name(class, row[0] as usize);
                let spec = specs
                    .iter()
                    .find(|s| s["slot"] == slot)
                    .unwrap_or_else(|| panic!("{ctx}: missing slot {slot}"));
                check_placement(spec, &row[1..], &format!("{ctx}.{slot}"));
            }
            cell.len()
        }
        f => {
            assert_eq!(cell.len(), 2, "{ctx}");
            assert_eq!(pair(at(p, f)), [cell[0], cell[1]], "{ctx}");
            2
        }
    }
}

fn check_placement(spec: &Value, v: &[f64], ctx: &str) {
    for (i, key) in ["center_x", "center_y", "width", "height"].iter().enumerate() {
        assert_eq!(pair(&spec[key]), [v[2 * i], v[2 * i + 1]], "{ctx}.{key}");
    }
}

/// Checks every page-attribute cell; returns `(fields, values)` checked.
pub fn check_page_attributes() -> (usize, usize) {
    let profiles: Vec<Value> = PROFILES.iter().map(|n| profile_json(n)).collect();
    let mut checked = 0;
    let mut fields = 0;
    for row in rows(PAGE_ATTRIBUTES) {
        let field = row[0];
        fields += 1;
        for (k, name) in PROFILES.iter().enumerate() {
            checked += check_cell(&profiles[k], field, &numbers(row[k + 1]), name);
        }
    }
    (fields, checked)
}

/// Checks every font cell; returns the number of cells.
pub fn check_font_attributes() -> usize {
    let mut n = 0;
    for row in rows(FONT_ATTRIBUTES) {
        let (profile, role, family, weight) = (row[0], row[1], row[2], row[3]);
        let size: [f64; 2] = [row[4].parse().unwrap(), row[5].parse().unwrap()];
        let p = profile_json(profile);
        let specs = p["fonts"][role].as_array().unwrap_or_else(|| panic!("{profile}: no {role} fonts"));
        let found = specs
            .iter()
            .any(|s| s["family"] == family && s["weight"] == weight && pair(&s["size_pt"]) == size);
        assert!(found, "{profile}.{role}: no {weight} {family} at {size:?}");
        n += 1;
    }
    n
}
