//! Regenerates the synthetic test fixtures under `tests/fixtures/`:
//! rendered snapshots (`w1`, `w2`) laid out by a toy block layout, OCR lines
//! for `w1`, and a 20-site trend corpus per category with a manifest and the
//! ground-truth values the corpus was generated from.
//!
//! Run with `cargo run -p designlint-core --example gen_fixtures`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use designlint::compare::{TrendCategory, TrendManifest};
use designlint::model::{BoundingBox, ElementNode, PageSnapshot};
use designlint::ocr::OcrLine;
use designlint::StaticPage;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Average glyph advance as a fraction of the font size.
const CHAR_WIDTH: f64 = 0.5;
const CAPTURED: &str = "2026-01-15";

fn zero_subtree(node: &mut ElementNode, x: f64, y: f64) {
    node.bbox = Some(BoundingBox::new(x, y, 0.0, 0.0));
    node.line_boxes = None;
    for c in &mut node.children {
        zero_subtree(c, x, y);
    }
}

fn wrap(text: &str, max_chars: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut cur = String::new();
    for word in text.split_whitespace() {
        if !cur.is_empty() && cur.chars().count() + 1 + word.chars().count() > max_chars {
            lines.push(std::mem::take(&mut cur));
        }
        if !cur.is_empty() {
            cur.push(' ');
        }
        cur.push_str(word);
    }
    if !cur.is_empty() {
        lines.push(cur);
    }
    lines
}

fn is_inline(node: &ElementNode) -> bool {
    node.style.display.starts_with("inline")
}

/// Lays out an inline element at `(x, y)`; returns its border box.
fn layout_inline(node: &mut ElementNode, x: f64, y: f64) -> BoundingBox {
    let s = &node.style;
    let cw = s.font_size * CHAR_WIDTH;
    let lh = s.effective_line_height();
    let text_w = node.text.as_deref().map_or(0.0, |t| t.trim().chars().count() as f64 * cw);
    let b = BoundingBox::new(x, y, text_w + s.padding.left + s.padding.right, lh + s.padding.top + s.padding.bottom);
    if text_w > 0.0 {
        node.line_boxes = Some(vec![BoundingBox::new(x + s.padding.left, y + s.padding.top, text_w, lh)]);
    }
    node.bbox = Some(b);
    for c in &mut node.children {
        zero_subtree(c, x, y);
    }
    b
}

/// Lays out a block element in a containing block starting at `(x, y)` of
/// width `avail`; returns the outer height including margins.
fn layout_block(node: &mut ElementNode, x: f64, y: f64, avail: f64) -> f64 {
    if node.style.display == "none" {
        zero_subtree(node, x, y);
        return 0.0;
    }
    let (m, p) = (node.style.margin, node.style.padding);
    let (bx, by) = (x + m.left, y + m.top);
    let bw = (avail - m.left - m.right).max(0.0);
    let (cx, cy) = (bx + p.left, by + p.top);
    let cwidth = (bw - p.left - p.right).max(0.0);
    let mut cursor = cy;
    if let Some(text) = node.text.as_deref().filter(|t| !t.trim().is_empty()) {
        let cw = node.style.font_size * CHAR_WIDTH;
        let lh = node.style.effective_line_height();
        let max_chars = ((cwidth / cw).floor() as usize).max(1);
        let lines = wrap(text, max_chars);
        node.line_boxes = Some(
            lines
                .iter()
                .enumerate()
                .map(|(i, l)| BoundingBox::new(cx, cursor + i as f64 * lh, l.chars().count() as f64 * cw, lh))
                .collect(),
        );
        cursor += lines.len() as f64 * lh;
    }
    let (mut pen_x, mut row_h) = (cx, 0.0f64);
    for child in &mut node.children {
        if is_inline(child) {
            let (ml, mr, mt, mb) = (
                child.style.margin.left,
                child.style.margin.right,
                child.style.margin.top,
                child.style.margin.bottom,
            );
            let b = layout_inline(child, pen_x + ml, cursor + mt);
            if b.right() > cx + cwidth && pen_x > cx {
                cursor += row_h;
                pen_x = cx;
                row_h = 0.0;
                layout_inline(child, pen_x + ml, cursor + mt);
            }
            pen_x += ml + b.width + mr;
            row_h = row_h.max(mt + b.height + mb);
        } else {
            if row_h > 0.0 {
                cursor += row_h;
                pen_x = cx;
                row_h = 0.0;
            }
            cursor += layout_block(child, cx, cursor, cwidth);
        }
    }
    cursor += row_h;
    let height = cursor - by + p.bottom;
    node.bbox = Some(BoundingBox::new(bx, by, bw, height));
    m.top + height + m.bottom
}

/// Static page resolved and laid out into a rendered snapshot.
fn render(html: &str, source: &str) -> PageSnapshot {
    let mut snapshot = StaticPage::from_html(html, source).snapshot;
    let width = snapshot.viewport.width as f64;
    layout_block(&mut snapshot.root, 0.0, 0.0, width);
    snapshot.relink();
    snapshot
}

/// OCR lines for every line box, normalized to a full-page screenshot.
fn ocr_lines(snapshot: &PageSnapshot) -> Vec<OcrLine> {
    let w = snapshot.viewport.width as f64;
    let h = designlint::ocr::page_height(snapshot);
    let mut out = Vec::new();
    for n in snapshot.elements() {
        let (Some(text), Some(lines)) = (n.text.as_deref(), n.line_boxes.as_ref()) else { continue };
        let max_chars = lines.iter().map(|b| b.width).fold(0.0, f64::max) / (n.style.font_size * CHAR_WIDTH);
        let words = wrap(text, max_chars.round().max(1.0) as usize);
        for (b, t) in lines.iter().zip(words) {
            let (x0, y0, x1, y1) = (b.x / w, b.y / h, b.right() / w, b.bottom() / h);
            out.push(OcrLine {
                text: t,
                vertices: [[x0, y0], [x1, y0], [x1, y1], [x0, y1]].map(|[x, y]| [x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)]),
                page_width: w as u32,
                page_height: h.round() as u32,
            });
        }
    }
    out
}

const W1_HTML: &str = r#"<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8"><title>Hillside Walks</title>
<style>
body { font-family: Georgia, serif; font-size: 14px; color: #9e9e9e; background-color: #ffffff; margin: 0; }
header { background-color: #0d47a1; padding: 12px; }
header h1 { color: #ffffff; font-size: 18px; margin: 0 0 8px 0; }
nav a { color: #90caf9; margin-right: 2px; }
main { padding: 16px 24px 16px 24px; }
h2 { font-size: 22px; margin: 0 0 8px 0; }
p { line-height: 1.2; margin: 0 0 8px 0; }
p.intro { margin-left: 3px; }
footer { background-color: #f5f5f5; padding: 24px; }
footer p { color: #c8c8c8; font-size: 12px; text-align: center; }
</style></head>
<body>
<header><h1>Hillside Walks: notes from a year of weekend rambles across the northern ridges and valleys</h1><nav><a href="/">Home</a><a href="/routes">Routes</a><a href="/gear">Gear</a></nav></header>
<main>
<h2>Choosing a route</h2>
<p class="intro">Every walk starts with a map, a weather forecast and an honest look at how much daylight is left. The best routes loop back to where you parked, climb early while legs are fresh, and leave the steep descents for when the path is dry and the views are open.</p>
<p>Ridge paths are exposed, so pack a windproof layer even in summer. Valley paths are sheltered but can flood after heavy rain; check the river levels the night before and have a higher alternative ready in case the footbridges are closed.</p>
<p>Keep a small notebook of times and distances. After a few months you will know your own pace on climbs and descents, and planning a new route becomes a matter of minutes rather than guesswork.</p>
</main>
<footer><p>Photographs and routes by the author, all rights reserved.</p></footer>
</body></html>"#;

const W2_HTML: &str = r#"<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8"><title>Open Trails</title>
<style>
body { font-family: "Open Sans", Arial, sans-serif; font-size: 18px; line-height: 1.6; color: #1b1b1b; background-color: #ffffff; margin: 0; }
header { background-color: #f1f5f9; padding: 24px; }
header h1 { font-size: 32px; margin: 0 0 8px 0; }
nav { padding: 24px; }
nav a { color: #1d3f8f; margin-right: 16px; }
main { padding: 24px 300px 24px 300px; }
h2 { font-size: 26px; margin: 0 0 12px 0; }
p { margin: 0 0 16px 0; }
input { padding: 24px; color: #9a9a9a; background-color: #ffffff; margin-bottom: 8px; }
footer { background-color: #f1f5f9; padding: 24px; }
</style></head>
<body>
<header><h1>Open Trails</h1><nav><a href="/">Home</a><a href="/maps">Maps</a></nav></header>
<main>
<h2>Before you set out</h2>
<p>Check the forecast, tell someone your route and carry more water than you think you need on warm days.</p>
<p>Paths change with the seasons, so read recent trip reports and allow extra time for mud in spring.</p>
<input type="text" value="Search trails">
</main>
<footer><p>Maintained by volunteers.</p></footer>
</body></html>"#;

#[derive(Debug, Clone, Serialize)]
struct SiteTruth {
    file: String,
    body_font_px: f64,
    title_font_px: f64,
    line_height_ratio: f64,
    margin_px: f64,
    padding_px: f64,
    body_family: String,
}

struct Dist {
    body: &'static [(f64, u32)],
    title: &'static [(f64, u32)],
    line_height: &'static [(f64, u32)],
    margin: &'static [(f64, u32)],
    padding: &'static [(f64, u32)],
    families: &'static [(&'static str, u32)],
    backgrounds: &'static [&'static str],
    texts: &'static [&'static str],
}

fn dist(category: TrendCategory) -> Dist {
    match category {
        TrendCategory::Blog => Dist {
            body: &[(16.0, 6), (18.0, 4), (17.0, 2), (15.0, 2), (20.0, 1)],
            title: &[(24.0, 5), (28.0, 3), (32.0, 2), (22.0, 2)],
            line_height: &[(1.6, 5), (1.5, 3), (1.8, 2), (1.4, 1)],
            margin: &[(16.0, 5), (20.0, 3), (24.0, 2), (12.0, 1)],
            padding: &[(24.0, 5), (32.0, 3), (16.0, 2)],
            families: &[("Open Sans", 5), ("Georgia", 3), ("Merriweather", 2), ("Lato", 2)],
            backgrounds: &["#ffffff", "#fafafa", "#fffaf0", "#f5f5f5"],
            texts: &["#222222", "#333333", "#1a1a1a"],
        },
        TrendCategory::Tutorial => Dist {
            body: &[(16.0, 7), (15.0, 3), (14.0, 2), (18.0, 2)],
            title: &[(24.0, 4), (20.0, 4), (28.0, 2)],
            line_height: &[(1.5, 6), (1.6, 3), (1.4, 2)],
            margin: &[(12.0, 4), (16.0, 4), (8.0, 2)],
            padding: &[(16.0, 4), (24.0, 4), (12.0, 2)],
            families: &[("Roboto", 5), ("Arial", 3), ("Source Sans Pro", 2)],
            backgrounds: &["#ffffff", "#f8f9fa", "#f4f4f4"],
            texts: &["#212529", "#333333"],
        },
        TrendCategory::PersonalWebsite => Dist {
            body: &[(18.0, 5), (16.0, 5), (20.0, 2)],
            title: &[(36.0, 4), (28.0, 3), (48.0, 2)],
            line_height: &[(1.7, 4), (1.6, 4), (1.5, 2)],
            margin: &[(24.0, 5), (16.0, 3), (32.0, 2)],
            padding: &[(32.0, 4), (48.0, 3), (24.0, 3)],
            families: &[("Inter", 4), ("Helvetica", 3), ("Georgia", 3)],
            backgrounds: &["#ffffff", "#121212", "#fdf6e3"],
            texts: &["#111111", "#e0e0e0", "#586e75"],
        },
        TrendCategory::OrganizationWebsite => Dist {
            body: &[(16.0, 8), (14.0, 3), (18.0, 2)],
            title: &[(32.0, 4), (40.0, 3), (28.0, 3)],
            line_height: &[(1.5, 6), (1.4, 3), (1.6, 2)],
            margin: &[(16.0, 6), (24.0, 3), (8.0, 2)],
            padding: &[(24.0, 6), (40.0, 3), (16.0, 2)],
            families: &[("Helvetica", 4), ("Roboto", 4), ("Arial", 3)],
            backgrounds: &["#ffffff", "#f0f4f8"],
            texts: &["#1f2933", "#222222"],
        },
        TrendCategory::NewsMagazine => Dist {
            body: &[(17.0, 5), (18.0, 4), (16.0, 4), (20.0, 1)],
            title: &[(30.0, 4), (36.0, 3), (24.0, 3)],
            line_height: &[(1.5, 5), (1.4, 4), (1.6, 2)],
            margin: &[(20.0, 4), (16.0, 4), (12.0, 2)],
            padding: &[(16.0, 5), (24.0, 4), (12.0, 1)],
            families: &[("Georgia", 5), ("Times New Roman", 3), ("Arial", 3)],
            backgrounds: &["#ffffff", "#fff1e5", "#f9f9f9"],
            texts: &["#121212", "#33302e"],
        },
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, weighted: &[(T, u32)]) -> T {
    weighted.choose_weighted(rng, |(_, w)| *w).expect("non-empty weights").0
}

const PARAGRAPHS: &[&str] = &[
    "Small habits compound over months, and the easiest way to keep one is to make it part of a routine you already have.",
    "The first draft is for getting ideas down; editing is where the structure appears and unnecessary words fall away.",
    "A good reference page answers the common question in its first paragraph and leaves the edge cases for later sections.",
    "Local history societies keep surprising archives, from parish maps to photographs of streets that no longer exist.",
    "Testing on a slow connection reveals which parts of a page matter and which can wait until everything else has loaded.",
    "Most recipes forgive small changes, but baking rewards weighing ingredients and following the order of the steps.",
];

fn trend_site(rng: &mut ChaCha8Rng, d: &Dist, file: &str) -> (String, SiteTruth) {
    let body = pick(rng, d.body);
    let title = pick(rng, d.title);
    let lh = pick(rng, d.line_height);
    let margin = pick(rng, d.margin);
    let padding = pick(rng, d.padding);
    let family = pick(rng, d.families);
    let bg = *d.backgrounds.choose(rng).expect("backgrounds");
    let fg = *d.texts.choose(rng).expect("texts");
    let h1 = title + 8.0;
    // Side gutters narrow the text column to a plausible measure.
    let gutter = *[320, 360, 400].choose(rng).expect("gutters");
    let mut paras: Vec<&str> = PARAGRAPHS.to_vec();
    paras.shuffle(rng);
    let generic = if matches!(family, "Georgia" | "Merriweather" | "Times New Roman") {
        "serif"
    } else {
        "sans-serif"
    };
    let html = format!(
        r#"<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8"><title>{file}</title>
<style>
* {{ margin: 0; padding: 0; }}
body {{ font-family: "{family}", {generic}; font-size: {body}px; line-height: {lh}; color: {fg}; background-color: {bg}; }}
header, main, footer {{ padding: {padding}px; }}
main {{ padding-left: {gutter}px; padding-right: {gutter}px; }}
h1 {{ font-size: {h1}px; margin-bottom: {margin}px; }}
h2 {{ font-size: {title}px; margin-bottom: {margin}px; }}
p, li {{ margin-bottom: {margin}px; }}
footer p {{ font-size: 12px; }}
</style></head>
<body>
<header><h1>Site {file}</h1></header>
<main>
<h2>Latest</h2>
<p>{p0}</p>
<p>{p1}</p>
<h2>Notes</h2>
<p>{p2}</p>
<ul><li>{p3}</li><li>{p4}</li><li>{p5}</li></ul>
<h2>Elsewhere</h2>
<p>{p0}</p>
<p>{p1}</p>
<p>{p2}</p>
</main>
<footer><p>Thanks for reading.</p></footer>
</body></html>
"#,
        p0 = paras[0],
        p1 = paras[1],
        p2 = paras[2],
        p3 = paras[3],
        p4 = paras[4],
        p5 = paras[5],
    );
    let truth = SiteTruth {
        file: file.to_string(),
        body_font_px: body,
        title_font_px: title,
        line_height_ratio: lh,
        margin_px: margin,
        padding_px: padding,
        body_family: family.to_string(),
    };
    (html, truth)
}

fn write(path: &Path, text: &str) {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).expect("create fixture dir");
    }
    fs::write(path, text).unwrap_or_else(|e| panic!("writing {}: {e}", path.display()));
}

fn main() {
    let root: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures"));

    let w1 = render(W1_HTML, "w1");
    write(&root.join("w1.html"), W1_HTML);
    write(&root.join("w1.snapshot.json"), &w1.to_json());
    write(
        &root.join("w1.ocr.json"),
        &serde_json::to_string_pretty(&ocr_lines(&w1)).expect("ocr lines serialize"),
    );
    let w2 = render(W2_HTML, "w2");
    write(&root.join("w2.html"), W2_HTML);
    write(&root.join("w2.snapshot.json"), &w2.to_json());

    for (ci, category) in TrendCategory::ALL.into_iter().enumerate() {
        let d = dist(category);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + ci as u64);
        let dir = root.join("trends").join(category.as_str());
        let mut truths = Vec::new();
        let mut sites = Vec::new();
        for i in 1..=20 {
            let file = format!("site-{i:02}.snapshot.json");
            let (html, truth) = trend_site(&mut rng, &d, &file);
            let snapshot = render(&html, &format!("{}/{}", category.as_str(), file));
            write(&dir.join(&file), &serde_json::to_string(&snapshot).expect("snapshot serializes"));
            sites.push(file);
            truths.push(truth);
        }
        let manifest = TrendManifest {
            category,
            sites,
            captured: CAPTURED.to_string(),
        };
        write(
            &dir.join("manifest.json"),
            &serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
        );
        let truth: BTreeMap<&str, &Vec<SiteTruth>> = [("sites", &truths)].into();
        write(
            &dir.join("truth.json"),
            &serde_json::to_string_pretty(&truth).expect("truth serializes"),
        );
    }
    println!("fixtures written to {}", root.display());
}
