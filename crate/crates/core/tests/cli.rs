//! The `designlint` binary: exit codes, outputs and the fix/diff workflow.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fx(rel: &str) -> String {
    fixtures().join(rel).display().to_string()
}

fn designlint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_designlint"))
        .args(args)
        .env_remove("DESIGNLINT_LLM_URL")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", stderr(o)))
}

#[test]
fn clean_page_exits_zero() {
    let o = designlint(&["audit", &fx("clean.html"), "--offline"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = json(&o);
    assert_eq!(report["issues"].as_array().unwrap().len(), 0);
    assert_eq!(report["run_meta"]["descriptor"], "deterministic");
    assert_eq!(report["run_meta"]["mode"], "static");
    assert!(report["run_meta"].get("timestamp").is_none());
}

#[test]
fn page_with_issues_exits_one() {
    let o = designlint(&["audit", &fx("sites/travel_blog.html"), "--offline"]);
    assert_eq!(code(&o), 1);
    assert!(!json(&o)["issues"].as_array().unwrap().is_empty());
}

#[test]
fn errors_exit_two() {
    let missing = designlint(&["audit", "/nonexistent/page.html", "--offline"]);
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("/nonexistent/page.html"));

    assert_eq!(code(&designlint(&["audit", &fx("clean.html"), "--no-such-flag"])), 2);
    assert_eq!(code(&designlint(&["audit", &fx("clean.html"), "--format", "both"])), 2);
    assert_eq!(code(&designlint(&["audit", &fx("clean.html"), "--category", "blog"])), 2);
    assert_eq!(code(&designlint(&[])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.snapshot.json");
    std::fs::write(&bad, r#"{"source": "x", "viewport": {"width": 0, "height": 1}}"#).unwrap();
    let o = designlint(&["audit", &bad.display().to_string(), "--offline"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("error"), "{}", stderr(&o));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&designlint(&["--help"])), 0);
    assert_eq!(code(&designlint(&["--version"])), 0);
    assert_eq!(code(&designlint(&["audit", "--help"])), 0);
}

#[test]
fn both_formats_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("report");
    let o = designlint(&[
        "audit",
        &fx("w1.snapshot.json"),
        "--ocr",
        &fx("w1.ocr.json"),
        "--format",
        "both",
        "--out",
        &stem.display().to_string(),
        "--offline",
        "--group-by-element",
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    assert_eq!(report["run_meta"]["mode"], "rendered");
    let html = std::fs::read_to_string(stem.with_extension("html")).unwrap();
    assert_eq!(html.matches("<h1").count(), 1);
    assert!(!html.contains("<script"));
    assert!(html.contains("lang=\"en\""));
}

#[test]
fn timestamp_is_opt_in() {
    let o = designlint(&["audit", &fx("clean.html"), "--offline", "--timestamp"]);
    let ts = json(&o)["run_meta"]["timestamp"].as_str().unwrap().to_string();
    assert!(chrono::DateTime::parse_from_rfc3339(&ts).is_ok(), "{ts}");
}

#[test]
fn fix_patch_round_trip_resolves_without_introducing() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).display().to_string();
    let page = fx("sites/recipe_blog.html");
    let o = designlint(&["audit", &page, "--offline", "--out", &p("before.json"), "--emit-patch", &p("fix.css")]);
    assert_eq!(code(&o), 1);
    let css = std::fs::read_to_string(p("fix.css")).unwrap();
    assert!(css.contains('{'));

    let o = designlint(&[
        "audit",
        &page,
        "--apply-patch",
        &p("fix.css"),
        "--offline",
        "--out",
        &p("after.json"),
        "--diff-against",
        &p("before.json"),
    ]);
    assert!(stderr(&o).contains(" 0 introduced"), "{}", stderr(&o));

    let o = designlint(&["diff", &p("before.json"), &p("after.json"), "--patch", &p("fix.css"), "--before-input", &page]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary = json(&o);
    assert!(summary["introduced"].as_array().unwrap().is_empty());
    assert!(!summary["resolved"].as_array().unwrap().is_empty());
    assert!(summary["css_diff"].as_array().unwrap().iter().all(|c| c["new"].is_string()));
}

#[test]
fn header_regression_makes_diff_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).display().to_string();
    std::fs::write(p("header.css"), "header { background-color: #ffffff; }").unwrap();
    let page = fx("sites/travel_blog.html");
    designlint(&["audit", &page, "--offline", "--out", &p("before.json")]);
    designlint(&["audit", &page, "--apply-patch", &p("header.css"), "--offline", "--out", &p("after.json")]);
    let o = designlint(&["diff", &p("before.json"), &p("after.json")]);
    assert_eq!(code(&o), 1);
    let introduced = json(&o)["introduced"].as_array().unwrap().clone();
    assert_eq!(introduced.len(), 1);
    assert_eq!(introduced[0]["category"], "color_contrast");
}

#[test]
fn diff_of_different_pages_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).display().to_string();
    designlint(&["audit", &fx("clean.html"), "--offline", "--out", &p("a.json")]);
    designlint(&["audit", &fx("sites/portfolio.html"), "--offline", "--out", &p("b.json")]);
    assert_eq!(code(&designlint(&["diff", &p("a.json"), &p("b.json")])), 2);
    designlint(&["audit", &fx("sites/portfolio.html"), "--source-id", "site", "--offline", "--out", &p("c.json")]);
    designlint(&["audit", &fx("clean.html"), "--source-id", "site", "--offline", "--out", &p("d.json")]);
    assert_ne!(code(&designlint(&["diff", &p("c.json"), &p("d.json")])), 2);
}

#[test]
fn patch_and_snapshot_commands_write_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).display().to_string();
    std::fs::write(p("fix.css"), "h1 { font-size: 32px; }").unwrap();
    let o = designlint(&["patch", &fx("sites/travel_blog.html"), "--apply", &p("fix.css"), "--out", &p("patched.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let snap = designlint::validate_snapshot(&std::fs::read_to_string(p("patched.json")).unwrap()).unwrap();
    assert!(snap.elements().filter(|n| n.tag == "h1").all(|n| n.style.font_size == 32.0));

    std::fs::write(p("nothing.css"), ".does-not-exist { color: red; }").unwrap();
    let o = designlint(&["patch", &fx("sites/travel_blog.html"), "--apply", &p("nothing.css")]);
    assert_eq!(code(&o), 2);

    let o = designlint(&["patch", &fx("w1.snapshot.json"), "--apply", &p("fix.css")]);
    assert_eq!(code(&o), 2);

    let o = designlint(&["snapshot", &fx("clean.html")]);
    assert_eq!(code(&o), 0);
    designlint::validate_snapshot(&String::from_utf8(o.stdout).unwrap()).unwrap();
}

#[test]
fn trends_build_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("blog.json");
    let o = designlint(&[
        "trends",
        "build",
        &fx("trends/blog"),
        "--category",
        "blog",
        "--out",
        &manifest.display().to_string(),
        "--captured",
        "2026-01-15",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let built: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(built["category"], "blog");
    assert_eq!(built["sites"].as_array().unwrap().len(), 20);

    let shipped = designlint(&["trends", "profile", &fx("trends/blog/manifest.json")]);
    let rebuilt = designlint(&["trends", "profile", &manifest.display().to_string()]);
    assert_eq!(code(&shipped), 0);
    assert_eq!(json(&shipped), json(&rebuilt));
    assert_eq!(json(&shipped)["n_sites"], 20);

    let o = designlint(&["trends", "build", &fx("trends/blog"), "--category", "cooking", "--out", "/tmp/x.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn audit_with_comparisons() {
    let o = designlint(&[
        "audit",
        &fx("w1.snapshot.json"),
        "--reference",
        &fx("w2.snapshot.json"),
        "--trends",
        &fx("trends/blog/manifest.json"),
        "--category",
        "blog",
        "--offline",
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let cmp = &json(&o)["comparison"];
    assert!(!cmp["guideline"].as_array().unwrap().is_empty());
    assert!(!cmp["reference"]["deltas"].as_array().unwrap().is_empty());
    assert_eq!(cmp["trend"]["n_sites"], 20);

    let wrong = designlint(&[
        "audit",
        &fx("w1.snapshot.json"),
        "--trends",
        &fx("trends/blog/manifest.json"),
        "--category",
        "tutorial",
        "--offline",
    ]);
    assert_eq!(code(&wrong), 2);
}

#[test]
fn screenshot_colors_are_attached() {
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("shot.png");
    let img = image::RgbaImage::from_fn(64, 64, |x, _| {
        if x < 40 {
            image::Rgba([255, 255, 255, 255])
        } else {
            image::Rgba([13, 71, 161, 255])
        }
    });
    img.save(&png).unwrap();
    let o = designlint(&["audit", &fx("w1.snapshot.json"), "--screenshot", &png.display().to_string(), "--offline"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let image = json(&o)["color_scheme"]["scheme"]["image"].clone();
    let colors: Vec<(u64, u64, u64)> = image
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let c = &e["color"];
            (c["r"].as_u64().unwrap(), c["g"].as_u64().unwrap(), c["b"].as_u64().unwrap())
        })
        .collect();
    assert!(colors.contains(&(255, 255, 255)) && colors.contains(&(13, 71, 161)), "{colors:?}");

    let broken = dir.path().join("broken.png");
    std::fs::write(&broken, b"not a png").unwrap();
    let o = designlint(&["audit", &fx("w1.snapshot.json"), "--screenshot", &broken.display().to_string(), "--offline"]);
    assert_eq!(code(&o), 2);
}
