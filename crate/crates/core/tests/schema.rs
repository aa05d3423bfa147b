//! The published snapshot schema and the loader agree on what a snapshot is.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use designlint::input::attach_ocr;
use designlint::{validate_snapshot, StaticPage};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn schema() -> jsonschema::Validator {
    let raw = std::fs::read_to_string(root().join("docs/snapshot.schema.json")).unwrap();
    let value: Value = serde_json::from_str(&raw).unwrap();
    assert!(jsonschema::meta::is_valid(&value), "schema is not a valid JSON Schema");
    jsonschema::validator_for(&value).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{what}: {errors:#?}");
}

fn snapshot_files() -> Vec<PathBuf> {
    let mut files = vec![fixtures().join("w1.snapshot.json"), fixtures().join("w2.snapshot.json")];
    for cat in std::fs::read_dir(fixtures().join("trends")).unwrap() {
        for f in std::fs::read_dir(cat.unwrap().path()).unwrap() {
            let p = f.unwrap().path();
            if p.to_string_lossy().ends_with(".snapshot.json") {
                files.push(p);
            }
        }
    }
    files.sort();
    files
}

#[test]
fn fixture_snapshots_match_the_schema() {
    let v = schema();
    let files = snapshot_files();
    assert!(files.len() > 20);
    for p in files {
        let raw = std::fs::read_to_string(&p).unwrap();
        assert_valid(&v, &serde_json::from_str(&raw).unwrap(), &p.display().to_string());
        validate_snapshot(&raw).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

#[test]
fn static_and_ocr_snapshots_match_the_schema() {
    let v = schema();
    let mut pages = vec![fixtures().join("clean.html"), fixtures().join("w1.html")];
    for f in std::fs::read_dir(fixtures().join("sites")).unwrap() {
        pages.push(f.unwrap().path());
    }
    for p in pages {
        let s = StaticPage::from_html(&std::fs::read_to_string(&p).unwrap(), "page").snapshot;
        assert_valid(&v, &serde_json::from_str(&s.to_json()).unwrap(), &p.display().to_string());
    }
    let w1 = validate_snapshot(&std::fs::read_to_string(fixtures().join("w1.snapshot.json")).unwrap()).unwrap();
    let with_ocr = attach_ocr(w1, &fixtures().join("w1.ocr.json")).unwrap();
    let doc: Value = serde_json::from_str(&with_ocr.to_json()).unwrap();
    assert!(doc["ocrLines"].as_array().is_some_and(|l| !l.is_empty()));
    assert_valid(&v, &doc, "w1 with OCR lines");
}

fn minimal() -> Value {
    json!({
        "source": "t",
        "viewport": {"width": 800, "height": 600},
        "root": {
            "id": "b", "tag": "body", "classes": [],
            "style": {
                "fontSize": 16, "fontFamilies": ["Arial"], "lineHeight": 24,
                "color": {"r": 0, "g": 0, "b": 0, "a": 1},
                "backgroundColor": {"r": 255, "g": 255, "b": 255},
                "textAlign": "left",
                "margin": {"top": 0, "right": 0, "bottom": 0, "left": 0},
                "padding": {"top": 0, "right": 0, "bottom": 0, "left": 0},
                "display": "block", "opacity": 1
            },
            "box": {"x": 0, "y": 0, "width": 800, "height": 40},
            "text": "Hello",
            "lineBoxes": [{"x": 0, "y": 0, "width": 40, "height": 24}],
            "children": []
        },
        "ocrLines": [{"text": "Hello", "vertices": [[0, 0], [0.05, 0], [0.05, 0.04], [0, 0.04]],
                      "pageWidth": 800, "pageHeight": 600}],
        "screenshotColors": [{"r": 255, "g": 255, "b": 255}]
    })
}

fn mutate(f: impl FnOnce(&mut Value)) -> Value {
    let mut v = minimal();
    f(&mut v);
    v
}

/// Every document the schema rejects, the loader rejects too.
#[test]
fn schema_rejections_are_loader_rejections() {
    let v = schema();
    let good = minimal();
    assert_valid(&v, &good, "minimal");
    validate_snapshot(&good.to_string()).unwrap();

    let bad = [
        ("unknown top-level key", mutate(|d| d["extra"] = json!(1))),
        ("unknown style key", mutate(|d| d["root"]["style"]["fontWeight"] = json!(700))),
        ("missing source", mutate(|d| _ = d.as_object_mut().unwrap().remove("source"))),
        ("missing style", mutate(|d| _ = d["root"].as_object_mut().unwrap().remove("style"))),
        ("missing fontSize", mutate(|d| _ = d["root"]["style"].as_object_mut().unwrap().remove("fontSize"))),
        ("zero viewport", mutate(|d| d["viewport"]["width"] = json!(0))),
        ("fractional viewport", mutate(|d| d["viewport"]["width"] = json!(800.5))),
        ("channel out of range", mutate(|d| d["root"]["style"]["color"]["r"] = json!(256))),
        ("alpha above one", mutate(|d| d["root"]["style"]["color"]["a"] = json!(1.5))),
        ("negative opacity", mutate(|d| d["root"]["style"]["opacity"] = json!(-0.1))),
        ("zero font size", mutate(|d| d["root"]["style"]["fontSize"] = json!(0))),
        ("bad textAlign", mutate(|d| d["root"]["style"]["textAlign"] = json!("middle"))),
        ("negative padding", mutate(|d| d["root"]["style"]["padding"]["top"] = json!(-1))),
        ("negative box width", mutate(|d| d["root"]["box"]["width"] = json!(-5))),
        ("empty id", mutate(|d| d["root"]["id"] = json!(""))),
        ("vertex outside the unit square", mutate(|d| d["ocrLines"][0]["vertices"][1][0] = json!(1.2))),
        ("three vertices", mutate(|d| _ = d["ocrLines"][0]["vertices"].as_array_mut().unwrap().pop())),
        ("zero page width", mutate(|d| d["ocrLines"][0]["pageWidth"] = json!(0))),
        ("empty OCR text", mutate(|d| d["ocrLines"][0]["text"] = json!(""))),
        ("children not an array", mutate(|d| d["root"]["children"] = json!({}))),
    ];
    for (what, doc) in bad {
        assert!(!v.is_valid(&doc), "schema accepted: {what}");
        assert!(validate_snapshot(&doc.to_string()).is_err(), "loader accepted: {what}");
    }
}

/// Rules the schema cannot state are still enforced by the loader.
#[test]
fn loader_enforces_cross_field_rules() {
    let v = schema();
    let dup = mutate(|d| {
        let child = d["root"].clone();
        d["root"]["children"] = json!([child]);
    });
    assert!(v.is_valid(&dup));
    let err = validate_snapshot(&dup.to_string()).unwrap_err().to_string();
    assert!(err.contains("duplicate id"), "{err}");

    let lines_without_text = mutate(|d| _ = d["root"].as_object_mut().unwrap().remove("text"));
    assert!(v.is_valid(&lines_without_text));
    assert!(validate_snapshot(&lines_without_text.to_string()).is_err());

    let flat_quad = mutate(|d| d["ocrLines"][0]["vertices"] = json!([[0.1, 0.1], [0.2, 0.1], [0.3, 0.1], [0.4, 0.1]]));
    assert!(v.is_valid(&flat_quad));
    assert!(validate_snapshot(&flat_quad.to_string()).is_err());
}

#[test]
fn loader_errors_name_the_json_path() {
    let doc = mutate(|d| d["root"]["style"]["fontSize"] = json!("big"));
    let err = validate_snapshot(&doc.to_string()).unwrap_err().to_string();
    assert!(err.contains("root.style.fontSize"), "{err}");
}
