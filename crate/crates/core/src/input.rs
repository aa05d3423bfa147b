//! Loading audit inputs: static HTML pages or snapshot documents, plus
//! optional OCR lines and a screenshot.

use std::path::Path;

use crate::color::{dominant_colors, Raster};
use crate::error::{Error, Result};
use crate::ingest::StaticPage;
use crate::model::{validate_snapshot, validate_value, PageSnapshot};
use crate::ocr::OcrLine;

/// Dominant colors kept from a screenshot.
pub const SCREENSHOT_COLORS: usize = 6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum InputKind {
    /// Snapshot when the file is JSON, static HTML otherwise.
    #[default]
    Auto,
    Static,
    Snapshot,
}

#[derive(Debug, Clone)]
pub struct LoadedInput {
    pub snapshot: PageSnapshot,
    /// The file's bytes, hashed into the report.
    pub raw: Vec<u8>,
    /// The parsed page when the input was HTML (patches need it).
    pub page: Option<StaticPage>,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn looks_like_json(path: &Path, raw: &[u8]) -> bool {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("json") => true,
        Some("html" | "htm" | "xhtml") => false,
        _ => raw.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{'),
    }
}

pub fn load_input(path: &Path, kind: InputKind) -> Result<LoadedInput> {
    let raw = read(path)?;
    let snapshot_input = match kind {
        InputKind::Auto => looks_like_json(path, &raw),
        InputKind::Static => false,
        InputKind::Snapshot => true,
    };
    if snapshot_input {
        let text = String::from_utf8(raw.clone())
            .map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
        let snapshot = validate_snapshot(&text)?;
        Ok(LoadedInput { snapshot, raw, page: None })
    } else {
        let doc = crate::ingest::parse_document_bytes(&raw)?;
        let snapshot = crate::ingest::resolve_cascade(&doc, &path.display().to_string());
        Ok(LoadedInput {
            snapshot: snapshot.clone(),
            raw,
            page: Some(StaticPage { document: doc, snapshot }),
        })
    }
}

/// Attaches OCR lines (a JSON array of lines) and re-validates.
pub fn attach_ocr(snapshot: PageSnapshot, path: &Path) -> Result<PageSnapshot> {
    let raw = read(path)?;
    let mut de = serde_json::Deserializer::from_slice(&raw);
    let lines: Vec<OcrLine> = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let p = e.path().to_string();
        Error::schema(format!("ocrLines{p}"), e.into_inner().to_string())
    })?;
    let mut value = serde_json::to_value(&snapshot).expect("snapshot serializes");
    value["ocrLines"] = serde_json::to_value(lines).expect("lines serialize");
    let mut out = validate_value(value)?;
    out.notes = snapshot.notes;
    Ok(out)
}

/// Decodes a screenshot (PNG or BMP) into a raster.
pub fn load_raster(path: &Path) -> Result<Raster> {
    let img = image::open(path)
        .map_err(|e| Error::Parse(format!("decoding {}: {e}", path.display())))?
        .to_rgba8();
    let (w, h) = img.dimensions();
    let pixels = img.pixels().map(|p| p.0).collect();
    Ok(Raster::new(w, h, pixels))
}

/// Replaces the snapshot's screenshot colors with the screenshot's dominant
/// colors.
pub fn attach_screenshot(mut snapshot: PageSnapshot, path: &Path) -> Result<PageSnapshot> {
    let raster = load_raster(path)?;
    snapshot.screenshot_colors = Some(dominant_colors(&raster, SCREENSHOT_COLORS)?);
    Ok(snapshot)
}
