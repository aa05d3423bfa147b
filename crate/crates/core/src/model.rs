//! Snapshot data model shared by every audit pass.
//!
//! A [`PageSnapshot`] is the unit that gets audited: an element tree with a
//! fully resolved subset of computed style, optional geometry, optional OCR
//! lines and optional dominant screenshot colors. Snapshots are immutable once
//! validated.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ocr::OcrLine;

/// An sRGB color with straight (non-premultiplied) alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RgbaColor {
    pub r: u8,
    pub g: u8,
    pub b: u8,
    #[serde(default = "opaque")]
    pub a: f64,
}

fn opaque() -> f64 {
    1.0
}

impl RgbaColor {
    pub const WHITE: RgbaColor = RgbaColor::rgb(255, 255, 255);
    pub const BLACK: RgbaColor = RgbaColor::rgb(0, 0, 0);
    pub const TRANSPARENT: RgbaColor = RgbaColor {
        r: 0,
        g: 0,
        b: 0,
        a: 0.0,
    };

    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        RgbaColor { r, g, b, a: 1.0 }
    }

    pub const fn rgba(r: u8, g: u8, b: u8, a: f64) -> Self {
        RgbaColor { r, g, b, a }
    }

    pub fn is_opaque(&self) -> bool {
        self.a >= 1.0
    }

    pub fn is_transparent(&self) -> bool {
        self.a <= 0.0
    }

    /// Same color with alpha forced to 1.
    pub fn opaque(self) -> Self {
        RgbaColor { a: 1.0, ..self }
    }

    /// Source-over compositing of `self` onto an opaque `backdrop`.
    pub fn over(self, backdrop: RgbaColor) -> RgbaColor {
        let a = self.a.clamp(0.0, 1.0);
        let mix = |top: u8, bottom: u8| -> u8 {
            (top as f64 * a + bottom as f64 * (1.0 - a))
                .round()
                .clamp(0.0, 255.0) as u8
        };
        RgbaColor::rgb(
            mix(self.r, backdrop.r),
            mix(self.g, backdrop.g),
            mix(self.b, backdrop.b),
        )
    }

    pub fn to_hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }

    /// Parses `#rgb` or `#rrggbb` (the leading `#` is optional).
    pub fn from_hex(s: &str) -> Option<RgbaColor> {
        let s = s.trim().trim_start_matches('#');
        if !s.is_ascii() {
            return None;
        }
        let digit = |i: usize| u8::from_str_radix(&s[i..i + 1], 16).ok();
        match s.len() {
            3 => Some(RgbaColor::rgb(
                digit(0)? * 17,
                digit(1)? * 17,
                digit(2)? * 17,
            )),
            6 => Some(RgbaColor::rgb(
                u8::from_str_radix(&s[0..2], 16).ok()?,
                u8::from_str_radix(&s[2..4], 16).ok()?,
                u8::from_str_radix(&s[4..6], 16).ok()?,
            )),
            _ => None,
        }
    }

    /// CSS value for this color: hex when opaque, `rgba()` otherwise.
    pub fn css(&self) -> String {
        if self.is_opaque() {
            self.to_hex()
        } else {
            format!("rgba({}, {}, {}, {})", self.r, self.g, self.b, self.a)
        }
    }
}

impl fmt::Display for RgbaColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_opaque() {
            write!(f, "rgb({}, {}, {})", self.r, self.g, self.b)
        } else {
            write!(f, "rgba({}, {}, {}, {})", self.r, self.g, self.b, self.a)
        }
    }
}

/// Axis-aligned rectangle in page pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundingBox {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl BoundingBox {
    pub fn new(x: f64, y: f64, width: f64, height: f64) -> Self {
        BoundingBox {
            x,
            y,
            width,
            height,
        }
    }

    pub fn right(&self) -> f64 {
        self.x + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.height
    }

    pub fn center_x(&self) -> f64 {
        self.x + self.width / 2.0
    }

    pub fn center_y(&self) -> f64 {
        self.y + self.height / 2.0
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn intersection_area(&self, other: &BoundingBox) -> f64 {
        let w = self.right().min(other.right()) - self.x.max(other.x);
        let h = self.bottom().min(other.bottom()) - self.y.max(other.y);
        if w > 0.0 && h > 0.0 {
            w * h
        } else {
            0.0
        }
    }

    /// Euclidean gap between the two rectangles; 0 when they touch or overlap.
    pub fn distance(&self, other: &BoundingBox) -> f64 {
        let dx = (other.x - self.right()).max(self.x - other.right()).max(0.0);
        let dy = (other.y - self.bottom()).max(self.y - other.bottom()).max(0.0);
        (dx * dx + dy * dy).sqrt()
    }

    pub fn contains(&self, other: &BoundingBox) -> bool {
        const EPS: f64 = 0.5;
        other.x >= self.x - EPS
            && other.y >= self.y - EPS
            && other.right() <= self.right() + EPS
            && other.bottom() <= self.bottom() + EPS
    }
}

/// Four resolved edge lengths in px.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSizes {
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    pub left: f64,
}

impl EdgeSizes {
    pub const ZERO: EdgeSizes = EdgeSizes {
        top: 0.0,
        right: 0.0,
        bottom: 0.0,
        left: 0.0,
    };

    pub fn uniform(v: f64) -> Self {
        EdgeSizes {
            top: v,
            right: v,
            bottom: v,
            left: v,
        }
    }

    pub fn sides(&self) -> [(&'static str, f64); 4] {
        [
            ("top", self.top),
            ("right", self.right),
            ("bottom", self.bottom),
            ("left", self.left),
        ]
    }

    pub fn min_side(&self) -> f64 {
        self.top.min(self.right).min(self.bottom).min(self.left)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextAlign {
    Left,
    Right,
    Center,
    Justify,
    Start,
    End,
}

impl TextAlign {
    pub fn parse(s: &str) -> Option<TextAlign> {
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "left" | "-webkit-left" => TextAlign::Left,
            "right" | "-webkit-right" => TextAlign::Right,
            "center" | "-webkit-center" => TextAlign::Center,
            "justify" => TextAlign::Justify,
            "start" => TextAlign::Start,
            "end" => TextAlign::End,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TextAlign::Left => "left",
            TextAlign::Right => "right",
            TextAlign::Center => "center",
            TextAlign::Justify => "justify",
            TextAlign::Start => "start",
            TextAlign::End => "end",
        }
    }
}

/// Resolved subset of computed style. Every length is absolute px.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ComputedStyle {
    pub font_size: f64,
    pub font_families: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_height: Option<f64>,
    pub color: RgbaColor,
    pub background_color: RgbaColor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub border_color: Option<RgbaColor>,
    pub text_align: TextAlign,
    pub margin: EdgeSizes,
    pub padding: EdgeSizes,
    pub display: String,
    pub opacity: f64,
}

impl Default for ComputedStyle {
    fn default() -> Self {
        ComputedStyle {
            font_size: 16.0,
            font_families: vec!["Times New Roman".to_string()],
            line_height: None,
            color: RgbaColor::BLACK,
            background_color: RgbaColor::TRANSPARENT,
            border_color: None,
            text_align: TextAlign::Start,
            margin: EdgeSizes::ZERO,
            padding: EdgeSizes::ZERO,
            display: "block".to_string(),
            opacity: 1.0,
        }
    }
}

impl ComputedStyle {
    /// Line height in px, falling back to the `normal` convention of 1.2em.
    pub fn effective_line_height(&self) -> f64 {
        self.line_height.unwrap_or(self.font_size * 1.2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementNode {
    pub id: String,
    pub tag: String,
    pub classes: Vec<String>,
    #[serde(skip)]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub style: ComputedStyle,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<BoundingBox>,
    #[serde(
        rename = "lineBoxes",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub line_boxes: Option<Vec<BoundingBox>>,
    pub children: Vec<ElementNode>,
}

impl ElementNode {
    pub fn new(id: impl Into<String>, tag: impl Into<String>) -> Self {
        ElementNode {
            id: id.into(),
            tag: tag.into(),
            classes: Vec::new(),
            parent: None,
            text: None,
            style: ComputedStyle::default(),
            bbox: None,
            line_boxes: None,
            children: Vec::new(),
        }
    }

    pub fn has_text(&self) -> bool {
        self.text.as_deref().is_some_and(|t| !t.trim().is_empty())
    }

    /// Preorder traversal including `self`.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a ElementNode>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a ElementNode;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Viewport {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaptureMode {
    /// Styles only, no geometry.
    #[default]
    Static,
    /// Captured from a rendered page; boxes are present.
    Rendered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PageSnapshot {
    #[serde(rename = "source")]
    pub source_id: String,
    pub viewport: Viewport,
    pub root: ElementNode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ocr_lines: Option<Vec<OcrLine>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screenshot_colors: Option<Vec<RgbaColor>>,
    #[serde(skip)]
    pub capture_mode: CaptureMode,
    /// Diagnostics produced while building or validating the snapshot.
    #[serde(skip)]
    pub notes: Vec<String>,
}

/// Tags that never render visible content.
pub const METADATA_TAGS: &[&str] = &[
    "script", "style", "link", "meta", "head", "title", "noscript", "template", "base",
];

impl PageSnapshot {
    pub fn elements(&self) -> Preorder<'_> {
        self.root.preorder()
    }

    pub fn element_count(&self) -> usize {
        self.elements().count()
    }

    pub fn find(&self, id: &str) -> Option<&ElementNode> {
        self.elements().find(|n| n.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }

    /// Recomputes parent links and capture mode after the tree was edited.
    pub fn relink(&mut self) {
        fn walk(node: &mut ElementNode, parent: Option<&str>) {
            node.parent = parent.map(str::to_string);
            let id = node.id.clone();
            for child in &mut node.children {
                walk(child, Some(&id));
            }
        }
        walk(&mut self.root, None);
        self.capture_mode = if self.elements().any(|n| n.bbox.is_some()) {
            CaptureMode::Rendered
        } else {
            CaptureMode::Static
        };
    }
}

/// Parses and validates a snapshot document.
pub fn validate_snapshot(raw: &str) -> Result<PageSnapshot> {
    let mut de = serde_json::Deserializer::from_str(raw);
    let mut snapshot: PageSnapshot = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(path, e.into_inner().to_string())
    })?;
    check_invariants(&mut snapshot)?;
    Ok(snapshot)
}

/// Validates a snapshot value already deserialized in memory.
pub fn validate_value(value: serde_json::Value) -> Result<PageSnapshot> {
    let mut snapshot: PageSnapshot = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(path, e.into_inner().to_string())
    })?;
    check_invariants(&mut snapshot)?;
    Ok(snapshot)
}

pub(crate) fn check_invariants(snapshot: &mut PageSnapshot) -> Result<()> {
    if snapshot.viewport.width == 0 || snapshot.viewport.height == 0 {
        return Err(Error::Invariant("viewport dimensions must be > 0".into()));
    }
    let mut notes = Vec::new();
    let mut seen = HashSet::new();
    check_node(&mut snapshot.root, &mut seen, &mut notes)?;
    if let Some(lines) = &snapshot.ocr_lines {
        for (i, line) in lines.iter().enumerate() {
            line.validate()
                .map_err(|msg| Error::Invariant(format!("ocrLines[{i}]: {msg}")))?;
        }
    }
    if let Some(colors) = &snapshot.screenshot_colors {
        if let Some(c) = colors.iter().find(|c| !(0.0..=1.0).contains(&c.a)) {
            return Err(Error::Invariant(format!("screenshot color alpha {} out of range", c.a)));
        }
    }
    snapshot.relink();
    snapshot.notes.extend(notes);
    Ok(())
}

fn check_node(
    node: &mut ElementNode,
    seen: &mut HashSet<String>,
    notes: &mut Vec<String>,
) -> Result<()> {
    if node.id.is_empty() {
        return Err(Error::Invariant("element with empty id".into()));
    }
    if !seen.insert(node.id.clone()) {
        return Err(Error::Invariant(format!("duplicate id {}", node.id)));
    }
    node.tag = node.tag.to_ascii_lowercase();
    let id = node.id.clone();
    let style = &mut node.style;
    if !(style.font_size > 0.0) {
        return Err(Error::Invariant(format!("{id}: font size must be > 0")));
    }
    if !(0.0..=1.0).contains(&style.opacity) {
        return Err(Error::Invariant(format!("{id}: opacity out of [0,1]")));
    }
    for c in [style.color, style.background_color]
        .into_iter()
        .chain(style.border_color)
    {
        if !(0.0..=1.0).contains(&c.a) {
            return Err(Error::Invariant(format!("{id}: color alpha out of [0,1]")));
        }
    }
    if style.padding.sides().iter().any(|(_, v)| *v < 0.0) {
        return Err(Error::Invariant(format!("{id}: negative padding")));
    }
    let m = &mut style.margin;
    for (side, v) in [
        ("top", &mut m.top),
        ("right", &mut m.right),
        ("bottom", &mut m.bottom),
        ("left", &mut m.left),
    ] {
        if *v < 0.0 {
            notes.push(format!("{id}: negative margin-{side} {v}px clamped to 0"));
            *v = 0.0;
        }
    }
    if let Some(b) = &node.bbox {
        if b.width < 0.0 || b.height < 0.0 {
            return Err(Error::Invariant(format!("{id}: negative box size")));
        }
    }
    if node.line_boxes.is_some() && !node.has_text() {
        return Err(Error::Invariant(format!("{id}: line boxes without text")));
    }
    if let Some(lines) = &node.line_boxes {
        if lines.iter().any(|b| b.width < 0.0 || b.height < 0.0) {
            return Err(Error::Invariant(format!("{id}: negative line box size")));
        }
    }
    for child in &mut node.children {
        check_node(child, seen, notes)?;
    }
    Ok(())
}

/// Elements meant to be visible, in document order.
///
/// Metadata tags, zero-opacity elements and elements whose box has zero width
/// or height are excluded together with their whole subtree.
pub fn visible_elements(snapshot: &PageSnapshot) -> Vec<&ElementNode> {
    fn walk<'a>(node: &'a ElementNode, out: &mut Vec<&'a ElementNode>) {
        if !is_self_visible(node) {
            return;
        }
        out.push(node);
        for child in &node.children {
            walk(child, out);
        }
    }
    let mut out = Vec::new();
    walk(&snapshot.root, &mut out);
    out
}

fn is_self_visible(node: &ElementNode) -> bool {
    if METADATA_TAGS.contains(&node.tag.as_str()) {
        return false;
    }
    if node.style.opacity <= 0.0 || node.style.display == "none" {
        return false;
    }
    if let Some(b) = &node.bbox {
        if b.width <= 0.0 || b.height <= 0.0 {
            return false;
        }
    }
    true
}

/// Id-based lookups over a snapshot: parents, ancestors, document order.
pub struct NodeIndex<'a> {
    nodes: Vec<&'a ElementNode>,
    by_id: HashMap<&'a str, usize>,
    parent: Vec<Option<usize>>,
}

impl<'a> NodeIndex<'a> {
    pub fn new(snapshot: &'a PageSnapshot) -> Self {
        let mut nodes = Vec::new();
        let mut parent = Vec::new();
        fn walk<'a>(
            node: &'a ElementNode,
            up: Option<usize>,
            nodes: &mut Vec<&'a ElementNode>,
            parent: &mut Vec<Option<usize>>,
        ) {
            let idx = nodes.len();
            nodes.push(node);
            parent.push(up);
            for c in &node.children {
                walk(c, Some(idx), nodes, parent);
            }
        }
        walk(&snapshot.root, None, &mut nodes, &mut parent);
        let by_id = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.as_str(), i))
            .collect();
        NodeIndex {
            nodes,
            by_id,
            parent,
        }
    }

    pub fn get(&self, id: &str) -> Option<&'a ElementNode> {
        self.by_id.get(id).map(|&i| self.nodes[i])
    }

    /// Preorder position of an element.
    pub fn order(&self, id: &str) -> usize {
        self.by_id.get(id).copied().unwrap_or(usize::MAX)
    }

    pub fn parent(&self, id: &str) -> Option<&'a ElementNode> {
        let i = *self.by_id.get(id)?;
        self.parent[i].map(|p| self.nodes[p])
    }

    /// Ancestors from the nearest parent up to the root.
    pub fn ancestors(&self, id: &str) -> Vec<&'a ElementNode> {
        let mut out = Vec::new();
        let mut cur = self.by_id.get(id).and_then(|&i| self.parent[i]);
        while let Some(p) = cur {
            out.push(self.nodes[p]);
            cur = self.parent[p];
        }
        out
    }

    pub fn is_ancestor(&self, ancestor: &str, of: &str) -> bool {
        let Some(&target) = self.by_id.get(ancestor) else {
            return false;
        };
        let mut cur = self.by_id.get(of).and_then(|&i| self.parent[i]);
        while let Some(p) = cur {
            if p == target {
                return true;
            }
            cur = self.parent[p];
        }
        false
    }

    pub fn nodes(&self) -> &[&'a ElementNode] {
        &self.nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        r##"{
          "source": "mem://minimal",
          "viewport": {"width": 800, "height": 600},
          "root": {
            "id": "n0", "tag": "body", "classes": [],
            "style": {
              "fontSize": 16, "fontFamilies": ["Times New Roman"],
              "color": {"r":0,"g":0,"b":0,"a":1},
              "backgroundColor": {"r":0,"g":0,"b":0,"a":0},
              "textAlign": "start",
              "margin": {"top":8,"right":8,"bottom":8,"left":8},
              "padding": {"top":0,"right":0,"bottom":0,"left":0},
              "display": "block", "opacity": 1
            },
            "children": []
          }
        }"##
    }

    #[test]
    fn minimal_snapshot_is_static() {
        let snap = validate_snapshot(minimal()).unwrap();
        assert_eq!(snap.capture_mode, CaptureMode::Static);
        assert_eq!(snap.element_count(), 1);
        assert_eq!(snap.viewport, Viewport { width: 800, height: 600 });
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let mut snap = validate_snapshot(minimal()).unwrap();
        let mut child = snap.root.clone();
        child.tag = "p".into();
        child.id = "n1".into();
        snap.root.children = vec![child.clone(), child];
        let err = validate_snapshot(&snap.to_json()).unwrap_err();
        assert_eq!(err.to_string(), "invariant violated: duplicate id n1");
    }

    #[test]
    fn missing_field_reports_path() {
        let raw = minimal().replace("\"fontSize\": 16, ", "");
        match validate_snapshot(&raw).unwrap_err() {
            Error::Schema { path, message } => {
                assert_eq!(path, "root.style");
                assert!(message.contains("fontSize"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_top_level_key_is_schema_error() {
        let raw = minimal().replacen('{', "{\"extra\": 1,", 1);
        assert!(matches!(validate_snapshot(&raw), Err(Error::Schema { .. })));
    }

    #[test]
    fn negative_margin_clamps_with_note() {
        let raw = minimal().replace("\"top\":8,", "\"top\":-4,");
        let snap = validate_snapshot(&raw).unwrap();
        assert_eq!(snap.root.style.margin.top, 0.0);
        assert_eq!(snap.notes.len(), 1);
        assert!(snap.notes[0].contains("margin-top"));
    }

    #[test]
    fn geometry_marks_rendered() {
        let raw = minimal().replace(
            "\"children\": []",
            "\"box\": {\"x\":0,\"y\":0,\"width\":800,\"height\":600}, \"children\": []",
        );
        let snap = validate_snapshot(&raw).unwrap();
        assert_eq!(snap.capture_mode, CaptureMode::Rendered);
    }

    #[test]
    fn line_boxes_need_text() {
        let raw = minimal().replace(
            "\"children\": []",
            "\"lineBoxes\": [{\"x\":0,\"y\":0,\"width\":10,\"height\":10}], \"children\": []",
        );
        assert!(matches!(validate_snapshot(&raw), Err(Error::Invariant(_))));
    }

    fn tree(children: Vec<ElementNode>) -> PageSnapshot {
        let mut root = ElementNode::new("body", "body");
        root.children = children;
        let mut snap = PageSnapshot {
            source_id: "t".into(),
            viewport: Viewport { width: 100, height: 100 },
            root,
            ocr_lines: None,
            screenshot_colors: None,
            capture_mode: CaptureMode::Static,
            notes: vec![],
        };
        snap.relink();
        snap
    }

    fn ids(v: &[&ElementNode]) -> Vec<String> {
        v.iter().map(|n| n.id.clone()).collect()
    }

    #[test]
    fn metadata_tags_are_invisible() {
        let snap = tree(vec![ElementNode::new("s", "script"), ElementNode::new("p", "p")]);
        assert_eq!(ids(&visible_elements(&snap)), ["body", "p"]);
    }

    #[test]
    fn zero_opacity_prunes_subtree() {
        let mut p = ElementNode::new("p", "p");
        p.style.opacity = 0.0;
        p.children.push(ElementNode::new("a", "a"));
        let snap = tree(vec![p, ElementNode::new("q", "p")]);
        assert_eq!(ids(&visible_elements(&snap)), ["body", "q"]);
    }

    #[test]
    fn zero_width_box_is_invisible() {
        let mut d = ElementNode::new("d", "div");
        d.bbox = Some(BoundingBox::new(0.0, 0.0, 0.0, 40.0));
        let snap = tree(vec![d]);
        assert_eq!(ids(&visible_elements(&snap)), ["body"]);
    }

    #[test]
    fn compositing_half_black_over_white() {
        let c = RgbaColor::rgba(0, 0, 0, 0.5).over(RgbaColor::WHITE);
        for ch in [c.r, c.g, c.b] {
            assert!((ch as i32 - 128).abs() <= 1, "{c}");
        }
    }

    #[test]
    fn hex_round_trip() {
        let c = RgbaColor::from_hex("#3366CC").unwrap();
        assert_eq!(c, RgbaColor::rgb(0x33, 0x66, 0xcc));
        assert_eq!(c.to_hex(), "#3366cc");
        assert_eq!(RgbaColor::from_hex("fff"), Some(RgbaColor::WHITE));
        assert_eq!(RgbaColor::from_hex("#12345"), None);
    }
}
