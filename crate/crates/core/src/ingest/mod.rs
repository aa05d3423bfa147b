//! Static ingestion: HTML with embedded CSS to a static-mode snapshot.

pub mod cascade;
pub mod css;
pub mod html;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{check_invariants, CaptureMode, PageSnapshot, Viewport};

pub use cascade::{STATIC_VIEWPORT, USER_AGENT_CSS};
pub use css::{CssRule, Declaration, Origin, Selector, Specificity};
pub use html::{DomChild, DomNode};

/// A parsed HTML document: the body tree plus every author rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDocument {
    pub root: DomNode,
    pub html_attrs: Vec<(String, String)>,
    /// Stylesheet rules, then inline-style rules, then patch rules.
    pub rules: Vec<CssRule>,
    pub title: Option<String>,
    /// Recovery actions taken while parsing.
    pub notes: Vec<String>,
}

/// Parses an HTML document. Malformed markup is recovered, never rejected.
pub fn parse_document(html_text: &str) -> ParsedDocument {
    let tree = html::parse_html(html_text);
    let mut notes = tree.notes;
    let mut rules = Vec::new();
    for sheet in &tree.style_sheets {
        let first = rules.len();
        rules.extend(css::parse_stylesheet(sheet, Origin::Stylesheet, first, &mut notes));
    }
    let mut index = 0;
    collect_inline(&tree.body, &mut index, &mut rules, &mut notes);
    ParsedDocument {
        root: tree.body,
        html_attrs: tree.html_attrs,
        rules,
        title: tree.title,
        notes,
    }
}

fn collect_inline(node: &DomNode, index: &mut usize, rules: &mut Vec<CssRule>, notes: &mut Vec<String>) {
    let me = *index;
    *index += 1;
    if let Some(style) = node.attr("style") {
        let declarations = css::parse_declarations(style, notes);
        if !declarations.is_empty() {
            let order = rules.len();
            rules.push(CssRule {
                selector: None,
                origin: Origin::Inline(me),
                declarations,
                specificity: (0, 0, 0),
                source_order: order,
            });
        }
    }
    for child in node.elements() {
        collect_inline(child, index, rules, notes);
    }
}

/// Parses raw bytes, rejecting input that is not text.
pub fn parse_document_bytes(bytes: &[u8]) -> Result<ParsedDocument> {
    Ok(parse_document(&html::decode_html_bytes(bytes)?))
}

/// Element ids in preorder: the `id` attribute when present and unique,
/// otherwise `n<preorder index>`.
fn assign_ids(root: &DomNode, notes: &mut Vec<String>) -> Vec<String> {
    fn walk<'a>(n: &'a DomNode, out: &mut Vec<&'a DomNode>) {
        out.push(n);
        for c in n.elements() {
            walk(c, out);
        }
    }
    let mut nodes = Vec::new();
    walk(root, &mut nodes);
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for n in &nodes {
        if let Some(id) = n.attr("id").filter(|v| !v.trim().is_empty()) {
            *counts.entry(id).or_default() += 1;
        }
    }
    let mut ids: Vec<Option<String>> = nodes
        .iter()
        .map(|n| {
            let id = n.attr("id").filter(|v| !v.trim().is_empty())?;
            if counts[id] > 1 {
                notes.push(format!("duplicate id attribute `{id}`; using generated ids"));
                None
            } else if id.split_whitespace().count() > 1 {
                None
            } else {
                Some(id.to_string())
            }
        })
        .collect();
    let mut taken: std::collections::HashSet<String> = ids.iter().flatten().cloned().collect();
    for (i, slot) in ids.iter_mut().enumerate() {
        if slot.is_none() {
            let mut candidate = format!("n{i}");
            let mut k = 1;
            while taken.contains(&candidate) {
                candidate = format!("n{i}_{k}");
                k += 1;
            }
            taken.insert(candidate.clone());
            *slot = Some(candidate);
        }
    }
    notes.sort();
    notes.dedup();
    ids.into_iter().map(|s| s.expect("assigned")).collect()
}

/// Resolves the cascade into a static-mode snapshot.
pub fn resolve_cascade(doc: &ParsedDocument, source_id: &str) -> PageSnapshot {
    resolve_cascade_with_viewport(doc, source_id, STATIC_VIEWPORT)
}

pub fn resolve_cascade_with_viewport(doc: &ParsedDocument, source_id: &str, viewport: Viewport) -> PageSnapshot {
    let mut notes = doc.notes.clone();
    let mut id_notes = Vec::new();
    let ids = assign_ids(&doc.root, &mut id_notes);
    notes.extend(id_notes);
    let (root, cascade_notes) = cascade::resolve_tree(&doc.root, &doc.html_attrs, &doc.rules, &ids, viewport);
    notes.extend(cascade_notes);
    let mut snapshot = PageSnapshot {
        source_id: source_id.to_string(),
        viewport,
        root,
        ocr_lines: None,
        screenshot_colors: None,
        capture_mode: CaptureMode::Static,
        notes,
    };
    // Clamp negative margins and link parents; a resolved tree always
    // satisfies the remaining invariants.
    check_invariants(&mut snapshot).expect("resolved snapshots satisfy invariants");
    snapshot
}

/// A static page: its parsed document and the resolved snapshot.
#[derive(Debug, Clone)]
pub struct StaticPage {
    pub document: ParsedDocument,
    pub snapshot: PageSnapshot,
}

impl StaticPage {
    pub fn from_html(html_text: &str, source_id: &str) -> Self {
        let document = parse_document(html_text);
        let snapshot = resolve_cascade(&document, source_id);
        StaticPage { document, snapshot }
    }

    /// Re-resolves the page with `patch_css` rules appended above all author
    /// rules. Every patch selector must match at least one element.
    pub fn apply_css_patch(&self, patch_css: &str) -> Result<StaticPage> {
        apply_css_patch(self, patch_css)
    }
}

/// See [`StaticPage::apply_css_patch`].
pub fn apply_css_patch(page: &StaticPage, patch_css: &str) -> Result<StaticPage> {
    let mut notes = Vec::new();
    let first = page.document.rules.len();
    let mut patch_rules = css::parse_stylesheet(patch_css, Origin::Patch, first, &mut notes);
    // Patches are previews of edits to the page's own CSS: they win over
    // every author declaration, including `!important` ones.
    for rule in &mut patch_rules {
        for decl in rule.declarations.values_mut() {
            decl.important = true;
        }
    }
    if let Some(bad) = notes.iter().find(|n| n.starts_with("selector ignored")) {
        return Err(Error::Parse(format!("patch: {bad}")));
    }
    for rule in &patch_rules {
        let sel = rule.selector.as_ref().expect("patch rules have selectors");
        if !selector_matches_any(sel, &page.document.root) {
            return Err(Error::UnknownSelector(sel.to_string()));
        }
    }
    let mut document = page.document.clone();
    document.rules.extend(patch_rules);
    document.notes.extend(notes);
    let snapshot = resolve_cascade_with_viewport(&document, &page.snapshot.source_id, page.snapshot.viewport);
    Ok(StaticPage { document, snapshot })
}

fn selector_matches_any(sel: &Selector, root: &DomNode) -> bool {
    fn walk<'a>(n: &'a DomNode, anc: &mut Vec<&'a DomNode>, sel: &Selector) -> bool {
        let chain: Vec<&DomNode> = anc.iter().rev().copied().collect();
        if sel.matches(n, &chain) {
            return true;
        }
        anc.push(n);
        let hit = n.elements().any(|c| walk(c, anc, sel));
        anc.pop();
        hit
    }
    walk(root, &mut Vec::new(), sel)
}
