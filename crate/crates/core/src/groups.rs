//! Style groups: visible elements sharing tag, classes and audited style.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::ingest::css::Selector;
use crate::model::{visible_elements, EdgeSizes, ElementNode, NodeIndex, PageSnapshot, RgbaColor, TextAlign};

/// The subset of computed style the audit looks at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditedStyle {
    pub font_size: f64,
    pub font_families: Vec<String>,
    pub line_height: Option<f64>,
    pub color: RgbaColor,
    pub background_color: RgbaColor,
    pub text_align: TextAlign,
    pub margin: EdgeSizes,
    pub padding: EdgeSizes,
}

impl AuditedStyle {
    pub fn of(node: &ElementNode) -> Self {
        let s = &node.style;
        AuditedStyle {
            font_size: s.font_size,
            font_families: s.font_families.clone(),
            line_height: s.line_height,
            color: s.color,
            background_color: s.background_color,
            text_align: s.text_align,
            margin: s.margin,
            padding: s.padding,
        }
    }

    /// Line height in px with `normal` resolved to 1.2em.
    pub fn effective_line_height(&self) -> f64 {
        self.line_height.unwrap_or(self.font_size * 1.2)
    }

    fn signature(&self) -> String {
        serde_json::to_string(self).expect("style serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleGroup {
    pub group_key: String,
    pub tag: String,
    /// Sorted class list shared by every member.
    pub classes: Vec<String>,
    pub member_ids: Vec<String>,
    pub shared_style: AuditedStyle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_text: Option<String>,
}

impl StyleGroup {
    pub fn has_text(&self, snapshot: &PageSnapshot) -> bool {
        self.members(snapshot).any(ElementNode::has_text)
    }

    pub fn members<'a>(&'a self, snapshot: &'a PageSnapshot) -> impl Iterator<Item = &'a ElementNode> + 'a {
        self.member_ids.iter().filter_map(move |id| snapshot.find(id))
    }
}

const SAMPLE_CHARS: usize = 80;

fn truncate(text: &str) -> String {
    if text.chars().count() <= SAMPLE_CHARS {
        text.to_string()
    } else {
        let mut s: String = text.chars().take(SAMPLE_CHARS - 1).collect();
        s.push('…');
        s
    }
}

/// Partitions visible elements into style groups, ordered by first member.
pub fn group_elements(snapshot: &PageSnapshot) -> Vec<StyleGroup> {
    let visible = visible_elements(snapshot);
    let mut order: Vec<StyleGroup> = Vec::new();
    let mut by_key: HashMap<(String, Vec<String>, String), usize> = HashMap::new();
    // Ordinal of each element among visible elements with the same tag.
    let mut ordinals: HashMap<&str, usize> = HashMap::new();
    let mut ordinal_of: HashMap<&str, usize> = HashMap::new();
    for node in &visible {
        let n = ordinals.entry(node.tag.as_str()).or_default();
        *n += 1;
        ordinal_of.insert(node.id.as_str(), *n);
    }
    for node in &visible {
        let mut classes = node.classes.clone();
        classes.sort();
        classes.dedup();
        let style = AuditedStyle::of(node);
        let key = (node.tag.clone(), classes.clone(), style.signature());
        match by_key.get(&key) {
            Some(&i) => {
                let g = &mut order[i];
                g.member_ids.push(node.id.clone());
                if g.sample_text.is_none() {
                    g.sample_text = node.text.as_deref().map(truncate);
                }
            }
            None => {
                by_key.insert(key, order.len());
                order.push(StyleGroup {
                    group_key: String::new(),
                    tag: node.tag.clone(),
                    classes,
                    member_ids: vec![node.id.clone()],
                    shared_style: style,
                    sample_text: node.text.as_deref().map(truncate),
                });
            }
        }
    }
    let mut used: BTreeMap<String, usize> = BTreeMap::new();
    for g in &mut order {
        let base = if g.classes.is_empty() {
            let first = ordinal_of[g.member_ids[0].as_str()];
            let last = ordinal_of[g.member_ids.last().expect("non-empty").as_str()];
            if first == last {
                format!("{}:nth({first})", g.tag)
            } else {
                format!("{}:nth({first}..{last})", g.tag)
            }
        } else {
            format!("{}.{}", g.tag, g.classes.join("."))
        };
        let n = used.entry(base.clone()).or_default();
        *n += 1;
        g.group_key = if *n == 1 { base } else { format!("{base}~{n}") };
    }
    order
}

/// Maps element id to the index of its group.
pub fn group_index(groups: &[StyleGroup]) -> HashMap<&str, usize> {
    groups
        .iter()
        .enumerate()
        .flat_map(|(i, g)| g.member_ids.iter().map(move |id| (id.as_str(), i)))
        .collect()
}

/// Ids produced by the `n<index>` scheme carry no meaning in the source.
pub fn is_generated_id(id: &str) -> bool {
    id.strip_prefix('n')
        .map(|rest| {
            let digits = rest.split('_').next().unwrap_or("");
            !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
        })
        .unwrap_or(false)
}

fn compound(node: &ElementNode) -> String {
    let mut classes = node.classes.clone();
    classes.sort();
    classes.dedup();
    if classes.is_empty() {
        node.tag.clone()
    } else {
        format!("{}.{}", node.tag, classes.join("."))
    }
}

/// Ids of every element a selector matches.
pub fn select<'a>(selector: &Selector, index: &NodeIndex<'a>) -> Vec<&'a str> {
    index
        .nodes()
        .iter()
        .filter(|n| selector.matches(**n, &index.ancestors(&n.id)))
        .map(|n| n.id.as_str())
        .collect()
}

/// Sectioning tags usable as selector scopes on their own.
const LANDMARK_TAGS: &[&str] = &["header", "nav", "main", "footer", "aside", "article", "section", "form", "table"];

/// A CSS selector for the given elements, preferring one that matches them
/// exactly. Returns the selector and how many other elements it also hits.
pub fn selector_for(ids: &[String], index: &NodeIndex<'_>) -> (String, usize) {
    let Some(first) = ids.first().and_then(|id| index.get(id)) else {
        return (String::from("*"), 0);
    };
    let mut candidates = vec![compound(first)];
    if !first.classes.is_empty() {
        candidates.push(first.tag.clone());
    }
    // Scope by the nearest ancestors that carry a source id, a class or a
    // landmark tag.
    for anc in index.ancestors(&first.id) {
        let scope = if !is_generated_id(&anc.id) {
            format!("#{}", anc.id)
        } else if !anc.classes.is_empty() {
            compound(anc)
        } else if LANDMARK_TAGS.contains(&anc.tag.as_str()) {
            anc.tag.clone()
        } else {
            continue;
        };
        candidates.push(format!("{scope} {}", compound(first)));
    }
    if !is_generated_id(&first.id) && ids.len() == 1 {
        candidates.push(format!("#{}", first.id));
    }
    let wanted: std::collections::HashSet<&str> = ids.iter().map(String::as_str).collect();
    let mut best: Option<(String, usize)> = None;
    for cand in candidates {
        let Ok(sel) = Selector::parse(&cand) else { continue };
        let hits = select(&sel, index);
        if !wanted.iter().all(|id| hits.contains(id)) {
            continue;
        }
        let extra = hits.len() - wanted.len();
        if extra == 0 {
            return (cand, 0);
        }
        if best.as_ref().is_none_or(|(_, e)| extra < *e) {
            best = Some((cand, extra));
        }
    }
    best.unwrap_or_else(|| (compound(first), 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::StaticPage;

    fn snap(html: &str) -> PageSnapshot {
        StaticPage::from_html(html, "t").snapshot
    }

    #[test]
    fn identical_members_share_a_group() {
        let s = snap(r#"<p class="body">a</p><p class="body">b</p><p class="body">c</p>"#);
        let g = group_elements(&s);
        assert_eq!(g.len(), 2);
        assert_eq!(g[1].group_key, "p.body");
        assert_eq!(g[1].member_ids.len(), 3);
        assert_eq!(g[1].sample_text.as_deref(), Some("a"));
        assert_eq!(g[0].group_key, "body:nth(1)");
    }

    #[test]
    fn color_splits_groups_and_keys_stay_unique() {
        let s = snap(r#"<p>a</p><p style="color:red">b</p><p>c</p><p style="color:red">d</p>"#);
        let g = group_elements(&s);
        let keys: Vec<&str> = g.iter().map(|g| g.group_key.as_str()).collect();
        assert_eq!(keys, ["body:nth(1)", "p:nth(1..3)", "p:nth(2..4)"]);
        let s = snap(r#"<p class=x>a</p><p class=x style="color:red">b</p>"#);
        let keys: Vec<String> = group_elements(&s).into_iter().map(|g| g.group_key).collect();
        assert_eq!(keys, ["body:nth(1)", "p.x", "p.x~2"]);
    }

    #[test]
    fn sample_text_truncates() {
        let long = "x".repeat(200);
        let s = snap(&format!("<p>{long}</p>"));
        let g = group_elements(&s);
        assert_eq!(g[1].sample_text.as_ref().unwrap().chars().count(), 80);
    }

    #[test]
    fn selectors_prefer_exact_matches() {
        let s = snap(r#"<div class="nav"><a>x</a></div><a>y</a><p class="a b">z</p>"#);
        let index = NodeIndex::new(&s);
        let nav_link = s.elements().find(|n| n.text.as_deref() == Some("x")).unwrap();
        let (sel, extra) = selector_for(&[nav_link.id.clone()], &index);
        assert_eq!((sel.as_str(), extra), ("div.nav a", 0));
        let p = s.elements().find(|n| n.tag == "p").unwrap();
        assert_eq!(selector_for(&[p.id.clone()], &index).0, "p.a.b");
    }

    #[test]
    fn generated_ids() {
        assert!(is_generated_id("n12"));
        assert!(is_generated_id("n3_1"));
        assert!(!is_generated_id("nav"));
        assert!(!is_generated_id("n"));
    }
}
