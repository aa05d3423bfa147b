//! Before/after comparison of two reports on the same page.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::select;
use crate::ingest::css::Selector;
use crate::model::{ComputedStyle, NodeIndex, PageSnapshot};
use crate::patch::CssPatch;

use super::{AuditReport, Category};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntryRef {
    pub category: Category,
    pub group_key: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssChange {
    pub selector: String,
    pub property: String,
    /// Computed value before the change, when the old snapshot knows it.
    pub old: Option<String>,
    pub new: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeSummary {
    pub source_id: String,
    pub resolved: Vec<EntryRef>,
    pub introduced: Vec<EntryRef>,
    pub unchanged_count: usize,
    pub css_diff: Vec<CssChange>,
}

fn issue_refs(report: &AuditReport) -> BTreeSet<EntryRef> {
    report
        .issues
        .iter()
        .map(|f| EntryRef {
            category: f.category,
            group_key: f.group_key.clone(),
        })
        .collect()
}

fn px(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r.fract() == 0.0 {
        format!("{}px", r as i64)
    } else {
        format!("{r}px")
    }
}

/// A computed property rendered as CSS text, for the properties the model
/// carries.
pub fn computed_property(style: &ComputedStyle, property: &str) -> Option<String> {
    let side = |e: &crate::model::EdgeSizes, name: &str| {
        e.sides().iter().find(|(s, _)| *s == name).map(|(_, v)| px(*v))
    };
    match property {
        "font-size" => Some(px(style.font_size)),
        "font-family" => Some(style.font_families.join(", ")),
        "line-height" => Some(px(style.effective_line_height())),
        "color" => Some(style.color.css()),
        "background-color" => Some(style.background_color.css()),
        "border-color" => style.border_color.map(|c| c.css()),
        "text-align" => Some(style.text_align.as_str().to_string()),
        "display" => Some(style.display.clone()),
        "opacity" => Some(style.opacity.to_string()),
        p => {
            if let Some(s) = p.strip_prefix("margin-") {
                side(&style.margin, s)
            } else if let Some(s) = p.strip_prefix("padding-") {
                side(&style.padding, s)
            } else {
                None
            }
        }
    }
}

/// Issues resolved and introduced between two reports on the same source.
/// With a patch, lists its changes; `before` supplies the old values.
pub fn diff_reports(
    before: &AuditReport,
    after: &AuditReport,
    patch: Option<&CssPatch>,
    before_snapshot: Option<&PageSnapshot>,
) -> Result<ChangeSummary> {
    if before.run_meta.source_id != after.run_meta.source_id {
        return Err(Error::MismatchedSource {
            before: before.run_meta.source_id.clone(),
            after: after.run_meta.source_id.clone(),
        });
    }
    let old = issue_refs(before);
    let new = issue_refs(after);
    let index = before_snapshot.map(NodeIndex::new);
    let css_diff = patch
        .map(|p| {
            p.entries()
                .map(|(selector, property, value)| {
                    let old = index.as_ref().and_then(|idx| {
                        let sel = Selector::parse(selector).ok()?;
                        let id = *select(&sel, idx).first()?;
                        computed_property(&idx.get(id)?.style, property)
                    });
                    CssChange {
                        selector: selector.to_string(),
                        property: property.to_string(),
                        old,
                        new: value.to_string(),
                    }
                })
                .collect()
        })
        .unwrap_or_default();
    Ok(ChangeSummary {
        source_id: before.run_meta.source_id.clone(),
        resolved: old.difference(&new).cloned().collect(),
        introduced: new.difference(&old).cloned().collect(),
        unchanged_count: old.intersection(&new).count(),
        css_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn px_formatting() {
        assert_eq!(px(16.0), "16px");
        assert_eq!(px(13.333), "13.33px");
    }

    #[test]
    fn computed_sides() {
        let mut s = ComputedStyle::default();
        s.margin.bottom = 4.0;
        assert_eq!(computed_property(&s, "margin-bottom").as_deref(), Some("4px"));
        assert_eq!(computed_property(&s, "width"), None);
    }
}
