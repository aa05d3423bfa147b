//! CSS patches: suggestions collected into a stylesheet fragment.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::css::{parse_stylesheet, Origin};
use crate::report::{Category, Finding};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchRule {
    pub selector: String,
    /// `(property, value)` in application order.
    pub declarations: Vec<(String, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssPatch {
    pub rules: Vec<PatchRule>,
}

impl CssPatch {
    /// Preferred suggestions (alternative 0) of the given issues, one rule
    /// per selector. Harmony suggestions restyle the whole page and are left
    /// out; a later value for the same selector and property replaces an
    /// earlier one.
    pub fn from_suggestions<'a>(issues: impl IntoIterator<Item = &'a Finding>) -> CssPatch {
        let mut patch = CssPatch::default();
        for f in issues {
            if f.category == Category::ColorHarmony {
                continue;
            }
            for s in f.suggestions.iter().filter(|s| s.alternative == 0) {
                patch.set(&s.selector, &s.property, &s.value);
            }
        }
        patch
    }

    pub fn set(&mut self, selector: &str, property: &str, value: &str) {
        let rule = match self.rules.iter_mut().position(|r| r.selector == selector) {
            Some(i) => &mut self.rules[i],
            None => {
                self.rules.push(PatchRule {
                    selector: selector.to_string(),
                    declarations: Vec::new(),
                });
                self.rules.last_mut().expect("just pushed")
            }
        };
        match rule.declarations.iter_mut().find(|(p, _)| p == property) {
            Some(d) => d.1 = value.to_string(),
            None => rule.declarations.push((property.to_string(), value.to_string())),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.iter().all(|r| r.declarations.is_empty())
    }

    /// Every `(selector, property, value)` triple.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.rules.iter().flat_map(|r| {
            r.declarations
                .iter()
                .map(move |(p, v)| (r.selector.as_str(), p.as_str(), v.as_str()))
        })
    }

    pub fn to_css(&self) -> String {
        let mut out = String::new();
        for r in self.rules.iter().filter(|r| !r.declarations.is_empty()) {
            let _ = writeln!(out, "{} {{", r.selector);
            for (p, v) in &r.declarations {
                let _ = writeln!(out, "  {p}: {v};");
            }
            out.push_str("}\n");
        }
        out
    }

    /// Parses a patch stylesheet. At-rules and unsupported selectors are
    /// rejected rather than skipped.
    pub fn parse(css: &str) -> Result<CssPatch> {
        let mut notes = Vec::new();
        let rules = parse_stylesheet(css, Origin::Patch, 0, &mut notes);
        if let Some(n) = notes.first() {
            return Err(Error::Parse(format!("patch: {n}")));
        }
        let mut patch = CssPatch::default();
        for rule in rules {
            let selector = rule.selector.map(|s| s.to_string()).unwrap_or_default();
            let mut decls: Vec<(&String, &crate::ingest::css::Declaration)> = rule.declarations.iter().collect();
            decls.sort_by_key(|(_, d)| d.position);
            for (p, d) in decls {
                patch.set(&selector, p, &d.value);
            }
        }
        Ok(patch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Suggestion;

    fn sug(selector: &str, property: &str, value: &str, alternative: u32) -> Suggestion {
        Suggestion {
            selector: selector.into(),
            property: property.into(),
            value: value.into(),
            rationale: String::new(),
            alternative,
        }
    }

    #[test]
    fn preferred_suggestions_only() {
        let issues = [
            Finding::issue(Category::ColorContrast, "p", "x")
                .suggest(sug("p", "color", "#000000", 0))
                .suggest(sug("p", "background-color", "#ffffff", 1)),
            Finding::issue(Category::FontSize, "p", "x").suggest(sug("p", "font-size", "16px", 0)),
            Finding::issue(Category::ColorHarmony, "page", "x").suggest(sug("body", "color", "#111111", 0)),
        ];
        let patch = CssPatch::from_suggestions(&issues);
        assert_eq!(patch.to_css(), "p {\n  color: #000000;\n  font-size: 16px;\n}\n");
    }

    #[test]
    fn round_trip() {
        let mut patch = CssPatch::default();
        patch.set("div.nav a", "margin-right", "8px");
        patch.set(".title", "font-size", "24px");
        assert_eq!(CssPatch::parse(&patch.to_css()).unwrap(), patch);
        assert!(CssPatch::parse("@media print { p { color: red } }").is_err());
    }
}
