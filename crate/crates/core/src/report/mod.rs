//! Findings, the assembled audit report, and report diffs.

pub mod diff;
pub mod guidelines;
pub mod html;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::color_audit::{HarmonySuggestion, SchemeSummary};
use crate::compare::Comparisons;

pub use diff::{diff_reports, ChangeSummary, CssChange, EntryRef};
pub use guidelines::Guideline;
pub use html::{render_accessible_html, HtmlOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    FontSize,
    FontFamily,
    LineLength,
    LineSpacing,
    Spacing,
    SpatialAlignment,
    TextualAlignment,
    ColorContrast,
    ColorHarmony,
}

/// The three families the categories are summarized under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Text,
    Layout,
    Color,
}

impl Category {
    pub const ALL: [Category; 9] = [
        Category::FontSize,
        Category::FontFamily,
        Category::LineLength,
        Category::LineSpacing,
        Category::Spacing,
        Category::SpatialAlignment,
        Category::TextualAlignment,
        Category::ColorContrast,
        Category::ColorHarmony,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::FontSize => "font_size",
            Category::FontFamily => "font_family",
            Category::LineLength => "line_length",
            Category::LineSpacing => "line_spacing",
            Category::Spacing => "spacing",
            Category::SpatialAlignment => "spatial_alignment",
            Category::TextualAlignment => "textual_alignment",
            Category::ColorContrast => "color_contrast",
            Category::ColorHarmony => "color_harmony",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Category::FontSize => "Font size",
            Category::FontFamily => "Font family",
            Category::LineLength => "Line length",
            Category::LineSpacing => "Line spacing",
            Category::Spacing => "Spacing",
            Category::SpatialAlignment => "Spatial alignment",
            Category::TextualAlignment => "Text alignment",
            Category::ColorContrast => "Color contrast",
            Category::ColorHarmony => "Color harmony",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Category::FontSize | Category::FontFamily | Category::LineLength | Category::LineSpacing => {
                Family::Text
            }
            Category::Spacing | Category::SpatialAlignment | Category::TextualAlignment => Family::Layout,
            Category::ColorContrast | Category::ColorHarmony => Family::Color,
        }
    }

    /// Whether a suggestion in this category may set `property`.
    pub fn allows_property(self, property: &str) -> bool {
        guidelines::guideline(self).properties.iter().any(|p| p == property)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    MustFix,
    Recommended,
}

/// One concrete CSS change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suggestion {
    pub selector: String,
    pub property: String,
    pub value: String,
    pub rationale: String,
    /// Suggestions sharing a number belong together; 0 is the preferred fix
    /// and higher numbers are alternatives to it.
    #[serde(default)]
    pub alternative: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Issue,
    Pass,
    Skipped,
}

/// One check outcome for one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub category: Category,
    pub group_key: String,
    pub member_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_text: Option<String>,
    pub explanation: String,
    pub guideline_ref: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suggestions: Vec<Suggestion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity: Option<Severity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Finding {
    fn base(category: Category, group_key: impl Into<String>, explanation: impl Into<String>) -> Self {
        Finding {
            category,
            group_key: group_key.into(),
            member_ids: Vec::new(),
            sample_text: None,
            explanation: explanation.into(),
            guideline_ref: guidelines::guideline(category).id,
            suggestions: Vec::new(),
            severity: None,
            skipped_reason: None,
            notes: Vec::new(),
        }
    }

    pub fn issue(category: Category, group_key: impl Into<String>, explanation: impl Into<String>) -> Self {
        let severity = match category {
            Category::ColorContrast | Category::FontSize => Severity::MustFix,
            _ => Severity::Recommended,
        };
        Finding {
            severity: Some(severity),
            ..Finding::base(category, group_key, explanation)
        }
    }

    pub fn pass(category: Category, group_key: impl Into<String>, explanation: impl Into<String>) -> Self {
        Finding::base(category, group_key, explanation)
    }

    pub fn skipped(category: Category, group_key: impl Into<String>, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        Finding {
            skipped_reason: Some(reason.clone()),
            ..Finding::base(category, group_key, format!("skipped: {reason}"))
        }
    }

    pub fn members(mut self, ids: &[String], sample: Option<&str>) -> Self {
        self.member_ids = ids.to_vec();
        self.sample_text = sample.map(str::to_string);
        self
    }

    pub fn suggest(mut self, suggestion: Suggestion) -> Self {
        self.suggestions.push(suggestion);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn outcome(&self) -> Outcome {
        if self.skipped_reason.is_some() {
            Outcome::Skipped
        } else if self.severity.is_some() {
            Outcome::Issue
        } else {
            Outcome::Pass
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub issues: usize,
    pub passes: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub source_id: String,
    /// SHA-256 of the audited input.
    pub input_hash: String,
    pub mode: crate::model::CaptureMode,
    /// `deterministic` or `remote`.
    pub descriptor: String,
    pub tool_version: String,
    /// Only recorded on request, so reports stay reproducible by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub run_meta: RunMeta,
    pub counts: BTreeMap<Category, Counts>,
    pub issues: Vec<Finding>,
    pub passes: Vec<Finding>,
    pub skipped: Vec<Finding>,
    pub guidelines: Vec<Guideline>,
    /// Overall font review prose.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub font_summary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color_scheme: Option<SchemeSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparisons>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmony: Option<HarmonySuggestion>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(raw: &str) -> crate::Result<AuditReport> {
        let mut de = serde_json::Deserializer::from_str(raw);
        serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            crate::Error::schema(path, e.into_inner().to_string())
        })
    }

    pub fn issue_count(&self) -> usize {
        self.issues.len()
    }

    /// Issue totals per family (text, layout, color).
    pub fn family_counts(&self) -> BTreeMap<Family, usize> {
        let mut out: BTreeMap<Family, usize> = [Family::Text, Family::Layout, Family::Color]
            .into_iter()
            .map(|f| (f, 0))
            .collect();
        for issue in &self.issues {
            *out.entry(issue.category.family()).or_default() += 1;
        }
        out
    }

    pub fn findings(&self) -> impl Iterator<Item = &Finding> {
        self.issues.iter().chain(&self.passes).chain(&self.skipped)
    }
}

/// Everything besides findings that goes into a report.
#[derive(Debug, Clone, Default)]
pub struct ReportExtras {
    pub font_summary: Option<String>,
    pub color_scheme: Option<SchemeSummary>,
    pub comparison: Option<Comparisons>,
    pub harmony: Option<HarmonySuggestion>,
    pub notes: Vec<String>,
}

/// Orders findings (category order, then document order of the first
/// member) and splits them into issues, passes and skipped checks.
pub fn assemble_report(
    findings: Vec<Finding>,
    document_order: &HashMap<String, usize>,
    run_meta: RunMeta,
    extras: ReportExtras,
) -> AuditReport {
    let mut findings = findings;
    let first = |f: &Finding| {
        f.member_ids
            .iter()
            .filter_map(|id| document_order.get(id))
            .min()
            .copied()
            .unwrap_or(0)
    };
    findings.sort_by(|a, b| {
        (a.category, first(a), &a.group_key).cmp(&(b.category, first(b), &b.group_key))
    });
    let mut counts: BTreeMap<Category, Counts> = Category::ALL.iter().map(|c| (*c, Counts::default())).collect();
    let (mut issues, mut passes, mut skipped) = (Vec::new(), Vec::new(), Vec::new());
    for f in findings {
        let c = counts.get_mut(&f.category).expect("all categories present");
        match f.outcome() {
            Outcome::Issue => {
                c.issues += 1;
                issues.push(f);
            }
            Outcome::Pass => {
                c.passes += 1;
                passes.push(f);
            }
            Outcome::Skipped => {
                c.skipped += 1;
                skipped.push(f);
            }
        }
    }
    let mut used: Vec<Category> = issues.iter().chain(&passes).chain(&skipped).map(|f| f.category).collect();
    used.sort();
    used.dedup();
    AuditReport {
        run_meta,
        counts,
        issues,
        passes,
        skipped,
        guidelines: used.into_iter().map(guidelines::guideline).collect(),
        font_summary: extras.font_summary,
        color_scheme: extras.color_scheme,
        comparison: extras.comparison,
        harmony: extras.harmony,
        notes: extras.notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> RunMeta {
        RunMeta {
            source_id: "s".into(),
            input_hash: "h".into(),
            mode: crate::model::CaptureMode::Static,
            descriptor: "deterministic".into(),
            tool_version: "0".into(),
            timestamp: None,
        }
    }

    #[test]
    fn empty_report_has_zero_counts() {
        let r = assemble_report(Vec::new(), &HashMap::new(), meta(), ReportExtras::default());
        assert_eq!(r.counts.len(), 9);
        assert!(r.counts.values().all(|c| *c == Counts::default()));
        assert!(r.issues.is_empty());
    }

    #[test]
    fn ordering_and_counts() {
        let order: HashMap<String, usize> = [("a".to_string(), 5), ("b".to_string(), 1)].into();
        let findings = vec![
            Finding::pass(Category::ColorContrast, "x", "ok").members(&["b".into()], None),
            Finding::issue(Category::FontSize, "late", "small").members(&["a".into()], None),
            Finding::issue(Category::FontSize, "early", "small").members(&["b".into()], None),
            Finding::skipped(Category::LineLength, "page", "requires rendered snapshot"),
        ];
        let r = assemble_report(findings, &order, meta(), ReportExtras::default());
        let keys: Vec<&str> = r.issues.iter().map(|f| f.group_key.as_str()).collect();
        assert_eq!(keys, ["early", "late"]);
        assert_eq!(r.counts[&Category::FontSize].issues, 2);
        assert_eq!(r.counts[&Category::LineLength].skipped, 1);
        assert_eq!(r.issues[0].severity, Some(Severity::MustFix));
        assert_eq!(r.guidelines.len(), 3);
    }

    #[test]
    fn allowed_properties() {
        assert!(Category::Spacing.allows_property("margin-bottom"));
        assert!(!Category::Spacing.allows_property("margin-top"));
        assert!(Category::ColorContrast.allows_property("background-color"));
    }
}
