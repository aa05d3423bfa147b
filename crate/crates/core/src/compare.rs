//! Design comparison: site summaries, reference-site comparison and trend
//! profiles over a corpus of sites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::audit::{audit, AuditContext, AuditOptions, CompareSources};
use crate::color::{apca_lc, effective_background, nearest_named_color, MIN_LC};
use crate::color_audit::ContrastProfile;
use crate::descriptor::Deterministic;
use crate::error::{Error, Result};
use crate::layout::{find_alignment_groups, AlignKind};
use crate::model::{visible_elements, PageSnapshot};
use crate::report::Category;
use crate::stats;
use crate::text::fonts::resolve_families;
use crate::text::{rendered_lines, TextRole, LINE_CHARS_MAX, LINE_CHARS_MIN, MIN_BODY_FONT_PX, MIN_LINE_HEIGHT_RATIO, MIN_TITLE_FONT_PX};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineStats {
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastFailure {
    pub tag: String,
    pub lc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteColors {
    /// Named background colors, most used first.
    pub background: Vec<String>,
    /// Named text colors, most used first.
    pub text: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteSummary {
    pub source_id: String,
    pub modal_title_font_px: Option<f64>,
    pub modal_body_font_px: Option<f64>,
    /// First resolvable family of each text element → element count.
    pub family_frequencies: BTreeMap<String, usize>,
    pub modal_body_family: Option<String>,
    pub line_length_stats: Option<LineStats>,
    /// Most common non-zero margin and padding side values.
    pub modal_margin_px: Option<f64>,
    pub modal_padding_px: Option<f64>,
    pub modal_body_line_height_ratio: Option<f64>,
    pub alignment_counts: BTreeMap<AlignKind, usize>,
    pub contrast_failures: Vec<ContrastFailure>,
    pub scheme: SiteColors,
}

impl SiteSummary {
    /// Named numeric metrics, in a fixed order.
    pub fn metrics(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("title_font_px", self.modal_title_font_px),
            ("body_font_px", self.modal_body_font_px),
            ("line_length_chars", self.line_length_stats.map(|s| s.median)),
            ("line_height_ratio", self.modal_body_line_height_ratio),
            ("margin_px", self.modal_margin_px),
            ("padding_px", self.modal_padding_px),
        ]
    }
}

fn ranked_names(counts: BTreeMap<String, usize>) -> Vec<String> {
    let mut v: Vec<(String, usize)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.into_iter().map(|(n, _)| n).collect()
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

pub fn summarize_site(ctx: &AuditContext<'_>) -> SiteSummary {
    let mut title_sizes = Vec::new();
    let mut body_sizes = Vec::new();
    let mut body_ratios = Vec::new();
    let mut families: BTreeMap<String, usize> = BTreeMap::new();
    let mut body_families: BTreeMap<String, usize> = BTreeMap::new();
    let mut line_chars = Vec::new();
    let mut failures = Vec::new();
    let mut bg_names: BTreeMap<String, usize> = BTreeMap::new();
    let mut text_names: BTreeMap<String, usize> = BTreeMap::new();
    for (_, group, role) in ctx.text_groups() {
        for node in group.members(ctx.snapshot).filter(|n| n.has_text()) {
            let style = &node.style;
            let family = resolve_families(&style.font_families).family;
            *families.entry(family.clone()).or_default() += 1;
            match role {
                TextRole::Title => title_sizes.push(style.font_size),
                TextRole::Body => {
                    body_sizes.push(style.font_size);
                    body_ratios.push(round3(style.effective_line_height() / style.font_size));
                    *body_families.entry(family).or_default() += 1;
                    if let Some(lines) = rendered_lines(ctx, node).filter(|l| l.len() > 1) {
                        line_chars.extend(lines[..lines.len() - 1].iter().map(|l| l.chars as f64));
                    }
                }
                _ => {}
            }
            let bg = effective_background(&node.id, &ctx.index);
            let fg = style.color.over(bg);
            let lc = apca_lc(fg, bg);
            if lc.abs() < MIN_LC {
                failures.push(ContrastFailure {
                    tag: node.tag.clone(),
                    lc: round3(lc),
                });
            }
            *text_names.entry(nearest_named_color(fg).to_string()).or_default() += 1;
        }
    }
    let mut margins = Vec::new();
    let mut paddings = Vec::new();
    for node in visible_elements(ctx.snapshot) {
        margins.extend(node.style.margin.sides().iter().map(|s| s.1).filter(|v| *v > 0.0));
        paddings.extend(node.style.padding.sides().iter().map(|s| s.1).filter(|v| *v > 0.0));
        if !node.style.background_color.is_transparent() {
            let bg = effective_background(&node.id, &ctx.index);
            *bg_names.entry(nearest_named_color(bg).to_string()).or_default() += 1;
        }
    }
    if ctx.snapshot.root.style.background_color.is_transparent() {
        let bg = effective_background(&ctx.snapshot.root.id, &ctx.index);
        *bg_names.entry(nearest_named_color(bg).to_string()).or_default() += 1;
    }
    let mut alignment_counts = BTreeMap::new();
    if ctx.rendered() {
        for g in find_alignment_groups(ctx.snapshot, &ctx.index) {
            *alignment_counts.entry(g.kind).or_default() += 1;
        }
    }
    let modal_family = |m: &BTreeMap<String, usize>| {
        // Highest count; ties go to the alphabetically first family.
        m.iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(f, _)| f.clone())
    };
    SiteSummary {
        source_id: ctx.snapshot.source_id.clone(),
        modal_title_font_px: stats::mode(&title_sizes),
        modal_body_font_px: stats::mode(&body_sizes),
        modal_body_family: modal_family(&body_families),
        family_frequencies: families,
        line_length_stats: stats::median(&line_chars).map(|median| LineStats {
            median,
            p10: stats::percentile(&line_chars, 10.0).expect("non-empty"),
            p90: stats::percentile(&line_chars, 90.0).expect("non-empty"),
        }),
        modal_margin_px: stats::mode(&margins),
        modal_padding_px: stats::mode(&paddings),
        modal_body_line_height_ratio: stats::mode(&body_ratios),
        alignment_counts,
        contrast_failures: failures,
        scheme: SiteColors {
            background: ranked_names(bg_names),
            text: ranked_names(text_names),
        },
    }
}

pub fn summarize_snapshot(snapshot: &PageSnapshot) -> Result<SiteSummary> {
    Ok(summarize_site(&AuditContext::new(snapshot)?))
}

/// A page metric next to the guideline it is judged by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidelineComparison {
    pub metric: String,
    pub guideline: String,
    pub value: Option<f64>,
    pub meets: Option<bool>,
}

pub fn guideline_comparison(mine: &SiteSummary) -> Vec<GuidelineComparison> {
    let row = |metric: &str, guideline: &str, value: Option<f64>, ok: &dyn Fn(f64) -> bool| GuidelineComparison {
        metric: metric.into(),
        guideline: guideline.into(),
        value,
        meets: value.map(ok),
    };
    vec![
        row("title_font_px", "at least 20px", mine.modal_title_font_px, &|v| v >= MIN_TITLE_FONT_PX),
        row("body_font_px", "at least 16px", mine.modal_body_font_px, &|v| v >= MIN_BODY_FONT_PX),
        row(
            "line_length_chars",
            "50 to 75 characters",
            mine.line_length_stats.map(|s| s.median),
            &|v| (LINE_CHARS_MIN..=LINE_CHARS_MAX).contains(&v),
        ),
        row(
            "line_height_ratio",
            "at least 1.5",
            mine.modal_body_line_height_ratio,
            &|v| v >= MIN_LINE_HEIGHT_RATIO,
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub metric: String,
    pub mine: Option<f64>,
    pub reference: Option<f64>,
    /// `reference - mine` when both are known.
    pub delta: Option<f64>,
}

/// An element type on the reference page that breaks a guideline.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReferenceViolation {
    pub category: Category,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub reference: SiteSummary,
    pub deltas: Vec<MetricDelta>,
    pub violations: Vec<ReferenceViolation>,
    pub notes: Vec<String>,
}

fn fmt_px(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r.fract() == 0.0 {
        format!("{}px", r as i64)
    } else {
        format!("{r}px")
    }
}

/// Summarizes and audits the reference page and sets it against `mine`.
/// Reference values are reported, never turned into suggestions.
pub fn compare_with_reference(mine: &SiteSummary, reference: &PageSnapshot) -> Result<ReferenceComparison> {
    let ref_err = |e: Error| Error::ReferenceIngest(e.to_string());
    let summary = summarize_snapshot(reference).map_err(ref_err)?;
    let report = audit(
        reference,
        &[],
        &AuditOptions {
            descriptor: &Deterministic,
            compare: CompareSources::default(),
            contrast_profile: ContrastProfile::Flat,
            timestamp: None,
        },
    )
    .map_err(ref_err)?;
    let tags: BTreeMap<&str, &str> = reference.elements().map(|n| (n.id.as_str(), n.tag.as_str())).collect();
    let violations: BTreeSet<ReferenceViolation> = report
        .issues
        .iter()
        .filter(|f| f.category != Category::ColorHarmony && f.category != Category::SpatialAlignment)
        .flat_map(|f| {
            f.member_ids.iter().filter_map(|id| tags.get(id.as_str())).map(|tag| ReferenceViolation {
                category: f.category,
                tag: tag.to_string(),
            })
        })
        .collect();
    let mine_metrics = mine.metrics();
    let deltas = summary
        .metrics()
        .into_iter()
        .zip(mine_metrics)
        .map(|((metric, r), (_, m))| MetricDelta {
            metric: metric.into(),
            mine: m,
            reference: r,
            delta: r.zip(m).map(|(r, m)| round3(r - m)),
        })
        .collect();
    let mut notes = Vec::new();
    if let (Some(r), Some(m)) = (summary.modal_body_font_px, mine.modal_body_font_px) {
        if r >= MIN_BODY_FONT_PX && m < MIN_BODY_FONT_PX {
            notes.push(format!(
                "The reference uses {} body text, above the 16px guideline; this page uses {}.",
                fmt_px(r),
                fmt_px(m)
            ));
        } else if r > MIN_TITLE_FONT_PX {
            notes.push(format!(
                "The reference uses {} body text, well above the 16px guideline.",
                fmt_px(r)
            ));
        }
    }
    let by_category: BTreeMap<Category, Vec<&str>> =
        violations.iter().fold(BTreeMap::new(), |mut acc, v| {
            acc.entry(v.category).or_insert_with(Vec::new).push(v.tag.as_str());
            acc
        });
    for (category, tags) in by_category {
        let what = match category {
            Category::ColorContrast => "color contrast lower than the recommended minimum".to_string(),
            other => format!("{} issues", other.title().to_lowercase()),
        };
        notes.push(format!(
            "The reference website has {what} in the {} tag{}.",
            tags.join(", "),
            if tags.len() == 1 { "" } else { "s" }
        ));
    }
    Ok(ReferenceComparison {
        reference: summary,
        deltas,
        violations: violations.into_iter().collect(),
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendCategory {
    Blog,
    Tutorial,
    PersonalWebsite,
    OrganizationWebsite,
    NewsMagazine,
}

impl TrendCategory {
    pub const ALL: [TrendCategory; 5] = [
        TrendCategory::Blog,
        TrendCategory::Tutorial,
        TrendCategory::PersonalWebsite,
        TrendCategory::OrganizationWebsite,
        TrendCategory::NewsMagazine,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TrendCategory::Blog => "blog",
            TrendCategory::Tutorial => "tutorial",
            TrendCategory::PersonalWebsite => "personal_website",
            TrendCategory::OrganizationWebsite => "organization_website",
            TrendCategory::NewsMagazine => "news_magazine",
        }
    }
}

impl fmt::Display for TrendCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrendCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        TrendCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown trend category `{s}` (expected one of: {})",
                    TrendCategory::ALL.map(|c| c.as_str()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDistribution {
    pub modal: f64,
    /// Spread of per-site values: `[min(p10, modal), max(p90, modal)]`.
    pub range: (f64, f64),
    /// `(value, number of sites)`, by value.
    pub frequencies: Vec<(f64, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranked {
    pub name: String,
    pub sites: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendProfile {
    pub category: TrendCategory,
    pub n_sites: usize,
    pub metrics: BTreeMap<String, MetricDistribution>,
    /// Body text families by number of sites using them.
    pub top_families: Vec<Ranked>,
    /// Named colors by number of sites using them.
    pub top_colors: Vec<Ranked>,
}

fn distribution(values: &[f64]) -> Option<MetricDistribution> {
    let modal = stats::mode(values)?;
    let p10 = stats::percentile(values, 10.0)?;
    let p90 = stats::percentile(values, 90.0)?;
    let mut freq: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for v in values {
        let e = freq.entry((v * 1000.0).round() as i64).or_insert((*v, 0));
        e.1 += 1;
    }
    Some(MetricDistribution {
        modal,
        range: (p10.min(modal), p90.max(modal)),
        frequencies: freq.into_values().collect(),
    })
}

fn rank(counts: BTreeMap<String, usize>) -> Vec<Ranked> {
    let mut v: Vec<Ranked> = counts.into_iter().map(|(name, sites)| Ranked { name, sites }).collect();
    v.sort_by(|a, b| b.sites.cmp(&a.sites).then_with(|| a.name.cmp(&b.name)));
    v
}

/// Pools per-site summaries: each site casts one vote per metric (its own
/// modal value), so long pages do not dominate.
pub fn aggregate_summaries(sites: &[SiteSummary], category: TrendCategory) -> Result<TrendProfile> {
    if sites.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut per_metric: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    let mut families: BTreeMap<String, usize> = BTreeMap::new();
    let mut colors: BTreeMap<String, usize> = BTreeMap::new();
    for s in sites {
        for (m, v) in s.metrics() {
            if let Some(v) = v {
                per_metric.entry(m).or_default().push(v);
            }
        }
        if let Some(f) = &s.modal_body_family {
            *families.entry(f.clone()).or_default() += 1;
        }
        let used: BTreeSet<&String> = s.scheme.background.iter().chain(&s.scheme.text).collect();
        for c in used {
            *colors.entry(c.clone()).or_default() += 1;
        }
    }
    Ok(TrendProfile {
        category,
        n_sites: sites.len(),
        metrics: per_metric
            .into_iter()
            .filter_map(|(m, v)| distribution(&v).map(|d| (m.to_string(), d)))
            .collect(),
        top_families: rank(families),
        top_colors: rank(colors),
    })
}

/// Trend profile of a corpus of snapshots.
pub fn aggregate_trends(corpus: &[PageSnapshot], category: TrendCategory) -> Result<TrendProfile> {
    let summaries = corpus.iter().map(summarize_snapshot).collect::<Result<Vec<_>>>()?;
    aggregate_summaries(&summaries, category)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub metric: String,
    pub mine: Option<f64>,
    pub modal: f64,
    pub range: (f64, f64),
    pub within_range: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendComparison {
    pub category: TrendCategory,
    pub n_sites: usize,
    pub rows: Vec<TrendRow>,
    pub top_families: Vec<Ranked>,
    pub top_colors: Vec<Ranked>,
}

pub fn compare_with_trends(mine: &SiteSummary, profile: &TrendProfile) -> TrendComparison {
    let rows = mine
        .metrics()
        .into_iter()
        .filter_map(|(metric, value)| {
            let d = profile.metrics.get(metric)?;
            Some(TrendRow {
                metric: metric.into(),
                mine: value,
                modal: d.modal,
                range: d.range,
                within_range: value.map(|v| v >= d.range.0 && v <= d.range.1),
            })
        })
        .collect();
    TrendComparison {
        category: profile.category,
        n_sites: profile.n_sites,
        rows,
        top_families: profile.top_families.iter().take(5).cloned().collect(),
        top_colors: profile.top_colors.iter().take(5).cloned().collect(),
    }
}

/// Comparison sections of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparisons {
    pub guideline: Vec<GuidelineComparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceComparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<TrendComparison>,
}

/// Trend corpus manifest: snapshot paths relative to the manifest file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendManifest {
    pub category: TrendCategory,
    pub sites: Vec<String>,
    /// Capture date (ISO 8601).
    pub captured: String,
}

impl TrendManifest {
    pub fn load(path: &Path) -> Result<(TrendManifest, Vec<PathBuf>)> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let mut de = serde_json::Deserializer::from_str(&raw);
        let manifest: TrendManifest = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let p = e.path().to_string();
            Error::schema(p, e.into_inner().to_string())
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let paths = manifest.sites.iter().map(|s| base.join(s)).collect();
        Ok((manifest, paths))
    }

    /// Manifest listing every snapshot (`*.snapshot.json`) and page
    /// (`*.html`) in `dir`, sorted by file name. Paths are relative to `dir`.
    pub fn scan(dir: &Path, category: TrendCategory, captured: &str) -> Result<TrendManifest> {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::io(format!("listing {}", dir.display()), e))?;
        let mut sites = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(format!("listing {}", dir.display()), e))?;
            let name = entry.file_name().to_string_lossy().to_string();
            let lower = name.to_ascii_lowercase();
            if lower.ends_with(".snapshot.json") || lower.ends_with(".html") || lower.ends_with(".htm") {
                sites.push(name);
            }
        }
        sites.sort();
        if sites.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(TrendManifest {
            category,
            sites,
            captured: captured.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn categories_parse() {
        assert_eq!("blog".parse::<TrendCategory>().unwrap(), TrendCategory::Blog);
        assert_eq!(
            "News-Magazine".parse::<TrendCategory>().unwrap(),
            TrendCategory::NewsMagazine
        );
        assert!("forum".parse::<TrendCategory>().is_err());
    }

    #[test]
    fn distribution_keeps_modal_in_range() {
        let d = distribution(&[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 50.0, 60.0]).unwrap();
        assert_eq!(d.modal, 1.0);
        assert!(d.range.0 <= d.modal && d.modal <= d.range.1);
        assert_eq!(d.frequencies, vec![(1.0, 9), (50.0, 1), (60.0, 1)]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(aggregate_summaries(&[], TrendCategory::Blog), Err(Error::EmptyCorpus)));
    }
}
