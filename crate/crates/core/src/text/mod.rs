//! Legibility and readability checks: font size, font family, line length
//! and line spacing.

pub mod fonts;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::audit::AuditContext;
use crate::descriptor::{Descriptor, DescriptorRequest, DescriptorResponse, FontGroup};
use crate::error::DescriptorError;
use crate::groups::StyleGroup;
use crate::model::ElementNode;
use crate::ocr::{normalize_text, MatchKind};
use crate::report::{Category, Finding, Suggestion};
use crate::stats;

use fonts::{resolve_families, ClassSource, FontClass};

pub const MIN_BODY_FONT_PX: f64 = 16.0;
pub const MIN_TITLE_FONT_PX: f64 = 20.0;
pub const MIN_LINE_HEIGHT_RATIO: f64 = 1.5;
pub const LINE_CHARS_MIN: f64 = 50.0;
pub const LINE_CHARS_MAX: f64 = 75.0;
/// Line length the width suggestions aim for.
pub const LINE_CHARS_TARGET: f64 = 62.5;
/// Relative size at which non-heading text counts as a title.
pub const TITLE_SIZE_RATIO: f64 = 1.5;
/// `span` elements with at least this many characters count as body text.
pub const SPAN_BODY_CHARS: usize = 20;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextRole {
    Title,
    Body,
    Decorative,
    Other,
}

impl TextRole {
    pub fn as_str(self) -> &'static str {
        match self {
            TextRole::Title => "title",
            TextRole::Body => "body",
            TextRole::Decorative => "decorative",
            TextRole::Other => "other",
        }
    }
}

pub const HEADING_TAGS: &[&str] = &["h1", "h2", "h3", "h4", "h5", "h6"];
pub const BODY_TAGS: &[&str] = &["p", "li", "td", "a", "label"];

fn is_decorative_family(families: &[String]) -> bool {
    families
        .iter()
        .any(|f| matches!(f.to_ascii_lowercase().as_str(), "cursive" | "fantasy"))
        || resolve_families(families).class == FontClass::Decorative
}

/// Role of a text-bearing group. Headings and text at least 1.5× the
/// page's modal body size are titles; paragraph-like tags (and long spans)
/// are body text; cursive/fantasy faces are decorative; the rest is other.
pub fn classify_text_role(group: &StyleGroup, longest_text: usize, modal_body_size: f64) -> TextRole {
    let tag = group.tag.as_str();
    if HEADING_TAGS.contains(&tag) || group.shared_style.font_size + EPS >= TITLE_SIZE_RATIO * modal_body_size {
        TextRole::Title
    } else if BODY_TAGS.contains(&tag) || (tag == "span" && longest_text >= SPAN_BODY_CHARS) {
        TextRole::Body
    } else if is_decorative_family(&group.shared_style.font_families) {
        TextRole::Decorative
    } else {
        TextRole::Other
    }
}

/// Modal font size of body-like text elements (all text elements when the
/// page has none); 16px for pages without text.
pub fn modal_body_font_size<'a>(text_elements: impl Iterator<Item = &'a ElementNode> + Clone) -> f64 {
    let body: Vec<f64> = text_elements
        .clone()
        .filter(|n| BODY_TAGS.contains(&n.tag.as_str()) || n.tag == "span")
        .map(|n| n.style.font_size)
        .collect();
    let all: Vec<f64> = text_elements.map(|n| n.style.font_size).collect();
    stats::mode(&body)
        .or_else(|| stats::mode(&all))
        .unwrap_or(MIN_BODY_FONT_PX)
}

fn px(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r.fract() == 0.0 {
        format!("{}px", r as i64)
    } else {
        format!("{r}px")
    }
}

fn num(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    format!("{r}")
}

fn finding_for(ctx: &AuditContext<'_>, gi: usize, finding: Finding) -> Finding {
    let g = &ctx.groups[gi];
    finding.members(&g.member_ids, g.sample_text.as_deref())
}

fn suggestion(ctx: &AuditContext<'_>, gi: usize, property: &str, value: String, rationale: &str) -> Suggestion {
    Suggestion {
        selector: ctx.selectors[gi].clone(),
        property: property.to_string(),
        value,
        rationale: rationale.to_string(),
        alternative: 0,
    }
}

pub fn check_font_size(ctx: &AuditContext<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (gi, group, role) in ctx.text_groups() {
        let size = group.shared_style.font_size;
        let key = &group.group_key;
        let min = match role {
            TextRole::Body => Some(MIN_BODY_FONT_PX),
            TextRole::Title => Some(MIN_TITLE_FONT_PX),
            _ => None,
        };
        let f = match min {
            Some(min) if size + EPS < min => Finding::issue(
                Category::FontSize,
                key,
                format!(
                    "{} text is {}; {} text should be {} or larger.",
                    capitalize(role.as_str()),
                    px(size),
                    role.as_str(),
                    px(min)
                ),
            )
            .suggest(suggestion(ctx, gi, "font-size", px(min), "smallest recommended size for this kind of text")),
            Some(min) => Finding::pass(
                Category::FontSize,
                key,
                format!("{} text is {}, at or above the {} minimum.", capitalize(role.as_str()), px(size), px(min)),
            ),
            None => Finding::pass(
                Category::FontSize,
                key,
                format!("{} is {} text; no minimum size applies.", px(size), role.as_str()),
            ),
        };
        out.push(finding_for(ctx, gi, f));
    }
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Font-review request covering every text-bearing group.
pub fn font_review_request(ctx: &AuditContext<'_>) -> DescriptorRequest {
    DescriptorRequest::FontReview {
        groups: ctx
            .text_groups()
            .map(|(_, g, role)| FontGroup {
                group_key: g.group_key.clone(),
                tag: g.tag.clone(),
                role,
                families: g.shared_style.font_families.clone(),
            })
            .collect(),
    }
}

/// Font family review. Verdicts come from the family classifier; the
/// descriptor supplies the prose. Returns the findings and the review summary.
pub fn check_font_family(
    ctx: &AuditContext<'_>,
    descriptor: &dyn Descriptor,
) -> Result<(Vec<Finding>, String), DescriptorError> {
    let (summary, issues, passes) = match descriptor.describe(&font_review_request(ctx))? {
        DescriptorResponse::FontReview {
            summary,
            issues,
            passes,
            ..
        } => (summary, issues, passes),
        _ => return Err(DescriptorError::Schema("expected a font review".into())),
    };
    let mut out = Vec::new();
    for (gi, group, role) in ctx.text_groups() {
        let verdict = resolve_families(&group.shared_style.font_families);
        let key = &group.group_key;
        let allowed = fonts::family_allowed(role, verdict.class);
        let prose = |map: &BTreeMap<String, String>, fallback: String| map.get(key).cloned().unwrap_or(fallback);
        let mut f = if allowed {
            Finding::pass(
                Category::FontFamily,
                key,
                prose(
                    &passes,
                    format!("{} ({}) suits {} text.", verdict.family, verdict.class.as_str(), role.as_str()),
                ),
            )
        } else {
            Finding::issue(
                Category::FontFamily,
                key,
                prose(
                    &issues,
                    format!(
                        "{} is a {} family, which reads less well than sans-serif for {} text.",
                        verdict.family,
                        verdict.class.as_str(),
                        role.as_str()
                    ),
                ),
            )
            .suggest(suggestion(
                ctx,
                gi,
                "font-family",
                fonts::SUGGESTED_FAMILY.to_string(),
                "widely available sans-serif stack",
            ))
        };
        match verdict.source {
            ClassSource::Heuristic => {
                f = f.note(format!(
                    "`{}` is not in the family table; classified as {} from its name",
                    verdict.family,
                    verdict.class.as_str()
                ))
            }
            ClassSource::Default => {
                f = f.note(format!(
                    "no recognizable family in {:?}; assuming the browser default serif",
                    group.shared_style.font_families
                ))
            }
            _ => {}
        }
        out.push(finding_for(ctx, gi, f));
    }
    Ok((out, summary))
}

pub fn check_line_spacing(ctx: &AuditContext<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (gi, group, role) in ctx.text_groups() {
        let key = &group.group_key;
        let style = &group.shared_style;
        let f = if role != TextRole::Body {
            Finding::pass(
                Category::LineSpacing,
                key,
                format!("{} text; the line-height rule applies to body text only.", capitalize(role.as_str())),
            )
        } else {
            let lh = style.effective_line_height();
            let ratio = lh / style.font_size;
            let described = match style.line_height {
                Some(_) => format!("Line height {} is {}× the {} font size", px(lh), num(ratio), px(style.font_size)),
                None => format!("Line height is `normal` (about {}× the {} font size)", num(ratio), px(style.font_size)),
            };
            if lh + EPS < MIN_LINE_HEIGHT_RATIO * style.font_size {
                Finding::issue(Category::LineSpacing, key, format!("{described}; body text needs at least 1.5×."))
                    .suggest(suggestion(ctx, gi, "line-height", "1.5".into(), "1.5 times the font size"))
            } else {
                Finding::pass(Category::LineSpacing, key, format!("{described}."))
            }
        };
        out.push(finding_for(ctx, gi, f));
    }
    out
}

/// One rendered line of an element.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedLine {
    pub chars: usize,
    pub width: f64,
}

/// Rendered lines of an element from native line boxes, else OCR matches.
pub fn rendered_lines(ctx: &AuditContext<'_>, node: &ElementNode) -> Option<Vec<RenderedLine>> {
    let text = node.text.as_deref().map(normalize_text).unwrap_or_default();
    let total = text.chars().count();
    if let Some(boxes) = node.line_boxes.as_ref().filter(|b| !b.is_empty()) {
        let sum: f64 = boxes.iter().map(|b| b.width).sum();
        let mut lines = Vec::new();
        let mut assigned = 0usize;
        let mut acc = 0.0;
        for b in boxes {
            acc += b.width;
            let upto = if sum > 0.0 {
                (total as f64 * acc / sum).round() as usize
            } else {
                total
            };
            lines.push(RenderedLine {
                chars: upto.saturating_sub(assigned),
                width: b.width,
            });
            assigned = upto;
        }
        return Some(lines);
    }
    let matches = ctx.matches.as_ref()?;
    let m = matches.match_for(&node.id)?;
    match m.kind {
        MatchKind::ManyToOne => Some(vec![RenderedLine {
            chars: total,
            width: node.bbox.map(|b| b.width).unwrap_or(0.0),
        }]),
        _ => Some(
            matches
                .lines_for(&node.id)
                .into_iter()
                .map(|l| RenderedLine {
                    chars: normalize_text(&l.text).chars().count(),
                    width: l.bbox.width,
                })
                .collect(),
        ),
    }
}

pub fn check_line_length(ctx: &AuditContext<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (gi, group, role) in ctx.text_groups() {
        let key = &group.group_key;
        if !ctx.rendered() {
            out.push(finding_for(
                ctx,
                gi,
                Finding::skipped(Category::LineLength, key, "requires rendered snapshot"),
            ));
            continue;
        }
        if !matches!(role, TextRole::Body | TextRole::Title) {
            out.push(finding_for(
                ctx,
                gi,
                Finding::pass(
                    Category::LineLength,
                    key,
                    format!("{} text; line length rules apply to body text and titles.", capitalize(role.as_str())),
                ),
            ));
            continue;
        }
        let per_member: Vec<(&ElementNode, Vec<RenderedLine>)> = group
            .members(ctx.snapshot)
            .filter(|n| n.has_text())
            .filter_map(|n| rendered_lines(ctx, n).map(|l| (n, l)))
            .collect();
        if per_member.is_empty() {
            out.push(finding_for(
                ctx,
                gi,
                Finding::skipped(Category::LineLength, key, "no rendered line data (line boxes or OCR) for this group"),
            ));
            continue;
        }
        let f = if role == TextRole::Title {
            match per_member.iter().find(|(_, lines)| lines.len() > 1) {
                Some((node, lines)) => {
                    let needed: f64 = lines.iter().map(|l| l.width).sum::<f64>().ceil() + 2.0;
                    Finding::issue(
                        Category::LineLength,
                        key,
                        format!("Title breaks across {} lines; short titles read best on one line.", lines.len()),
                    )
                    .note(format!("first wrapped member: {}", node.id))
                    .suggest(suggestion(ctx, gi, "width", px(needed), "wide enough for the title to fit on one line"))
                }
                None => Finding::pass(Category::LineLength, key, "Title fits on one line."),
            }
        } else {
            // Final lines of paragraphs are usually short; measure the others.
            let mut chars = Vec::new();
            let mut widths = Vec::new();
            for (node, lines) in &per_member {
                if lines.len() < 2 {
                    continue;
                }
                chars.extend(lines[..lines.len() - 1].iter().map(|l| l.chars as f64));
                widths.push(node.bbox.map(|b| b.width).unwrap_or_else(|| {
                    lines.iter().map(|l| l.width).fold(0.0, f64::max)
                }));
            }
            match stats::median(&chars) {
                None => Finding::pass(Category::LineLength, key, "Text fits on a single line; no wrapped lines to measure."),
                Some(median) => {
                    let width = stats::median(&widths).unwrap_or(0.0);
                    let target = (width * LINE_CHARS_TARGET / median).round();
                    if median > LINE_CHARS_MAX {
                        Finding::issue(
                            Category::LineLength,
                            key,
                            format!("Lines hold about {} characters; 50 to 75 is easiest to read.", num(median)),
                        )
                        .suggest(suggestion(ctx, gi, "max-width", px(target), "narrower column for about 62 characters per line"))
                    } else if median < LINE_CHARS_MIN {
                        Finding::issue(
                            Category::LineLength,
                            key,
                            format!("Lines hold about {} characters; 50 to 75 is easiest to read.", num(median)),
                        )
                        .suggest(suggestion(ctx, gi, "width", px(target), "wider column for about 62 characters per line"))
                    } else {
                        Finding::pass(
                            Category::LineLength,
                            key,
                            format!("Lines hold about {} characters, within 50 to 75.", num(median)),
                        )
                    }
                }
            }
        };
        out.push(finding_for(ctx, gi, f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::AuditedStyle;
    use crate::model::{ElementNode, RgbaColor};

    fn group(tag: &str, size: f64, families: &[&str]) -> StyleGroup {
        let mut n = ElementNode::new("x", tag);
        n.style.font_size = size;
        n.style.font_families = families.iter().map(|s| s.to_string()).collect();
        n.style.color = RgbaColor::BLACK;
        StyleGroup {
            group_key: tag.into(),
            tag: tag.into(),
            classes: vec![],
            member_ids: vec!["x".into()],
            shared_style: AuditedStyle::of(&n),
            sample_text: None,
        }
    }

    #[test]
    fn role_table() {
        assert_eq!(classify_text_role(&group("h2", 12.0, &["Arial"]), 5, 16.0), TextRole::Title);
        assert_eq!(classify_text_role(&group("div", 24.0, &["Arial"]), 5, 16.0), TextRole::Title);
        assert_eq!(classify_text_role(&group("div", 23.9, &["Arial"]), 5, 16.0), TextRole::Other);
        assert_eq!(classify_text_role(&group("p", 16.0, &["Arial"]), 200, 16.0), TextRole::Body);
        assert_eq!(classify_text_role(&group("span", 16.0, &["Arial"]), 20, 16.0), TextRole::Body);
        assert_eq!(classify_text_role(&group("span", 16.0, &["Papyrus", "fantasy"]), 5, 16.0), TextRole::Decorative);
        assert_eq!(classify_text_role(&group("span", 16.0, &["Foo", "cursive"]), 5, 16.0), TextRole::Decorative);
        assert_eq!(classify_text_role(&group("span", 16.0, &["Arial"]), 5, 16.0), TextRole::Other);
        assert_eq!(classify_text_role(&group("button", 13.0, &["Arial"]), 5, 16.0), TextRole::Other);
    }
}
