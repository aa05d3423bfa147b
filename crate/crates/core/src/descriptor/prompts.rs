//! Prompts sent to the remote descriptor, and parsing of its replies.
//!
//! Each prompt states the task, embeds the request payload as JSON and pins
//! the reply shape; replies that do not parse into that shape are rejected.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::{DescriptorRequest, DescriptorResponse, Provenance, RoleAssignment};
use crate::error::DescriptorError;

pub const SYSTEM: &str = "You are a visual design reviewer for web pages. \
Answer with JSON only, exactly in the requested shape, without commentary or code fences.";

pub const FONT_REVIEW: &str = "Review the font families used by the text groups of a web page. \
Body text and titles should use easily readable sans-serif families; decorative or narrow \
families suit headlines and decorative text only. Point out inconsistent mixes of families.\n\
Reply with a JSON array of exactly three elements: \
[\"<overall summary>\", {\"<group_key>\": \"<why its family should change>\"}, \
{\"<group_key>\": \"<why its family works>\"}]. Use only group keys from the input.\n\
Text groups:\n";

pub const COLOR_SCHEME_SUMMARY: &str = "Summarize the color scheme of a web page from the colors \
below, grouped by where they are used (backgrounds, text, borders, interactive elements, images). \
Use descriptive color names a designer would use.\n\
Reply with a JSON object: {\"summary\": \"<one or two sentences>\", \
\"details\": {\"<section>\": \"<description>\"}}.\n\
Color scheme:\n";

pub const PALETTE_ROLE_ASSIGNMENT: &str = "A palette of color roles was generated for a web page. \
Assign the best role to each element group for its background-color, color and border-color, so \
that text stays readable on its background and the page looks consistent. Fill roles (primary, \
secondary, tertiary, error, surface and their containers) pair with their on_ roles for text. \
Only restyle colors; keep every existing CSS class and never invent groups.\n\
Reply with a JSON object: {\"assignments\": [{\"group_key\": \"...\", \"property\": \
\"background-color|color|border-color\", \"role\": \"<role name>\"}], \"rationale\": \"...\"}.\n\
Palette and element groups:\n";

pub const COLOR_NAME: &str = "Give a short, human-friendly descriptive name for this sRGB color \
(for example a two or three word name such as a designer would use).\n\
Reply with a JSON object: {\"name\": \"...\"}.\n\
Color:\n";

/// System and user messages for a request.
pub fn render(request: &DescriptorRequest) -> (String, String) {
    let payload = match serde_json::to_value(request) {
        Ok(v) => v.get("payload").cloned().unwrap_or_default(),
        Err(_) => serde_json::Value::Null,
    };
    let head = match request {
        DescriptorRequest::FontReview { .. } => FONT_REVIEW,
        DescriptorRequest::ColorSchemeSummary { .. } => COLOR_SCHEME_SUMMARY,
        DescriptorRequest::PaletteRoleAssignment { .. } => PALETTE_ROLE_ASSIGNMENT,
        DescriptorRequest::ColorName { .. } => COLOR_NAME,
    };
    let body = serde_json::to_string_pretty(&payload).unwrap_or_default();
    (SYSTEM.to_string(), format!("{head}{body}"))
}

/// Strips a Markdown code fence some models wrap JSON in.
fn unfence(content: &str) -> &str {
    let t = content.trim();
    let Some(rest) = t.strip_prefix("```") else {
        return t;
    };
    let rest = rest.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    rest.strip_suffix("```").unwrap_or(rest).trim()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeReply {
    summary: String,
    #[serde(default)]
    details: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PaletteReply {
    assignments: Vec<RoleAssignment>,
    #[serde(default)]
    rationale: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NameReply {
    name: String,
}

fn schema<E: std::fmt::Display>(e: E) -> DescriptorError {
    DescriptorError::Schema(e.to_string())
}

/// Parses a reply to `request` (schema only; semantic checks are done by
/// [`super::validate`]).
pub fn parse_reply(request: &DescriptorRequest, content: &str) -> Result<DescriptorResponse, DescriptorError> {
    let raw = unfence(content);
    let provenance = Provenance::Remote;
    Ok(match request {
        DescriptorRequest::FontReview { .. } => {
            let (summary, issues, passes): (String, BTreeMap<String, String>, BTreeMap<String, String>) =
                serde_json::from_str(raw).map_err(schema)?;
            DescriptorResponse::FontReview {
                summary,
                issues,
                passes,
                provenance,
            }
        }
        DescriptorRequest::ColorSchemeSummary { .. } => {
            let r: SchemeReply = serde_json::from_str(raw).map_err(schema)?;
            DescriptorResponse::ColorSchemeSummary {
                summary: r.summary,
                details: r.details,
                provenance,
            }
        }
        DescriptorRequest::PaletteRoleAssignment { .. } => {
            let r: PaletteReply = serde_json::from_str(raw).map_err(schema)?;
            DescriptorResponse::PaletteRoleAssignment {
                assignments: r.assignments,
                rationale: r.rationale,
                provenance,
            }
        }
        DescriptorRequest::ColorName { .. } => {
            let r: NameReply = serde_json::from_str(raw).map_err(schema)?;
            DescriptorResponse::ColorName {
                name: r.name,
                provenance,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RgbaColor;

    #[test]
    fn font_review_reply_is_a_triple() {
        let req = DescriptorRequest::FontReview { groups: vec![] };
        let r = parse_reply(&req, "```json\n[\"ok\", {}, {}]\n```").unwrap();
        assert!(matches!(r, DescriptorResponse::FontReview { ref summary, .. } if summary == "ok"));
        assert!(parse_reply(&req, "[\"ok\", {}]").is_err());
        assert!(parse_reply(&req, "{\"summary\": \"ok\"}").is_err());
    }

    #[test]
    fn prompt_embeds_payload() {
        let req = DescriptorRequest::ColorName {
            color: RgbaColor::rgb(168, 180, 255),
        };
        let (_, user) = render(&req);
        assert!(user.starts_with(COLOR_NAME));
        assert!(user.contains("180"));
    }
}
