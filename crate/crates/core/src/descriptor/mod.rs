//! Natural-language descriptions behind a pluggable provider.
//!
//! Every prose-producing step (font review, color scheme summary, palette
//! role assignment, color naming) goes through [`Descriptor`]. The default
//! [`Deterministic`] provider renders templated text from rule tables; the
//! [`remote::RemoteDescriptor`] asks a chat-completions endpoint. Every
//! response is validated against its request before use.

mod deterministic;
pub mod prompts;
pub mod remote;

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::color::{ColorPalette, PaletteRole};
use crate::color_audit::ColorScheme;
use crate::error::DescriptorError;
use crate::model::RgbaColor;
use crate::text::TextRole;

pub use deterministic::Deterministic;
pub use remote::{RemoteConfig, RemoteDescriptor};

pub const ENV_URL: &str = "DESIGNLINT_LLM_URL";
pub const ENV_KEY: &str = "DESIGNLINT_LLM_KEY";
pub const ENV_MODEL: &str = "DESIGNLINT_LLM_MODEL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Deterministic,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FontGroup {
    pub group_key: String,
    pub tag: String,
    pub role: TextRole,
    pub families: Vec<String>,
}

/// One style group as seen by the palette role assigner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteElement {
    pub group_key: String,
    pub selector: String,
    pub tag: String,
    pub classes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_role: Option<TextRole>,
    pub has_text: bool,
    /// Own background, when not transparent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<RgbaColor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub border: Option<RgbaColor>,
    pub color: RgbaColor,
    /// Group keys of the element's ancestors, nearest first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ancestor_groups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum DescriptorRequest {
    FontReview {
        groups: Vec<FontGroup>,
    },
    ColorSchemeSummary {
        scheme: ColorScheme,
    },
    PaletteRoleAssignment {
        palette: ColorPalette,
        elements: Vec<PaletteElement>,
    },
    ColorName {
        color: RgbaColor,
    },
}

impl DescriptorRequest {
    pub fn kind(&self) -> &'static str {
        match self {
            DescriptorRequest::FontReview { .. } => "font_review",
            DescriptorRequest::ColorSchemeSummary { .. } => "color_scheme_summary",
            DescriptorRequest::PaletteRoleAssignment { .. } => "palette_role_assignment",
            DescriptorRequest::ColorName { .. } => "color_name",
        }
    }
}

/// CSS properties a palette assignment may set.
pub const PALETTE_PROPERTIES: &[&str] = &["color", "background-color", "border-color"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub group_key: String,
    pub property: String,
    pub role: PaletteRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DescriptorResponse {
    FontReview {
        summary: String,
        /// Group key → why its family should change.
        issues: BTreeMap<String, String>,
        /// Group key → why its family works.
        passes: BTreeMap<String, String>,
        provenance: Provenance,
    },
    ColorSchemeSummary {
        summary: String,
        /// Scheme section (background, text, …) → description.
        details: BTreeMap<String, String>,
        provenance: Provenance,
    },
    PaletteRoleAssignment {
        assignments: Vec<RoleAssignment>,
        rationale: String,
        provenance: Provenance,
    },
    ColorName {
        name: String,
        provenance: Provenance,
    },
}

impl DescriptorResponse {
    pub fn provenance(&self) -> Provenance {
        match self {
            DescriptorResponse::FontReview { provenance, .. }
            | DescriptorResponse::ColorSchemeSummary { provenance, .. }
            | DescriptorResponse::PaletteRoleAssignment { provenance, .. }
            | DescriptorResponse::ColorName { provenance, .. } => *provenance,
        }
    }
}

pub trait Descriptor: Send + Sync {
    fn describe(&self, request: &DescriptorRequest) -> Result<DescriptorResponse, DescriptorError>;

    /// `deterministic` or `remote`.
    fn mode_name(&self) -> &'static str;

    /// Diagnostics gathered since the last call (fallbacks, retries).
    fn take_notes(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Checks that a response answers `request`: same kind, only known keys,
/// non-empty prose.
pub fn validate(request: &DescriptorRequest, response: &DescriptorResponse) -> Result<(), DescriptorError> {
    let bad = |m: String| Err(DescriptorError::Schema(m));
    match (request, response) {
        (
            DescriptorRequest::FontReview { groups },
            DescriptorResponse::FontReview {
                summary, issues, passes, ..
            },
        ) => {
            if summary.trim().is_empty() {
                return bad("font review summary is empty".into());
            }
            for key in issues.keys().chain(passes.keys()) {
                if !groups.iter().any(|g| &g.group_key == key) {
                    return bad(format!("font review names unknown group `{key}`"));
                }
            }
            if let Some(k) = issues.keys().find(|k| passes.contains_key(*k)) {
                return bad(format!("group `{k}` is both an issue and a pass"));
            }
            Ok(())
        }
        (DescriptorRequest::ColorSchemeSummary { .. }, DescriptorResponse::ColorSchemeSummary { summary, .. }) => {
            if summary.trim().is_empty() {
                bad("color scheme summary is empty".into())
            } else {
                Ok(())
            }
        }
        (
            DescriptorRequest::PaletteRoleAssignment { elements, .. },
            DescriptorResponse::PaletteRoleAssignment { assignments, .. },
        ) => {
            for a in assignments {
                if !elements.iter().any(|e| e.group_key == a.group_key) {
                    return bad(format!("assignment for unknown group `{}`", a.group_key));
                }
                if !PALETTE_PROPERTIES.contains(&a.property.as_str()) {
                    return bad(format!("assignment sets unsupported property `{}`", a.property));
                }
            }
            Ok(())
        }
        (DescriptorRequest::ColorName { .. }, DescriptorResponse::ColorName { name, .. }) => {
            if name.trim().is_empty() {
                bad("color name is empty".into())
            } else {
                Ok(())
            }
        }
        _ => bad(format!("response does not answer a {} request", request.kind())),
    }
}

/// Remote descriptor that falls back to deterministic output (with a note)
/// whenever the endpoint fails or answers off-schema.
pub struct FallbackDescriptor {
    remote: RemoteDescriptor,
    local: Deterministic,
    notes: Mutex<Vec<String>>,
}

impl FallbackDescriptor {
    pub fn new(remote: RemoteDescriptor) -> Self {
        FallbackDescriptor {
            remote,
            local: Deterministic,
            notes: Mutex::new(Vec::new()),
        }
    }
}

impl Descriptor for FallbackDescriptor {
    fn describe(&self, request: &DescriptorRequest) -> Result<DescriptorResponse, DescriptorError> {
        match self.remote.describe(request) {
            Ok(r) => Ok(r),
            Err(e) => {
                self.notes
                    .lock()
                    .expect("notes lock")
                    .push(format!("{} used deterministic output: {e}", request.kind()));
                self.local.describe(request)
            }
        }
    }

    fn mode_name(&self) -> &'static str {
        "remote"
    }

    fn take_notes(&self) -> Vec<String> {
        let mut notes = std::mem::take(&mut *self.notes.lock().expect("notes lock"));
        notes.extend(self.remote.take_notes());
        notes
    }
}

/// Descriptor selected by the environment: remote (with fallback) when
/// `DESIGNLINT_LLM_URL` is set and `offline` is false, deterministic otherwise.
pub fn from_env(offline: bool) -> Box<dyn Descriptor> {
    if offline {
        return Box::new(Deterministic);
    }
    match RemoteConfig::from_env() {
        Some(config) => Box::new(FallbackDescriptor::new(RemoteDescriptor::new(config))),
        None => Box::new(Deterministic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_serializes_with_kind_and_payload() {
        let r = DescriptorRequest::ColorName {
            color: RgbaColor::WHITE,
        };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kind"], "color_name");
        assert_eq!(v["payload"]["color"]["r"], 255);
    }

    #[test]
    fn mismatched_kind_is_rejected() {
        let req = DescriptorRequest::ColorName {
            color: RgbaColor::WHITE,
        };
        let resp = DescriptorResponse::ColorSchemeSummary {
            summary: "x".into(),
            details: BTreeMap::new(),
            provenance: Provenance::Remote,
        };
        assert!(validate(&req, &resp).is_err());
    }

    #[test]
    fn unknown_group_is_rejected() {
        let req = DescriptorRequest::FontReview { groups: vec![] };
        let resp = DescriptorResponse::FontReview {
            summary: "s".into(),
            issues: [("p".to_string(), "serif".to_string())].into(),
            passes: BTreeMap::new(),
            provenance: Provenance::Remote,
        };
        assert!(matches!(validate(&req, &resp), Err(DescriptorError::Schema(_))));
    }
}
