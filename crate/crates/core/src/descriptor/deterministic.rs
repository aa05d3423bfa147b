//! Offline descriptor: templated prose from rule tables.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    validate, Descriptor, DescriptorRequest, DescriptorResponse, FontGroup, PaletteElement, Provenance,
    RoleAssignment,
};
use crate::color::{apca_lc, nearest_named_color, ColorPalette, PaletteRole, MIN_LC};
use crate::color_audit::{ColorScheme, SchemeEntry};
use crate::error::DescriptorError;
use crate::text::fonts::{family_allowed, resolve_families, FontClass};
use crate::text::TextRole;

/// Rule-table descriptor; referentially transparent.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deterministic;

impl Descriptor for Deterministic {
    fn describe(&self, request: &DescriptorRequest) -> Result<DescriptorResponse, DescriptorError> {
        let response = match request {
            DescriptorRequest::FontReview { groups } => font_review(groups),
            DescriptorRequest::ColorSchemeSummary { scheme } => scheme_summary(scheme),
            DescriptorRequest::PaletteRoleAssignment { palette, elements } => assign_roles(palette, elements),
            DescriptorRequest::ColorName { color } => DescriptorResponse::ColorName {
                name: nearest_named_color(*color).to_string(),
                provenance: Provenance::Deterministic,
            },
        };
        validate(request, &response)?;
        Ok(response)
    }

    fn mode_name(&self) -> &'static str {
        "deterministic"
    }
}

fn font_review(groups: &[FontGroup]) -> DescriptorResponse {
    let mut issues = BTreeMap::new();
    let mut passes = BTreeMap::new();
    let mut families: BTreeMap<String, FontClass> = BTreeMap::new();
    for g in groups {
        let v = resolve_families(&g.families);
        families.insert(v.family.clone(), v.class);
        let text = format!("{} ({}) for {} text", v.family, v.class.as_str(), g.role.as_str());
        if family_allowed(g.role, v.class) {
            passes.insert(g.group_key.clone(), format!("{text} reads well."));
        } else {
            issues.insert(
                g.group_key.clone(),
                format!("{text}: a sans-serif family is easier to read at this role."),
            );
        }
    }
    let classes: BTreeSet<&str> = families.values().map(|c| c.as_str()).collect();
    let listed = families
        .iter()
        .map(|(f, c)| format!("{f} ({})", c.as_str()))
        .collect::<Vec<_>>()
        .join(", ");
    let mut summary = if groups.is_empty() {
        "The page has no text to review.".to_string()
    } else {
        format!(
            "{} text group{} use{} {} famil{}: {listed}.",
            groups.len(),
            if groups.len() == 1 { "" } else { "s" },
            if groups.len() == 1 { "s" } else { "" },
            families.len(),
            if families.len() == 1 { "y" } else { "ies" },
        )
    };
    if classes.contains("serif") && classes.contains("sans-serif") {
        summary.push_str(" Serif and sans-serif families are mixed, so the page may lack visual consistency.");
    }
    if families.len() > 3 {
        summary.push_str(" More than three families are in use; consider consolidating.");
    }
    if !issues.is_empty() {
        summary.push_str(&format!(
            " {} group{} should switch to a sans-serif family.",
            issues.len(),
            if issues.len() == 1 { "" } else { "s" }
        ));
    }
    DescriptorResponse::FontReview {
        summary,
        issues,
        passes,
        provenance: Provenance::Deterministic,
    }
}

fn describe_entries(label: &str, entries: &[SchemeEntry]) -> Option<String> {
    if entries.is_empty() {
        return None;
    }
    let parts: Vec<String> = entries
        .iter()
        .map(|e| {
            format!(
                "{} ({}, {} element{}: {})",
                e.name,
                e.color.to_hex(),
                e.elements,
                if e.elements == 1 { "" } else { "s" },
                e.tags.join(", ")
            )
        })
        .collect();
    Some(format!("{label}: {}.", parts.join("; ")))
}

fn scheme_summary(scheme: &ColorScheme) -> DescriptorResponse {
    let mut details = BTreeMap::new();
    for (key, label, entries) in scheme.sections() {
        if let Some(d) = describe_entries(label, entries) {
            details.insert(key.to_string(), d);
        }
    }
    let lead = |entries: &[SchemeEntry]| entries.first().map(|e| e.name.clone());
    let mut summary = match (lead(&scheme.background), lead(&scheme.text)) {
        (Some(bg), Some(fg)) => format!("Mostly {fg} text on {bg} backgrounds"),
        (Some(bg), None) => format!("Mostly {bg} backgrounds"),
        (None, Some(fg)) => format!("Mostly {fg} text"),
        (None, None) => "No colors are set".to_string(),
    };
    if let Some(i) = scheme.interactive.first() {
        summary.push_str(&format!("; {} dominates interactive elements", i.name));
    }
    summary.push_str(&format!(
        ". {} distinct color{} in use",
        scheme.distinct_colors,
        if scheme.distinct_colors == 1 { " is" } else { "s are" }
    ));
    if scheme.distinct_colors > crate::color_audit::MAX_DISTINCT_COLORS {
        summary.push_str(", which is too many colors for a consistent scheme");
    }
    summary.push('.');
    DescriptorResponse::ColorSchemeSummary {
        summary,
        details,
        provenance: Provenance::Deterministic,
    }
}

const FORM_TAGS: &[&str] = &["input", "textarea", "select"];
const REGION_TAGS: &[&str] = &["header", "nav", "footer", "aside"];
const PAGE_TAGS: &[&str] = &["body", "html"];

/// Background role each element paints, when it paints one.
fn background_role(e: &PaletteElement) -> Option<PaletteRole> {
    let tag = e.tag.as_str();
    if PAGE_TAGS.contains(&tag) {
        Some(PaletteRole::Surface)
    } else if tag == "button" {
        Some(PaletteRole::Primary)
    } else if FORM_TAGS.contains(&tag) {
        Some(PaletteRole::TertiaryContainer)
    } else if e.background.is_none() {
        None
    } else if REGION_TAGS.contains(&tag) {
        Some(PaletteRole::PrimaryContainer)
    } else {
        Some(PaletteRole::SecondaryContainer)
    }
}

fn assign_roles(palette: &ColorPalette, elements: &[PaletteElement]) -> DescriptorResponse {
    let bg_roles: BTreeMap<&str, PaletteRole> = elements
        .iter()
        .filter_map(|e| background_role(e).map(|r| (e.group_key.as_str(), r)))
        .collect();
    let mut assignments = Vec::new();
    for e in elements {
        let own = bg_roles.get(e.group_key.as_str()).copied();
        if let Some(role) = own {
            assignments.push(RoleAssignment {
                group_key: e.group_key.clone(),
                property: "background-color".into(),
                role,
            });
        }
        let behind = own
            .or_else(|| e.ancestor_groups.iter().find_map(|k| bg_roles.get(k.as_str()).copied()))
            .unwrap_or(PaletteRole::Surface);
        let on = behind.on_role().unwrap_or(PaletteRole::OnSurface);
        if e.has_text || own.is_some() {
            let accent = own.is_none()
                && behind == PaletteRole::Surface
                && (e.text_role == Some(TextRole::Title) || e.tag == "a")
                && apca_lc(palette.get(PaletteRole::Primary), palette.get(PaletteRole::Surface)).abs() >= MIN_LC;
            assignments.push(RoleAssignment {
                group_key: e.group_key.clone(),
                property: "color".into(),
                role: if accent { PaletteRole::Primary } else { on },
            });
        }
        if e.border.is_some() {
            assignments.push(RoleAssignment {
                group_key: e.group_key.clone(),
                property: "border-color".into(),
                role: PaletteRole::Outline,
            });
        }
    }
    let rationale = format!(
        "Palette generated from seed {} in {} mode. The page uses the surface role with on-surface text; \
         buttons use primary fills, form fields tertiary containers, page regions primary containers and \
         other filled blocks secondary containers, each with its matching on-color text. Headings and links \
         use the primary color where it stays readable on the surface. Borders use the outline role.",
        palette.seed.to_hex(),
        match palette.mode {
            crate::color::Mode::Light => "light",
            crate::color::Mode::Dark => "dark",
        }
    );
    DescriptorResponse::PaletteRoleAssignment {
        assignments,
        rationale,
        provenance: Provenance::Deterministic,
    }
}
