//! Audit pipeline: builds the shared context, runs every check and
//! assembles the report.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::color_audit::{self, ContrastProfile};
use crate::compare::{self, Comparisons, TrendProfile};
use crate::descriptor::Descriptor;
use crate::error::Result;
use crate::groups::{group_elements, selector_for, StyleGroup};
use crate::layout;
use crate::model::{visible_elements, CaptureMode, NodeIndex, PageSnapshot};
use crate::ocr::{match_elements_to_lines, MatchSet};
use crate::patch::CssPatch;
use crate::report::{assemble_report, AuditReport, ReportExtras, RunMeta};
use crate::text::{self, classify_text_role, modal_body_font_size, TextRole};

/// Everything the checks share: the snapshot, its index, style groups with
/// their roles and selectors, and OCR matches when available.
pub struct AuditContext<'a> {
    pub snapshot: &'a PageSnapshot,
    pub index: NodeIndex<'a>,
    pub groups: Vec<StyleGroup>,
    /// Text role per group; `None` for groups without text.
    pub roles: Vec<Option<TextRole>>,
    /// CSS selector targeting each group.
    pub selectors: Vec<String>,
    pub matches: Option<MatchSet>,
    pub modal_body_size: f64,
}

impl<'a> AuditContext<'a> {
    pub fn new(snapshot: &'a PageSnapshot) -> Result<Self> {
        let index = NodeIndex::new(snapshot);
        let groups = group_elements(snapshot);
        let visible = visible_elements(snapshot);
        let modal_body_size = modal_body_font_size(visible.iter().copied().filter(|n| n.has_text()));
        let roles = groups
            .iter()
            .map(|g| {
                let longest = g
                    .members(snapshot)
                    .filter_map(|n| n.text.as_deref())
                    .map(|t| t.trim().chars().count())
                    .max()?;
                g.has_text(snapshot)
                    .then(|| classify_text_role(g, longest, modal_body_size))
            })
            .collect();
        let selectors = groups.iter().map(|g| selector_for(&g.member_ids, &index).0).collect();
        let matches = match &snapshot.ocr_lines {
            Some(_) => Some(match_elements_to_lines(snapshot)?),
            None => None,
        };
        Ok(AuditContext {
            snapshot,
            index,
            groups,
            roles,
            selectors,
            matches,
            modal_body_size,
        })
    }

    pub fn rendered(&self) -> bool {
        self.snapshot.capture_mode == CaptureMode::Rendered
    }

    /// Groups with text, with their roles.
    pub fn text_groups(&self) -> impl Iterator<Item = (usize, &StyleGroup, TextRole)> + '_ {
        self.groups
            .iter()
            .enumerate()
            .filter_map(|(i, g)| self.roles[i].map(|r| (i, g, r)))
    }

    pub fn role_of(&self, element_id: &str) -> Option<TextRole> {
        self.groups
            .iter()
            .position(|g| g.member_ids.iter().any(|m| m == element_id))
            .and_then(|i| self.roles[i])
    }

    pub fn document_order(&self) -> HashMap<String, usize> {
        self.index
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect()
    }
}

/// Optional comparison sources.
#[derive(Default)]
pub struct CompareSources<'a> {
    pub reference: Option<&'a PageSnapshot>,
    pub trends: Option<&'a TrendProfile>,
}

pub struct AuditOptions<'a> {
    pub descriptor: &'a dyn Descriptor,
    pub compare: CompareSources<'a>,
    pub contrast_profile: ContrastProfile,
    /// Recorded in the run metadata only when set.
    pub timestamp: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs every check over `snapshot`. `raw_input` is hashed into the run
/// metadata (the snapshot's own JSON is used when it is empty).
pub fn audit(snapshot: &PageSnapshot, raw_input: &[u8], options: &AuditOptions<'_>) -> Result<AuditReport> {
    let ctx = AuditContext::new(snapshot)?;
    let descriptor = options.descriptor;
    let mut findings = Vec::new();
    findings.extend(text::check_font_size(&ctx));
    let (family, font_summary) = text::check_font_family(&ctx, descriptor)?;
    findings.extend(family);
    findings.extend(text::check_line_length(&ctx));
    findings.extend(text::check_line_spacing(&ctx));
    findings.extend(layout::check_spacing(&ctx));
    findings.extend(layout::check_spatial_alignment(&ctx));
    findings.extend(layout::check_textual_alignment(&ctx));
    findings.extend(color_audit::check_contrast(&ctx, options.contrast_profile));
    let scheme = color_audit::summarize_color_scheme(&ctx, descriptor)?;
    let harmony = color_audit::suggest_harmony(&ctx, descriptor, &scheme.summary)?;
    findings.push(color_audit::check_harmony(&ctx, &scheme, &harmony));

    let comparison = if options.compare.reference.is_some() || options.compare.trends.is_some() {
        let mine = compare::summarize_site(&ctx);
        Some(Comparisons {
            guideline: compare::guideline_comparison(&mine),
            reference: options
                .compare
                .reference
                .map(|r| compare::compare_with_reference(&mine, r))
                .transpose()?,
            trend: options.compare.trends.map(|t| compare::compare_with_trends(&mine, t)),
        })
    } else {
        None
    };

    let mut notes = snapshot.notes.clone();
    notes.extend(descriptor.take_notes());
    let hash = if raw_input.is_empty() {
        sha256_hex(snapshot.to_json().as_bytes())
    } else {
        sha256_hex(raw_input)
    };
    let run_meta = RunMeta {
        source_id: snapshot.source_id.clone(),
        input_hash: hash,
        mode: snapshot.capture_mode,
        descriptor: descriptor.mode_name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: options.timestamp.clone(),
    };
    Ok(assemble_report(
        findings,
        &ctx.document_order(),
        run_meta,
        ReportExtras {
            font_summary: Some(font_summary),
            color_scheme: Some(scheme),
            comparison,
            harmony: Some(harmony),
            notes,
        },
    ))
}

/// Patch applying the preferred suggestion of every issue (harmony excluded).
pub fn fix_all_patch(report: &AuditReport) -> CssPatch {
    CssPatch::from_suggestions(report.issues.iter())
}
