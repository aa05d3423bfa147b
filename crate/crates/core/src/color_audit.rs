//! Contrast and harmony findings, the color scheme summary and the
//! palette-based harmony suggestion.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::audit::AuditContext;
use crate::color::space::from_lch_mapped;
use crate::color::{
    apca_lc, detect_mode, effective_background, generate_palette, is_achromatic, name_color, pick_primary_color,
    to_lch, ColorPalette, Lch, PaletteRole, MIN_LC,
};
use crate::descriptor::{Descriptor, DescriptorRequest, DescriptorResponse, PaletteElement, Provenance, RoleAssignment};
use crate::error::DescriptorError;
use crate::groups::group_index;
use crate::model::{visible_elements, ElementNode, RgbaColor};
use crate::patch::{CssPatch, PatchRule};
use crate::report::{Category, Finding, Suggestion};

/// More distinct colors than this makes a scheme look unplanned.
pub const MAX_DISTINCT_COLORS: usize = 10;
/// Backgrounds above this CIELCh chroma (at mid lightness) are saturated.
pub const SATURATED_CHROMA: f64 = 60.0;
pub const SATURATED_LIGHTNESS: (f64, f64) = (25.0, 75.0);
/// Rendered backgrounds smaller than this share of the viewport are ignored
/// by the saturation rule.
pub const MIN_BACKGROUND_SHARE: f64 = 0.01;

/// Contrast floor for stricter checking of small text.
pub const SMALL_TEXT_LC: f64 = 90.0;
pub const SMALL_TEXT_PX: f64 = 16.0;

const SMALL_TAGS: &[&str] = &[
    "a", "button", "span", "input", "label", "img", "select", "option", "textarea", "code", "em", "strong", "b",
    "i", "small", "sup", "sub", "mark", "abbr", "kbd",
];
const INTERACTIVE_TAGS: &[&str] = &["a", "button", "input", "select", "textarea"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContrastProfile {
    /// Lc 74.7 for all text.
    #[default]
    Flat,
    /// Additionally requires Lc 90 for text under 16px.
    SizeAware,
}

impl ContrastProfile {
    pub fn required_lc(self, font_size: f64) -> f64 {
        match self {
            ContrastProfile::SizeAware if font_size < SMALL_TEXT_PX => SMALL_TEXT_LC,
            _ => MIN_LC,
        }
    }
}

pub fn is_saturated_background(c: RgbaColor) -> bool {
    let lch = to_lch(c.opaque());
    lch.c > SATURATED_CHROMA && (SATURATED_LIGHTNESS.0..=SATURATED_LIGHTNESS.1).contains(&lch.l)
}

fn min_abs_lc(texts: &[RgbaColor], backgrounds: &[RgbaColor]) -> f64 {
    texts
        .iter()
        .flat_map(|t| backgrounds.iter().map(move |b| apca_lc(*t, *b).abs()))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest tone change of `base` (hue and chroma kept, gamut-mapped) that
/// satisfies `ok`; black or white, whichever is better, when no tone does.
pub fn tone_search(base: RgbaColor, ok: &dyn Fn(RgbaColor) -> bool, score: &dyn Fn(RgbaColor) -> f64) -> RgbaColor {
    let lch = to_lch(base.opaque());
    let at = |l: f64| from_lch_mapped(Lch { l: l.clamp(0.0, 100.0), ..lch });
    let mut best: Option<(f64, RgbaColor)> = None;
    for dir in [-1.0f64, 1.0] {
        let limit = if dir < 0.0 { lch.l } else { 100.0 - lch.l };
        let mut prev = 0.0;
        let mut found = None;
        let mut d = 1.0f64;
        loop {
            let step = d.min(limit);
            if ok(at(lch.l + dir * step)) {
                found = Some(step);
                break;
            }
            if step >= limit {
                break;
            }
            prev = step;
            d += 1.0;
        }
        let Some(mut hi) = found else { continue };
        let mut lo = prev;
        for _ in 0..24 {
            let mid = (lo + hi) / 2.0;
            if ok(at(lch.l + dir * mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let color = at(lch.l + dir * hi);
        if best.is_none_or(|(bd, _)| hi < bd) {
            best = Some((hi, color));
        }
    }
    match best {
        Some((_, c)) => c,
        None if score(RgbaColor::BLACK) >= score(RgbaColor::WHITE) => RgbaColor::BLACK,
        None => RgbaColor::WHITE,
    }
}

/// Text color closest in tone to `text` that reaches `required` on every
/// background.
pub fn fix_text_color(text: RgbaColor, backgrounds: &[RgbaColor], required: f64) -> RgbaColor {
    let score = |c: RgbaColor| min_abs_lc(&[c], backgrounds);
    tone_search(text, &|c| score(c) >= required, &score)
}

/// Background closest in tone to `background` under which every text color
/// reaches `required`.
pub fn fix_background(background: RgbaColor, texts: &[RgbaColor], required: f64) -> RgbaColor {
    let score = |c: RgbaColor| min_abs_lc(texts, &[c]);
    tone_search(background, &|c| score(c) >= required, &score)
}

fn lc_text(v: f64) -> String {
    format!("{:.1}", v)
}

pub fn check_contrast(ctx: &AuditContext<'_>, profile: ContrastProfile) -> Vec<Finding> {
    let mut out = Vec::new();
    for (gi, group, _) in ctx.text_groups() {
        let required = profile.required_lc(group.shared_style.font_size);
        let mut pairs: Vec<(RgbaColor, RgbaColor, f64)> = Vec::new();
        for node in group.members(ctx.snapshot).filter(|n| n.has_text()) {
            let bg = effective_background(&node.id, &ctx.index);
            let fg = node.style.color.over(bg);
            pairs.push((fg, bg, apca_lc(fg, bg)));
        }
        let Some(&(fg, bg, lc)) = pairs.iter().min_by(|a, b| a.2.abs().total_cmp(&b.2.abs())) else {
            continue;
        };
        let key = &group.group_key;
        let f = if lc.abs() >= required {
            Finding::pass(
                Category::ColorContrast,
                key,
                format!("Text {} on {} reaches Lc {}.", fg.to_hex(), bg.to_hex(), lc_text(lc)),
            )
        } else {
            let backgrounds: Vec<RgbaColor> = pairs.iter().map(|p| p.1).collect();
            let texts: Vec<RgbaColor> = pairs.iter().map(|p| p.0).collect();
            let new_text = fix_text_color(fg, &backgrounds, required);
            let new_bg = fix_background(bg, &texts, required);
            let text_lc = min_abs_lc(&[new_text], &backgrounds);
            let bg_lc = min_abs_lc(&texts, &[new_bg]);
            // The text fix is preferred unless only the background fix passes.
            let text_first = text_lc >= required || bg_lc < required;
            let selector = ctx.selectors[gi].clone();
            let text_fix = Suggestion {
                selector: selector.clone(),
                property: "color".into(),
                value: new_text.to_hex(),
                rationale: format!("closest text tone reaching Lc {} (Lc {})", required, lc_text(text_lc)),
                alternative: if text_first { 0 } else { 1 },
            };
            let bg_fix = Suggestion {
                selector,
                property: "background-color".into(),
                value: new_bg.to_hex(),
                rationale: format!("closest background tone reaching Lc {} (Lc {})", required, lc_text(bg_lc)),
                alternative: if text_first { 1 } else { 0 },
            };
            let (first, second) = if text_first { (text_fix, bg_fix) } else { (bg_fix, text_fix) };
            let mut f = Finding::issue(
                Category::ColorContrast,
                key,
                format!(
                    "Text {} on {} has APCA contrast Lc {}; at least {} is needed.",
                    fg.to_hex(),
                    bg.to_hex(),
                    lc_text(lc),
                    required
                ),
            )
            .suggest(first)
            .suggest(second);
            if text_lc < required && bg_lc < required {
                f = f.note("no single color change reaches the threshold; both suggestions are best effort");
            }
            f
        };
        out.push(f.members(&group.member_ids, group.sample_text.as_deref()));
    }
    out
}

/// Groups with a saturated background over a non-trivial area, with the
/// background as painted.
pub fn saturated_backgrounds(ctx: &AuditContext<'_>) -> Vec<(usize, RgbaColor)> {
    let viewport_area = ctx.snapshot.viewport.width as f64 * ctx.snapshot.viewport.height as f64;
    ctx.groups
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.shared_style.background_color.is_transparent())
        .filter_map(|(i, g)| {
            let first = ctx.index.get(&g.member_ids[0])?;
            let painted = effective_background(&first.id, &ctx.index);
            if !is_saturated_background(painted) {
                return None;
            }
            let large = match first.bbox {
                Some(_) => g
                    .members(ctx.snapshot)
                    .filter_map(|n| n.bbox)
                    .any(|b| b.area() >= MIN_BACKGROUND_SHARE * viewport_area),
                None => !SMALL_TAGS.contains(&g.tag.as_str()),
            };
            large.then_some((i, painted))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeEntry {
    pub color: RgbaColor,
    pub name: String,
    /// Number of elements using the color.
    pub elements: usize,
    pub tags: Vec<String>,
}

/// Colors in use, by where they are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorScheme {
    pub background: Vec<SchemeEntry>,
    pub text: Vec<SchemeEntry>,
    pub border: Vec<SchemeEntry>,
    pub interactive: Vec<SchemeEntry>,
    pub image: Vec<SchemeEntry>,
    /// Distinct colors across backgrounds, text, borders and interactive
    /// elements.
    pub distinct_colors: usize,
}

impl ColorScheme {
    pub fn sections(&self) -> [(&'static str, &'static str, &[SchemeEntry]); 5] {
        [
            ("background", "Backgrounds", &self.background),
            ("text", "Text", &self.text),
            ("border", "Borders", &self.border),
            ("interactive", "Interactive elements", &self.interactive),
            ("image", "Images", &self.image),
        ]
    }
}

#[derive(Default)]
struct Tally {
    entries: Vec<(String, RgbaColor, usize, Vec<String>)>,
}

impl Tally {
    fn add(&mut self, c: RgbaColor, tag: &str) {
        let hex = c.to_hex();
        match self.entries.iter_mut().find(|e| e.0 == hex) {
            Some(e) => {
                e.2 += 1;
                if !e.3.iter().any(|t| t == tag) {
                    e.3.push(tag.to_string());
                }
            }
            None => self.entries.push((hex, c.opaque(), 1, vec![tag.to_string()])),
        }
    }

    fn finish(self, descriptor: &dyn Descriptor) -> Result<Vec<SchemeEntry>, DescriptorError> {
        let mut entries = self.entries;
        entries.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
        entries
            .into_iter()
            .map(|(_, color, elements, mut tags)| {
                tags.sort();
                Ok(SchemeEntry {
                    color,
                    name: name_color(color, descriptor)?,
                    elements,
                    tags,
                })
            })
            .collect()
    }
}

pub fn extract_scheme(ctx: &AuditContext<'_>, descriptor: &dyn Descriptor) -> Result<ColorScheme, DescriptorError> {
    let (mut bg, mut text, mut border, mut interactive, mut image) =
        (Tally::default(), Tally::default(), Tally::default(), Tally::default(), Tally::default());
    let visible = visible_elements(ctx.snapshot);
    let root = &ctx.snapshot.root;
    if root.style.background_color.is_transparent() {
        bg.add(effective_background(&root.id, &ctx.index), &root.tag);
    }
    for node in &visible {
        let painted = effective_background(&node.id, &ctx.index);
        let own_bg = !node.style.background_color.is_transparent();
        if own_bg {
            bg.add(painted, &node.tag);
        }
        let fg = node.style.color.over(painted);
        if node.has_text() {
            text.add(fg, &node.tag);
        }
        if let Some(b) = node.style.border_color.filter(|b| !b.is_transparent()) {
            border.add(b.over(painted), &node.tag);
        }
        if INTERACTIVE_TAGS.contains(&node.tag.as_str()) {
            if own_bg {
                interactive.add(painted, &node.tag);
            }
            if node.has_text() {
                interactive.add(fg, &node.tag);
            }
        }
    }
    for c in ctx.snapshot.screenshot_colors.iter().flatten() {
        image.add(c.opaque(), "screenshot");
    }
    let mut distinct: Vec<String> = [&bg, &text, &border, &interactive]
        .iter()
        .flat_map(|t| t.entries.iter().map(|e| e.0.clone()))
        .collect();
    distinct.sort();
    distinct.dedup();
    Ok(ColorScheme {
        background: bg.finish(descriptor)?,
        text: text.finish(descriptor)?,
        border: border.finish(descriptor)?,
        interactive: interactive.finish(descriptor)?,
        image: image.finish(descriptor)?,
        distinct_colors: distinct.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub summary: String,
    pub details: BTreeMap<String, String>,
    pub scheme: ColorScheme,
    pub too_many_colors: bool,
    pub provenance: Provenance,
}

pub fn summarize_color_scheme(
    ctx: &AuditContext<'_>,
    descriptor: &dyn Descriptor,
) -> Result<SchemeSummary, DescriptorError> {
    let scheme = extract_scheme(ctx, descriptor)?;
    let request = DescriptorRequest::ColorSchemeSummary { scheme: scheme.clone() };
    match descriptor.describe(&request)? {
        DescriptorResponse::ColorSchemeSummary {
            summary,
            details,
            provenance,
        } => Ok(SchemeSummary {
            summary,
            details,
            too_many_colors: scheme.distinct_colors > MAX_DISTINCT_COLORS,
            scheme,
            provenance,
        }),
        _ => Err(DescriptorError::Schema("expected a color scheme summary".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoleColor {
    pub role: PaletteRole,
    pub color: RgbaColor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonySuggestion {
    pub scheme_summary: String,
    pub palette: ColorPalette,
    /// Group key → CSS property → palette role and its color.
    pub assignments: BTreeMap<String, BTreeMap<String, RoleColor>>,
    /// Group key → selector the assignment applies to.
    pub selectors: BTreeMap<String, String>,
    pub rationale: String,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl HarmonySuggestion {
    /// The suggestion as a stylesheet patch, in group order.
    pub fn to_patch(&self, group_order: &[String]) -> CssPatch {
        let mut rules = Vec::new();
        for key in group_order {
            let (Some(props), Some(selector)) = (self.assignments.get(key), self.selectors.get(key)) else {
                continue;
            };
            rules.push(PatchRule {
                selector: selector.clone(),
                declarations: props.iter().map(|(p, rc)| (p.clone(), rc.color.to_hex())).collect(),
            });
        }
        CssPatch { rules }
    }
}

/// Seed for the harmony palette: screenshot dominants first, then declared
/// chromatic colors weighted by how much of the page they cover.
pub fn harmony_seed(ctx: &AuditContext<'_>) -> RgbaColor {
    let dominants = ctx.snapshot.screenshot_colors.clone().unwrap_or_default();
    let mut weights: Vec<(RgbaColor, usize, usize)> = Vec::new();
    for (order, node) in visible_elements(ctx.snapshot).into_iter().enumerate() {
        let size = node.preorder().count();
        let bg = effective_background(&node.id, &ctx.index);
        let mut colors = Vec::new();
        if !node.style.background_color.is_transparent() {
            colors.push(bg);
        }
        if node.has_text() {
            colors.push(node.style.color.over(bg));
        }
        colors.extend(node.style.border_color.filter(|c| !c.is_transparent()).map(|c| c.over(bg)));
        for c in colors.into_iter().filter(|c| !is_achromatic(*c)) {
            match weights.iter_mut().find(|w| w.0 == c) {
                Some(w) => w.1 += size,
                None => weights.push((c, size, order)),
            }
        }
    }
    weights.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let declared: Vec<RgbaColor> = weights.into_iter().map(|w| w.0).collect();
    pick_primary_color(&dominants, &declared)
}

fn palette_elements(ctx: &AuditContext<'_>) -> Vec<PaletteElement> {
    let gidx = group_index(&ctx.groups);
    ctx.groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let first: Option<&ElementNode> = ctx.index.get(&g.member_ids[0]);
            let mut ancestor_groups: Vec<String> = Vec::new();
            for a in ctx.index.ancestors(&g.member_ids[0]) {
                if let Some(&gi) = gidx.get(a.id.as_str()) {
                    let k = &ctx.groups[gi].group_key;
                    if !ancestor_groups.contains(k) {
                        ancestor_groups.push(k.clone());
                    }
                }
            }
            PaletteElement {
                group_key: g.group_key.clone(),
                selector: ctx.selectors[i].clone(),
                tag: g.tag.clone(),
                classes: g.classes.clone(),
                text_role: ctx.roles[i],
                has_text: ctx.roles[i].is_some(),
                background: Some(g.shared_style.background_color).filter(|c| !c.is_transparent()),
                border: first.and_then(|n| n.style.border_color).filter(|c| !c.is_transparent()),
                color: g.shared_style.color,
                ancestor_groups,
            }
        })
        .collect()
}

/// Re-checks every text/background pair of an assignment and swaps in
/// readable roles where needed. Returns notes on each repair.
fn repair_assignments(
    palette: &ColorPalette,
    elements: &[PaletteElement],
    roles: &mut BTreeMap<String, BTreeMap<String, PaletteRole>>,
) -> Vec<String> {
    let mut notes = Vec::new();
    for e in elements {
        let own_bg = roles.get(&e.group_key).and_then(|m| m.get("background-color")).copied();
        let behind = own_bg
            .or_else(|| {
                e.ancestor_groups
                    .iter()
                    .find_map(|k| roles.get(k).and_then(|m| m.get("background-color")).copied())
            })
            .unwrap_or(PaletteRole::Surface);
        let Some(text_role) = roles.get(&e.group_key).and_then(|m| m.get("color")).copied() else {
            continue;
        };
        let readable = |t: PaletteRole, b: PaletteRole| apca_lc(palette.get(t), palette.get(b)).abs() >= MIN_LC;
        if readable(text_role, behind) {
            continue;
        }
        let replacement = behind.on_role().filter(|on| readable(*on, behind)).or_else(|| {
            PaletteRole::ALL
                .iter()
                .copied()
                .filter(|r| readable(*r, behind))
                .max_by(|a, b| {
                    apca_lc(palette.get(*a), palette.get(behind))
                        .abs()
                        .total_cmp(&apca_lc(palette.get(*b), palette.get(behind)).abs())
                })
        });
        let entry = roles.entry(e.group_key.clone()).or_default();
        match replacement {
            Some(r) => {
                notes.push(format!(
                    "{}: {} text on {} replaced by {}",
                    e.group_key,
                    text_role.name(),
                    behind.name(),
                    r.name()
                ));
                entry.insert("color".into(), r);
            }
            None => {
                notes.push(format!(
                    "{}: no readable text role on {}; using surface colors",
                    e.group_key,
                    behind.name()
                ));
                entry.insert("background-color".into(), PaletteRole::Surface);
                entry.insert("color".into(), PaletteRole::OnSurface);
            }
        }
    }
    notes
}

pub fn suggest_harmony(
    ctx: &AuditContext<'_>,
    descriptor: &dyn Descriptor,
    scheme_summary: &str,
) -> Result<HarmonySuggestion, DescriptorError> {
    let seed = harmony_seed(ctx);
    let mode = detect_mode(effective_background(&ctx.snapshot.root.id, &ctx.index));
    let palette = generate_palette(seed, mode);
    let elements = palette_elements(ctx);
    let request = DescriptorRequest::PaletteRoleAssignment {
        palette: palette.clone(),
        elements: elements.clone(),
    };
    let (assignments, rationale, provenance) = match descriptor.describe(&request)? {
        DescriptorResponse::PaletteRoleAssignment {
            assignments,
            rationale,
            provenance,
        } => (assignments, rationale, provenance),
        _ => return Err(DescriptorError::Schema("expected palette role assignments".into())),
    };
    let mut roles: BTreeMap<String, BTreeMap<String, PaletteRole>> = BTreeMap::new();
    for RoleAssignment { group_key, property, role } in assignments {
        roles.entry(group_key).or_default().insert(property, role);
    }
    let notes = repair_assignments(&palette, &elements, &mut roles);
    let selectors: HashMap<&str, &str> = elements.iter().map(|e| (e.group_key.as_str(), e.selector.as_str())).collect();
    let assignments: BTreeMap<String, BTreeMap<String, RoleColor>> = roles
        .into_iter()
        .map(|(k, m)| {
            let m = m
                .into_iter()
                .map(|(p, role)| {
                    (
                        p,
                        RoleColor {
                            role,
                            color: palette.get(role),
                        },
                    )
                })
                .collect();
            (k, m)
        })
        .collect();
    Ok(HarmonySuggestion {
        scheme_summary: scheme_summary.to_string(),
        selectors: assignments
            .keys()
            .filter_map(|k| selectors.get(k.as_str()).map(|s| (k.clone(), s.to_string())))
            .collect(),
        palette,
        assignments,
        rationale,
        provenance,
        notes,
    })
}

/// The single holistic harmony entry for the page.
pub fn check_harmony(ctx: &AuditContext<'_>, scheme: &SchemeSummary, harmony: &HarmonySuggestion) -> Finding {
    let saturated = saturated_backgrounds(ctx);
    let mut problems = Vec::new();
    if !saturated.is_empty() {
        problems.push(format!(
            "{} element group{} use{} highly saturated backgrounds",
            saturated.len(),
            if saturated.len() == 1 { "" } else { "s" },
            if saturated.len() == 1 { "s" } else { "" }
        ));
    }
    if scheme.too_many_colors {
        problems.push(format!(
            "{} distinct colors are in use (more than {MAX_DISTINCT_COLORS})",
            scheme.scheme.distinct_colors
        ));
    }
    let members: Vec<String> = saturated
        .iter()
        .flat_map(|(i, _)| ctx.groups[*i].member_ids.iter().cloned())
        .collect();
    if problems.is_empty() {
        return Finding::pass(
            Category::ColorHarmony,
            "page",
            format!(
                "{} distinct colors and no highly saturated backgrounds.",
                scheme.scheme.distinct_colors
            ),
        );
    }
    let mut f = Finding::issue(
        Category::ColorHarmony,
        "page",
        format!("{}. {}", problems.join("; "), scheme.summary),
    )
    .members(&members, None);
    for (i, c) in &saturated {
        f = f.note(format!("{} background {} is highly saturated", ctx.groups[*i].group_key, c.to_hex()));
    }
    let order: Vec<String> = ctx.groups.iter().map(|g| g.group_key.clone()).collect();
    for rule in harmony.to_patch(&order).rules {
        for (property, value) in rule.declarations {
            f = f.suggest(Suggestion {
                selector: rule.selector.clone(),
                property,
                value,
                rationale: "palette-based color scheme".into(),
                alternative: 0,
            });
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_threshold() {
        assert!(is_saturated_background(RgbaColor::rgb(0, 0, 255)));
        assert!(!is_saturated_background(RgbaColor::rgb(0xf7, 0xf7, 0xf7)));
        assert!(!is_saturated_background(RgbaColor::rgb(255, 255, 0)), "yellow is too light");
    }

    #[test]
    fn text_fix_reaches_threshold() {
        let bg = RgbaColor::rgb(255, 220, 0);
        let fixed = fix_text_color(RgbaColor::WHITE, &[bg], MIN_LC);
        assert!(apca_lc(fixed, bg).abs() >= MIN_LC, "{fixed}");
    }

    #[test]
    fn background_fix_reaches_threshold() {
        let fixed = fix_background(RgbaColor::rgb(0x77, 0x77, 0x77), &[RgbaColor::WHITE], MIN_LC);
        assert!(apca_lc(RgbaColor::WHITE, fixed).abs() >= MIN_LC, "{fixed}");
    }
}
