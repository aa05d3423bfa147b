//! Whitespace, spatial alignment and text alignment checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::audit::AuditContext;
use crate::groups::selector_for;
use crate::model::{visible_elements, BoundingBox, ElementNode, NodeIndex, PageSnapshot, TextAlign};
use crate::report::{Category, Finding, Suggestion};
use crate::stats;
use crate::text::TextRole;

pub const MIN_PADDING_PX: f64 = 24.0;
pub const MIN_SEPARATION_PX: f64 = 8.0;
/// Edges closer than this (strictly) are considered aligned.
pub const ALIGN_THRESHOLD_PX: f64 = 5.0;
/// Deviations below this are rendering noise, not misalignment.
pub const MIN_DEVIATION_PX: f64 = 0.5;

pub const CONTAINER_TAGS: &[&str] = &[
    "div", "section", "article", "nav", "aside", "header", "footer", "main", "button", "input", "textarea",
];
pub const ATOMIC_TAGS: &[&str] = &[
    "p", "h1", "h2", "h3", "h4", "h5", "h6", "li", "a", "button", "input", "label", "img",
];

const INLINE_DISPLAYS: &[&str] = &["inline", "inline-block", "inline-flex", "inline-grid", "inline-table"];

fn px(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        "0px".into()
    } else if r.fract() == 0.0 {
        format!("{}px", r as i64)
    } else {
        format!("{r}px")
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Vertical,
    Horizontal,
}

/// Gap between an element and the sibling after it, with the axis it was
/// measured along. Rendered boxes give the geometric gap; otherwise the
/// declared margins are summed.
fn separation(a: &ElementNode, b: &ElementNode) -> (f64, Axis) {
    if let (Some(x), Some(y)) = (a.bbox, b.bbox) {
        let y_overlap = x.y < y.bottom() && y.y < x.bottom();
        if y_overlap {
            let gap = if y.x >= x.x { y.x - x.right() } else { x.x - y.right() };
            return (gap, Axis::Horizontal);
        }
        let gap = if y.y >= x.y { y.y - x.bottom() } else { x.y - y.bottom() };
        return (gap, Axis::Vertical);
    }
    let inline = |n: &ElementNode| INLINE_DISPLAYS.contains(&n.style.display.as_str());
    if inline(a) && inline(b) {
        (a.style.margin.right + b.style.margin.left, Axis::Horizontal)
    } else {
        (a.style.margin.bottom + b.style.margin.top, Axis::Vertical)
    }
}

/// Next visible sibling of each visible element.
fn next_siblings(snapshot: &PageSnapshot) -> BTreeMap<String, String> {
    let visible: std::collections::HashSet<&str> = visible_elements(snapshot).iter().map(|n| n.id.as_str()).collect();
    let mut out = BTreeMap::new();
    for parent in snapshot.elements() {
        let kids: Vec<&ElementNode> = parent.children.iter().filter(|c| visible.contains(c.id.as_str())).collect();
        for pair in kids.windows(2) {
            out.insert(pair[0].id.clone(), pair[1].id.clone());
        }
    }
    out
}

pub fn check_spacing(ctx: &AuditContext<'_>) -> Vec<Finding> {
    let next = next_siblings(ctx.snapshot);
    let mut out = Vec::new();
    for (gi, group) in ctx.groups.iter().enumerate() {
        let tag = group.tag.as_str();
        let container = CONTAINER_TAGS.contains(&tag);
        let atomic = ATOMIC_TAGS.contains(&tag);
        if !container && !atomic {
            continue;
        }
        let style = &group.shared_style;
        let selector = &ctx.selectors[gi];
        let mut problems = Vec::new();
        let mut suggestions = Vec::new();
        let mut notes = Vec::new();
        if container {
            let short: Vec<(&str, f64)> = style
                .padding
                .sides()
                .into_iter()
                .filter(|(_, v)| *v < MIN_PADDING_PX)
                .collect();
            if !short.is_empty() {
                problems.push(format!(
                    "padding {} is below 24px",
                    short.iter().map(|(s, v)| format!("{s} {}", px(*v))).collect::<Vec<_>>().join(", ")
                ));
                if short.len() == 4 {
                    suggestions.push(("padding".to_string(), px(MIN_PADDING_PX)));
                } else {
                    for (side, _) in &short {
                        suggestions.push((format!("padding-{side}"), px(MIN_PADDING_PX)));
                    }
                }
            }
        }
        if atomic {
            let mut deficit = [0.0f64; 2];
            for id in &group.member_ids {
                let (Some(a), Some(b)) = (
                    ctx.index.get(id),
                    next.get(id).and_then(|n| ctx.index.get(n)),
                ) else {
                    continue;
                };
                let (gap, axis) = separation(a, b);
                if gap < MIN_SEPARATION_PX {
                    let slot = &mut deficit[(axis == Axis::Horizontal) as usize];
                    *slot = slot.max(MIN_SEPARATION_PX - gap);
                    notes.push(format!("{} is {} from the next element ({})", a.id, px(gap), b.id));
                }
            }
            if deficit[0] > 0.0 {
                problems.push("vertical gap to the next element is below 8px".into());
                suggestions.push(("margin-bottom".into(), px(style.margin.bottom + deficit[0])));
            }
            if deficit[1] > 0.0 {
                problems.push("horizontal gap to the next element is below 8px".into());
                suggestions.push(("margin-right".into(), px(style.margin.right + deficit[1])));
            }
        }
        let f = if problems.is_empty() {
            Finding::pass(
                Category::Spacing,
                &group.group_key,
                "Padding and gaps to neighbouring elements meet the minimums.",
            )
        } else {
            let mut f = Finding::issue(
                Category::Spacing,
                &group.group_key,
                capitalize(&format!("{}.", problems.join("; "))),
            );
            for (property, value) in suggestions {
                f = f.suggest(Suggestion {
                    selector: selector.clone(),
                    property,
                    value,
                    rationale: "adds whitespace below or to the right so top and left alignment is kept".into(),
                    alternative: 0,
                });
            }
            for n in notes {
                f = f.note(n);
            }
            f
        };
        out.push(f.members(&group.member_ids, group.sample_text.as_deref()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignKind {
    Left,
    XCenter,
    Right,
    Top,
    YCenter,
    Bottom,
}

impl AlignKind {
    pub const ALL: [AlignKind; 6] = [
        AlignKind::Left,
        AlignKind::XCenter,
        AlignKind::Right,
        AlignKind::Top,
        AlignKind::YCenter,
        AlignKind::Bottom,
    ];

    pub fn value(self, b: &BoundingBox) -> f64 {
        match self {
            AlignKind::Left => b.x,
            AlignKind::XCenter => b.center_x(),
            AlignKind::Right => b.right(),
            AlignKind::Top => b.y,
            AlignKind::YCenter => b.center_y(),
            AlignKind::Bottom => b.bottom(),
        }
    }

    /// Whether the aligned coordinate is horizontal (elements stack
    /// vertically along a shared x).
    pub fn is_x(self) -> bool {
        matches!(self, AlignKind::Left | AlignKind::XCenter | AlignKind::Right)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlignKind::Left => "left",
            AlignKind::XCenter => "x-center",
            AlignKind::Right => "right",
            AlignKind::Top => "top",
            AlignKind::YCenter => "y-center",
            AlignKind::Bottom => "bottom",
        }
    }

    /// Horizontal alignment kind implied by a text alignment.
    pub fn for_text_align(align: TextAlign) -> AlignKind {
        match align {
            TextAlign::Center => AlignKind::XCenter,
            TextAlign::Right | TextAlign::End => AlignKind::Right,
            TextAlign::Left | TextAlign::Start | TextAlign::Justify => AlignKind::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentGroup {
    pub kind: AlignKind,
    pub member_ids: Vec<String>,
    pub anchor_value: f64,
    /// Members off the anchor by a small amount, with their signed deviation.
    pub outliers: Vec<(String, f64)>,
}

/// One box taking part in alignment detection.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignItem {
    pub id: String,
    pub bbox: BoundingBox,
    /// Text alignment of elements that carry text.
    pub text_align: Option<TextAlign>,
}

/// Whether an item may join a group of `kind`: text only joins the
/// horizontal kind matching its own alignment.
pub fn eligible(item: &AlignItem, kind: AlignKind) -> bool {
    match item.text_align {
        Some(a) if kind.is_x() => AlignKind::for_text_align(a) == kind,
        _ => true,
    }
}

/// The gap band between two boxes along the axis perpendicular to the
/// aligned coordinate; `None` when they overlap along that axis.
fn gap_band(a: &BoundingBox, b: &BoundingBox, kind: AlignKind) -> Option<BoundingBox> {
    if kind.is_x() {
        let (upper, lower) = if a.y <= b.y { (a, b) } else { (b, a) };
        if lower.y <= upper.bottom() {
            return None;
        }
        let x0 = a.x.min(b.x);
        let x1 = a.right().max(b.right());
        Some(BoundingBox::new(x0, upper.bottom(), x1 - x0, lower.y - upper.bottom()))
    } else {
        let (left, right) = if a.x <= b.x { (a, b) } else { (b, a) };
        if right.x <= left.right() {
            return None;
        }
        let y0 = a.y.min(b.y);
        let y1 = a.bottom().max(b.bottom());
        Some(BoundingBox::new(left.right(), y0, right.x - left.right(), y1 - y0))
    }
}

/// Groups items into loose alignment groups. `related(i, j)` reports
/// ancestor/descendant pairs, which neither link nor interrupt each other.
pub fn alignment_groups(items: &[AlignItem], related: &dyn Fn(usize, usize) -> bool) -> Vec<AlignmentGroup> {
    let n = items.len();
    let mut out = Vec::new();
    for kind in AlignKind::ALL {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        let values: Vec<f64> = items.iter().map(|it| kind.value(&it.bbox)).collect();
        for i in 0..n {
            if !eligible(&items[i], kind) {
                continue;
            }
            for j in i + 1..n {
                if !eligible(&items[j], kind) || related(i, j) {
                    continue;
                }
                if (values[i] - values[j]).abs() >= ALIGN_THRESHOLD_PX {
                    continue;
                }
                let interrupted = gap_band(&items[i].bbox, &items[j].bbox, kind).is_some_and(|band| {
                    (0..n).any(|k| {
                        k != i
                            && k != j
                            && !related(k, i)
                            && !related(k, j)
                            && items[k].bbox.intersection_area(&band) > 0.0
                    })
                });
                if !interrupted {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            comps.entry(r).or_default().push(i);
        }
        for members in comps.into_values().filter(|m| m.len() >= 2) {
            let vals: Vec<f64> = members.iter().map(|&i| values[i]).collect();
            let anchor = stats::mode(&vals).expect("non-empty");
            let outliers = members
                .iter()
                .map(|&i| (items[i].id.clone(), values[i] - anchor))
                .filter(|(_, d)| d.abs() >= MIN_DEVIATION_PX && d.abs() < ALIGN_THRESHOLD_PX)
                .collect();
            out.push(AlignmentGroup {
                kind,
                member_ids: members.iter().map(|&i| items[i].id.clone()).collect(),
                anchor_value: anchor,
                outliers,
            });
        }
    }
    out
}

/// Alignment items for every visible, boxed element except the root.
pub fn align_items(snapshot: &PageSnapshot) -> Vec<AlignItem> {
    visible_elements(snapshot)
        .into_iter()
        .filter(|n| n.id != snapshot.root.id)
        .filter_map(|n| {
            n.bbox.map(|bbox| AlignItem {
                id: n.id.clone(),
                bbox,
                text_align: n.has_text().then_some(n.style.text_align),
            })
        })
        .collect()
}

/// Alignment groups of a rendered snapshot; empty for static snapshots.
pub fn find_alignment_groups(snapshot: &PageSnapshot, index: &NodeIndex<'_>) -> Vec<AlignmentGroup> {
    let items = align_items(snapshot);
    let related = |i: usize, j: usize| {
        index.is_ancestor(&items[i].id, &items[j].id) || index.is_ancestor(&items[j].id, &items[i].id)
    };
    alignment_groups(&items, &related)
}

pub fn check_spatial_alignment(ctx: &AuditContext<'_>) -> Vec<Finding> {
    if !ctx.rendered() {
        return vec![Finding::skipped(
            Category::SpatialAlignment,
            "page",
            "requires rendered snapshot",
        )];
    }
    let groups = find_alignment_groups(ctx.snapshot, &ctx.index);
    let mut used: BTreeMap<String, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for g in groups {
        let base = format!("{}@{}", g.kind.as_str(), px(g.anchor_value));
        let n = used.entry(base.clone()).or_default();
        *n += 1;
        let key = if *n == 1 { base } else { format!("{base}~{n}") };
        let sample = g
            .member_ids
            .iter()
            .filter_map(|id| ctx.index.get(id))
            .find_map(|n| n.text.clone());
        let f = if g.outliers.is_empty() {
            Finding::pass(
                Category::SpatialAlignment,
                &key,
                format!("{} elements share the {} edge exactly.", g.member_ids.len(), g.kind.as_str()),
            )
        } else {
            let mut f = Finding::issue(
                Category::SpatialAlignment,
                &key,
                format!(
                    "{} of {} elements aligned on {} at {} are slightly off.",
                    g.outliers.len(),
                    g.member_ids.len(),
                    g.kind.as_str(),
                    px(g.anchor_value)
                ),
            );
            for (id, dev) in &g.outliers {
                let Some(node) = ctx.index.get(id) else { continue };
                let (property, current) = if g.kind.is_x() {
                    ("margin-left", node.style.margin.left)
                } else {
                    ("margin-top", node.style.margin.top)
                };
                f = f
                    .note(format!("{id} is off by {}", px(*dev)))
                    .suggest(Suggestion {
                        selector: selector_for(std::slice::from_ref(id), &ctx.index).0,
                        property: property.into(),
                        value: px(current - dev),
                        rationale: format!("shifts the element by {} onto the shared edge", px(-dev)),
                        alternative: 0,
                    });
            }
            f
        };
        out.push(f.members(&g.member_ids, sample.as_deref()));
    }
    out
}

pub fn check_textual_alignment(ctx: &AuditContext<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (gi, group, role) in ctx.text_groups() {
        let align = group.shared_style.text_align;
        let paragraph_like = role == TextRole::Body || group.tag == "li";
        let key = &group.group_key;
        let f = if paragraph_like && align == TextAlign::Center {
            Finding::issue(
                Category::TextualAlignment,
                key,
                "Centered paragraph or list text is hard to scan; keep it left-aligned.",
            )
            .suggest(Suggestion {
                selector: ctx.selectors[gi].clone(),
                property: "text-align".into(),
                value: "left".into(),
                rationale: "left-aligned text gives every line the same starting point".into(),
                alternative: 0,
            })
        } else if align == TextAlign::Center {
            Finding::pass(Category::TextualAlignment, key, "Centered short text such as a heading.")
        } else {
            Finding::pass(
                Category::TextualAlignment,
                key,
                format!("Text is {}-aligned.", align.as_str()),
            )
        };
        out.push(f.members(&group.member_ids, group.sample_text.as_deref()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(id: &str, x: f64, y: f64, w: f64, h: f64) -> AlignItem {
        AlignItem {
            id: id.into(),
            bbox: BoundingBox::new(x, y, w, h),
            text_align: None,
        }
    }

    fn unrelated(_: usize, _: usize) -> bool {
        false
    }

    fn left_groups(items: &[AlignItem]) -> Vec<AlignmentGroup> {
        alignment_groups(items, &unrelated)
            .into_iter()
            .filter(|g| g.kind == AlignKind::Left)
            .collect()
    }

    #[test]
    fn near_left_edges_group() {
        let items = [
            item("a", 10.0, 0.0, 50.0, 10.0),
            item("b", 13.0, 20.0, 80.0, 10.0),
            item("c", 300.0, 40.0, 20.0, 10.0),
        ];
        let g = left_groups(&items);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].member_ids, ["a", "b"]);
        // Tie between 10 and 13: the smaller value anchors.
        assert_eq!(g[0].anchor_value, 10.0);
        assert_eq!(g[0].outliers, vec![("b".to_string(), 3.0)]);
    }

    #[test]
    fn centered_text_stays_out_of_left_groups() {
        let mut c = item("c", 10.0, 40.0, 50.0, 10.0);
        c.text_align = Some(TextAlign::Center);
        let items = [item("a", 10.0, 0.0, 50.0, 10.0), item("b", 10.0, 20.0, 50.0, 10.0), c];
        let g = left_groups(&items);
        assert_eq!(g[0].member_ids, ["a", "b"]);
    }

    #[test]
    fn an_element_between_breaks_the_link() {
        let items = [
            item("a", 10.0, 0.0, 50.0, 10.0),
            item("mid", 200.0, 20.0, 100.0, 10.0),
            item("b", 12.0, 40.0, 50.0, 10.0),
        ];
        // `mid` lies outside the x-span of a and b, so it does not interrupt.
        assert_eq!(left_groups(&items).len(), 1);
        let items = [
            item("a", 10.0, 0.0, 50.0, 10.0),
            item("mid", 30.0, 20.0, 100.0, 10.0),
            item("b", 12.0, 40.0, 50.0, 10.0),
        ];
        assert!(left_groups(&items).is_empty());
    }
}
