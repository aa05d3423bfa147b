//! Cascade resolution: user-agent defaults, author rules, inline styles and
//! patch rules combined into the computed-style subset the auditor uses.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{ComputedStyle, EdgeSizes, ElementNode, RgbaColor, TextAlign, Viewport};

use super::css::{
    color_in_shorthand, expand_box, parse_color, parse_font_families, parse_length, parse_stylesheet,
    CssRule, LengthContext, Origin, Precedence,
};
use super::html::DomNode;

/// Default stylesheet, modeled on common browser defaults.
pub const USER_AGENT_CSS: &str = r#"
html, body, div, p, h1, h2, h3, h4, h5, h6, ul, ol, dl, dt, dd, section, article, nav, aside,
header, footer, main, form, blockquote, pre, figure, figcaption, hr, address, fieldset, legend,
details, summary, center, hgroup, menu, dialog, search { display: block }
li { display: list-item }
table { display: table }
thead { display: table-header-group }
tbody { display: table-row-group }
tfoot { display: table-footer-group }
tr { display: table-row }
td, th { display: table-cell }
caption { display: table-caption }
head, script, style, title, meta, link, base, template, noscript, datalist, param { display: none }
body { margin: 8px }
p, blockquote, figure, ul, ol, dl, pre, menu { margin-top: 1em; margin-bottom: 1em }
blockquote, figure { margin-left: 40px; margin-right: 40px }
h1 { font-size: 2em; margin-top: 0.67em; margin-bottom: 0.67em }
h2 { font-size: 1.5em; margin-top: 0.83em; margin-bottom: 0.83em }
h3 { font-size: 1.17em; margin-top: 1em; margin-bottom: 1em }
h4 { margin-top: 1.33em; margin-bottom: 1.33em }
h5 { font-size: 0.83em; margin-top: 1.67em; margin-bottom: 1.67em }
h6 { font-size: 0.67em; margin-top: 2.33em; margin-bottom: 2.33em }
ul, ol, menu { padding-left: 40px }
dd { margin-left: 40px }
hr { margin-top: 0.5em; margin-bottom: 0.5em }
th { text-align: center }
center { text-align: center }
a { color: #0000ee }
pre, code, kbd, samp, tt { font-family: monospace }
button, input, select, textarea { display: inline-block; font-size: 13.333px; font-family: Arial }
button { padding: 1px 6px; background-color: #efefef; border-color: #767676; text-align: center }
input { padding: 1px 2px; background-color: #ffffff; border-color: #767676 }
textarea { padding: 2px; background-color: #ffffff; border-color: #767676; font-family: monospace }
select { background-color: #ffffff; border-color: #767676 }
"#;

/// Viewport recorded in static snapshots (no layout is computed).
pub const STATIC_VIEWPORT: Viewport = Viewport {
    width: 1280,
    height: 800,
};

const HANDLED: &[&str] = &[
    "font-size",
    "font-family",
    "line-height",
    "color",
    "background-color",
    "border-color",
    "text-align",
    "margin-top",
    "margin-right",
    "margin-bottom",
    "margin-left",
    "padding-top",
    "padding-right",
    "padding-bottom",
    "padding-left",
    "display",
    "opacity",
];

/// Properties that are valid CSS but outside the audited subset.
const IGNORED: &[&str] = &[
    "width", "min-width", "max-width", "height", "min-height", "max-height", "font-weight",
    "font-style", "font-variant", "font-stretch", "text-decoration", "text-decoration-line",
    "text-decoration-color", "text-transform", "text-indent", "text-shadow", "letter-spacing",
    "word-spacing", "white-space", "word-break", "overflow-wrap", "word-wrap", "vertical-align",
    "border-width", "border-style", "border-radius", "border-top-width", "border-right-width",
    "border-bottom-width", "border-left-width", "border-top-style", "border-right-style",
    "border-bottom-style", "border-left-style", "border-collapse", "border-spacing",
    "border-top-left-radius", "border-top-right-radius", "border-bottom-left-radius",
    "border-bottom-right-radius", "box-shadow", "box-sizing", "outline", "outline-color",
    "outline-style", "outline-width", "outline-offset", "position", "top", "right", "bottom",
    "left", "z-index", "float", "clear", "overflow", "overflow-x", "overflow-y", "visibility",
    "cursor", "transition", "transform", "animation", "content", "list-style", "list-style-type",
    "list-style-position", "list-style-image", "flex", "flex-direction", "flex-wrap", "flex-grow",
    "flex-shrink", "flex-basis", "flex-flow", "justify-content", "align-items", "align-self",
    "align-content", "order", "gap", "row-gap", "column-gap", "grid", "grid-template-columns",
    "grid-template-rows", "grid-column", "grid-row", "grid-area", "grid-gap",
    "background-image", "background-size", "background-position", "background-repeat",
    "background-attachment", "background-clip", "object-fit", "filter", "pointer-events",
    "user-select", "resize", "appearance", "-webkit-appearance", "table-layout", "caption-side",
    "quotes", "direction", "unicode-bidi", "text-overflow", "hyphens", "tab-size", "will-change",
    "scroll-behavior", "aspect-ratio", "inset", "clip", "clip-path", "mix-blend-mode",
];

#[derive(Debug, Clone, Copy, PartialEq)]
enum LineHeight {
    Normal,
    /// Unitless factor; inherited as a factor.
    Factor(f64),
    Px(f64),
}

/// Inherited state carried down the tree.
#[derive(Debug, Clone)]
struct Inherited {
    font_size: f64,
    font_families: Vec<String>,
    line_height: LineHeight,
    color: RgbaColor,
    text_align: TextAlign,
}

impl Default for Inherited {
    fn default() -> Self {
        Inherited {
            font_size: 16.0,
            font_families: vec!["Times New Roman".to_string()],
            line_height: LineHeight::Normal,
            color: RgbaColor::BLACK,
            text_align: TextAlign::Start,
        }
    }
}

pub(crate) struct Resolver<'a> {
    rules: &'a [CssRule],
    ua_rules: Vec<CssRule>,
    viewport: Viewport,
    pub notes: BTreeSet<String>,
}

fn font_size_keyword(value: &str, parent: f64) -> Option<f64> {
    Some(match value {
        "xx-small" => 9.0,
        "x-small" => 10.0,
        "small" => 13.0,
        "medium" => 16.0,
        "large" => 18.0,
        "x-large" => 24.0,
        "xx-large" => 32.0,
        "xxx-large" => 48.0,
        "smaller" => parent / 1.2,
        "larger" => parent * 1.2,
        _ => return None,
    })
}

/// Expands shorthands into the handled longhands.
fn expand(prop: &str, value: &str) -> Vec<(String, String)> {
    let v = value.trim();
    let lower = v.to_ascii_lowercase();
    let box_sides = |prefix: &str| -> Vec<(String, String)> {
        if matches!(lower.as_str(), "inherit" | "initial" | "unset") {
            return ["top", "right", "bottom", "left"]
                .iter()
                .map(|s| (format!("{prefix}-{s}"), lower.clone()))
                .collect();
        }
        match expand_box(v) {
            Some(sides) => ["top", "right", "bottom", "left"]
                .iter()
                .zip(sides)
                .map(|(s, val)| (format!("{prefix}-{s}"), val))
                .collect(),
            None => Vec::new(),
        }
    };
    match prop {
        "margin" => box_sides("margin"),
        "padding" => box_sides("padding"),
        "background" => {
            if matches!(lower.as_str(), "inherit" | "initial" | "unset") {
                return vec![("background-color".into(), lower)];
            }
            let color = color_in_shorthand(v).unwrap_or(RgbaColor::TRANSPARENT);
            vec![("background-color".into(), color.css())]
        }
        "border" | "border-top" | "border-right" | "border-bottom" | "border-left" => {
            match color_in_shorthand(v) {
                Some(c) => vec![("border-color".into(), c.css())],
                None if lower.split_whitespace().any(|t| t == "currentcolor") => {
                    vec![("border-color".into(), "currentcolor".into())]
                }
                None => Vec::new(),
            }
        }
        "border-color" => {
            let first = v.split_whitespace().next().unwrap_or("").to_string();
            vec![("border-color".into(), if parse_color(v).is_some() { v.to_string() } else { first })]
        }
        "border-top-color" | "border-right-color" | "border-bottom-color" | "border-left-color" => {
            vec![("border-color".into(), v.to_string())]
        }
        "font" => expand_font(v),
        _ => vec![(prop.to_string(), v.to_string())],
    }
}

/// `font: [style] [weight] size[/line-height] family`.
fn expand_font(v: &str) -> Vec<(String, String)> {
    let tokens: Vec<&str> = v.split_whitespace().collect();
    let probe = LengthContext {
        em: 16.0,
        rem: 16.0,
        percent_base: 16.0,
        viewport_w: 100.0,
        viewport_h: 100.0,
    };
    for (i, tok) in tokens.iter().enumerate() {
        let (size, lh) = match tok.split_once('/') {
            Some((s, l)) => (s, Some(l)),
            None => (*tok, None),
        };
        let is_size = parse_length(size, &probe).is_some() || font_size_keyword(size, 16.0).is_some();
        if !is_size {
            continue;
        }
        let mut rest = tokens[i + 1..].join(" ");
        let mut lh = lh.map(str::to_string);
        if lh.is_none() {
            if let Some(r) = rest.strip_prefix('/') {
                let r = r.trim_start();
                let (l, tail) = r.split_once(' ').unwrap_or((r, ""));
                lh = Some(l.to_string());
                rest = tail.to_string();
            }
        }
        let mut out = vec![
            ("font-size".to_string(), size.to_string()),
            ("line-height".to_string(), lh.unwrap_or_else(|| "normal".into())),
        ];
        if !rest.trim().is_empty() {
            out.push(("font-family".to_string(), rest.trim().to_string()));
        }
        return out;
    }
    Vec::new()
}

impl<'a> Resolver<'a> {
    pub fn new(rules: &'a [CssRule], viewport: Viewport) -> Self {
        let mut ua_notes = Vec::new();
        let ua_rules = parse_stylesheet(USER_AGENT_CSS, Origin::UserAgent, 0, &mut ua_notes);
        debug_assert!(ua_notes.is_empty(), "{ua_notes:?}");
        Resolver {
            rules,
            ua_rules,
            viewport,
            notes: BTreeSet::new(),
        }
    }

    /// Winning declared value per handled longhand.
    fn declared(
        &mut self,
        node: &DomNode,
        ancestors: &[&DomNode],
        preorder: Option<usize>,
    ) -> BTreeMap<String, String> {
        let mut winners: BTreeMap<String, (Precedence, String)> = BTreeMap::new();
        for rule in self.ua_rules.iter().chain(self.rules.iter()) {
            let applies = match (&rule.origin, &rule.selector) {
                (Origin::Inline(i), _) => Some(*i) == preorder,
                (_, Some(sel)) => sel.matches(node, ancestors),
                (_, None) => false,
            };
            if !applies {
                continue;
            }
            for (prop, decl) in &rule.declarations {
                let expanded = expand(prop, &decl.value);
                if expanded.is_empty() {
                    if !IGNORED.contains(&prop.as_str()) && !prop.starts_with("--") {
                        self.notes
                            .insert(format!("unsupported value `{}` for {prop} ignored", decl.value));
                    }
                    continue;
                }
                for (long, value) in expanded {
                    if !HANDLED.contains(&long.as_str()) {
                        if !IGNORED.contains(&long.as_str()) && !long.starts_with("--") {
                            self.notes.insert(format!("unknown property {long} ignored"));
                        }
                        continue;
                    }
                    let prec = rule.precedence(decl);
                    if winners.get(&long).is_none_or(|(p, _)| prec > *p) {
                        winners.insert(long, (prec, value));
                    }
                }
                if decl.important && !matches!(rule.origin, Origin::UserAgent | Origin::Patch) {
                    self.notes.insert(format!("!important used on {prop}"));
                }
            }
        }
        winners.into_iter().map(|(k, (_, v))| (k, v)).collect()
    }

    fn length(&mut self, prop: &str, value: &str, ctx: &LengthContext) -> Option<f64> {
        let v = value.trim().to_ascii_lowercase();
        if v == "auto" {
            return Some(0.0);
        }
        if v.ends_with('%') && prop.starts_with("margin") || v.ends_with('%') && prop.starts_with("padding") {
            self.notes
                .insert(format!("percentage {prop} resolved against the viewport width"));
        }
        let px = parse_length(&v, ctx);
        if px.is_none() {
            self.notes.insert(format!("invalid {prop} value `{value}` ignored"));
        }
        px
    }

    fn compute(
        &mut self,
        node: &DomNode,
        ancestors: &[&DomNode],
        preorder: Option<usize>,
        parent: &Inherited,
        parent_style: Option<&ComputedStyle>,
    ) -> (ComputedStyle, Inherited) {
        let declared = self.declared(node, ancestors, preorder);
        let get = |p: &str| declared.get(p).map(|v| v.trim().to_string());
        let vw = self.viewport.width as f64;
        let vh = self.viewport.height as f64;

        // Font size first: other lengths depend on it.
        let mut font_size = parent.font_size;
        if let Some(v) = get("font-size") {
            let lower = v.to_ascii_lowercase();
            let ctx = LengthContext {
                em: parent.font_size,
                rem: 16.0,
                percent_base: parent.font_size,
                viewport_w: vw,
                viewport_h: vh,
            };
            let resolved = if matches!(lower.as_str(), "inherit" | "unset") {
                Some(parent.font_size)
            } else if lower == "initial" {
                Some(16.0)
            } else {
                font_size_keyword(&lower, parent.font_size).or_else(|| parse_length(&lower, &ctx))
            };
            match resolved {
                Some(px) if px > 0.0 => font_size = px,
                _ => {
                    self.notes.insert(format!("invalid font-size `{v}` ignored"));
                }
            }
        }
        let ctx = LengthContext {
            em: font_size,
            rem: 16.0,
            percent_base: vw,
            viewport_w: vw,
            viewport_h: vh,
        };

        let mut font_families = parent.font_families.clone();
        if let Some(v) = get("font-family") {
            match v.to_ascii_lowercase().as_str() {
                "inherit" | "unset" => {}
                "initial" => font_families = Inherited::default().font_families,
                _ => {
                    let fams = parse_font_families(&v);
                    if !fams.is_empty() {
                        font_families = fams;
                    }
                }
            }
        }

        let mut line_height = parent.line_height;
        if let Some(v) = get("line-height") {
            let lower = v.to_ascii_lowercase();
            match lower.as_str() {
                "inherit" | "unset" => {}
                "normal" | "initial" => line_height = LineHeight::Normal,
                _ => {
                    if let Ok(f) = lower.parse::<f64>() {
                        if f >= 0.0 {
                            line_height = LineHeight::Factor(f);
                        }
                    } else {
                        let lctx = LengthContext {
                            percent_base: font_size,
                            ..ctx
                        };
                        match parse_length(&lower, &lctx) {
                            Some(px) if px >= 0.0 => line_height = LineHeight::Px(px),
                            _ => {
                                self.notes.insert(format!("invalid line-height `{v}` ignored"));
                            }
                        }
                    }
                }
            }
        }

        let mut color = parent.color;
        if let Some(v) = get("color") {
            match v.to_ascii_lowercase().as_str() {
                "inherit" | "unset" | "currentcolor" => {}
                "initial" => color = RgbaColor::BLACK,
                _ => match parse_color(&v) {
                    Some(c) => color = c,
                    None => {
                        self.notes.insert(format!("invalid color `{v}` ignored"));
                    }
                },
            }
        }

        let mut text_align = parent.text_align;
        if let Some(v) = get("text-align") {
            let lower = v.to_ascii_lowercase();
            match lower.as_str() {
                "inherit" | "unset" => {}
                "initial" => text_align = TextAlign::Start,
                "-webkit-center" | "-moz-center" => text_align = TextAlign::Center,
                _ => match TextAlign::parse(&lower) {
                    Some(a) => text_align = a,
                    None => {
                        self.notes.insert(format!("invalid text-align `{v}` ignored"));
                    }
                },
            }
        }

        let color_value = |v: &str, own: RgbaColor, inherited: Option<RgbaColor>| -> Option<RgbaColor> {
            match v.to_ascii_lowercase().as_str() {
                "currentcolor" => Some(own),
                "inherit" => inherited,
                "initial" | "unset" => None,
                _ => parse_color(v),
            }
        };

        let mut background_color = RgbaColor::TRANSPARENT;
        if let Some(v) = get("background-color") {
            let inherited = parent_style.map(|s| s.background_color);
            match color_value(&v, color, inherited) {
                Some(c) => background_color = c,
                None if matches!(v.to_ascii_lowercase().as_str(), "initial" | "unset") => {}
                None => {
                    self.notes.insert(format!("invalid background-color `{v}` ignored"));
                }
            }
        }

        let mut border_color = None;
        if let Some(v) = get("border-color") {
            let inherited = parent_style.and_then(|s| s.border_color);
            border_color = color_value(&v, color, inherited);
        }

        let mut sides = |prefix: &str, allow_negative: bool| -> EdgeSizes {
            let mut out = [0.0; 4];
            for (i, side) in ["top", "right", "bottom", "left"].iter().enumerate() {
                let prop = format!("{prefix}-{side}");
                let Some(v) = get(&prop) else { continue };
                let lower = v.to_ascii_lowercase();
                if lower == "inherit" {
                    if let Some(ps) = parent_style {
                        let e = if prefix == "margin" { ps.margin } else { ps.padding };
                        out[i] = e.sides()[i].1;
                    }
                    continue;
                }
                if matches!(lower.as_str(), "initial" | "unset") {
                    continue;
                }
                if let Some(px) = self.length(&prop, &v, &ctx) {
                    if px < 0.0 && !allow_negative {
                        self.notes.insert(format!("negative {prop} `{v}` ignored"));
                    } else {
                        out[i] = px;
                    }
                }
            }
            EdgeSizes {
                top: out[0],
                right: out[1],
                bottom: out[2],
                left: out[3],
            }
        };
        let margin = sides("margin", true);
        let padding = sides("padding", false);

        let mut display = "inline".to_string();
        if let Some(v) = get("display") {
            let lower = v.to_ascii_lowercase();
            match lower.as_str() {
                "inherit" => {
                    if let Some(ps) = parent_style {
                        display = ps.display.clone();
                    }
                }
                "initial" | "unset" => {}
                _ => display = lower,
            }
        }

        let mut opacity = 1.0;
        if let Some(v) = get("opacity") {
            let lower = v.to_ascii_lowercase();
            let parsed = match lower.strip_suffix('%') {
                Some(p) => p.trim().parse::<f64>().ok().map(|x| x / 100.0),
                None => lower.parse::<f64>().ok(),
            };
            match parsed {
                Some(o) => opacity = o.clamp(0.0, 1.0),
                None if lower == "inherit" => opacity = parent_style.map_or(1.0, |s| s.opacity),
                None => {
                    self.notes.insert(format!("invalid opacity `{v}` ignored"));
                }
            }
        }

        let line_height_px = match line_height {
            LineHeight::Normal => None,
            LineHeight::Factor(f) => Some(f * font_size),
            LineHeight::Px(px) => Some(px),
        };
        let style = ComputedStyle {
            font_size,
            font_families: font_families.clone(),
            line_height: line_height_px,
            color,
            background_color,
            border_color,
            text_align,
            margin,
            padding,
            display,
            opacity,
        };
        let inherited = Inherited {
            font_size,
            font_families,
            line_height,
            color,
            text_align,
        };
        (style, inherited)
    }
}

/// Resolves styles for the body subtree. `ids` maps preorder index to the
/// element id assigned to that element.
pub(crate) fn resolve_tree(
    body: &DomNode,
    html_attrs: &[(String, String)],
    rules: &[CssRule],
    ids: &[String],
    viewport: Viewport,
) -> (ElementNode, Vec<String>) {
    let mut resolver = Resolver::new(rules, viewport);
    // The <html> element is not part of the audited tree, but rules on it
    // still feed inheritance (and canvas background propagation).
    let html = DomNode::new("html", html_attrs.to_vec());
    let (html_style, html_inherited) =
        resolver.compute(&html, &[], None, &Inherited::default(), None);

    struct Walk<'r, 'a> {
        resolver: &'r mut Resolver<'a>,
        ids: &'r [String],
        counter: usize,
    }
    impl Walk<'_, '_> {
        fn visit<'n>(
            &mut self,
            node: &'n DomNode,
            ancestors: &mut Vec<&'n DomNode>,
            html: &'n DomNode,
            parent: &Inherited,
            parent_style: &ComputedStyle,
        ) -> ElementNode {
            let index = self.counter;
            self.counter += 1;
            // Selector matching wants nearest ancestor first, ending at <html>.
            let mut chain: Vec<&DomNode> = ancestors.iter().rev().copied().collect();
            chain.push(html);
            let (style, inherited) =
                self.resolver
                    .compute(node, &chain, Some(index), parent, Some(parent_style));
            let mut element = ElementNode::new(self.ids[index].clone(), node.tag.clone());
            element.classes = node.classes.clone();
            element.text = if super::super::model::METADATA_TAGS.contains(&node.tag.as_str()) {
                None
            } else {
                node.own_text()
            };
            ancestors.push(node);
            for child in node.elements() {
                let child_el = self.visit(child, ancestors, html, &inherited, &style);
                element.children.push(child_el);
            }
            ancestors.pop();
            element.style = style;
            element
        }
    }
    let mut walk = Walk {
        resolver: &mut resolver,
        ids,
        counter: 0,
    };
    let mut root = walk.visit(body, &mut Vec::new(), &html, &html_inherited, &html_style);
    if root.style.background_color.is_transparent() && !html_style.background_color.is_transparent() {
        root.style.background_color = html_style.background_color;
        resolver
            .notes
            .insert("background of <html> propagated to <body>".to_string());
    }
    let notes = resolver.notes.into_iter().collect();
    (root, notes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ua_sheet_parses_cleanly() {
        let mut notes = Vec::new();
        let rules = parse_stylesheet(USER_AGENT_CSS, Origin::UserAgent, 0, &mut notes);
        assert!(notes.is_empty(), "{notes:?}");
        assert!(rules.len() > 60);
    }

    #[test]
    fn font_shorthand() {
        let out = expand_font("italic bold 12px/30px Georgia, serif");
        assert_eq!(
            out,
            vec![
                ("font-size".to_string(), "12px".to_string()),
                ("line-height".to_string(), "30px".to_string()),
                ("font-family".to_string(), "Georgia, serif".to_string()),
            ]
        );
        assert_eq!(expand_font("1.2em \"Open Sans\"")[2].1, "\"Open Sans\"");
    }

    #[test]
    fn margin_shorthand_expands() {
        let out = expand("margin", "1px 2px");
        assert_eq!(out.len(), 4);
        assert_eq!(out[3], ("margin-left".to_string(), "2px".to_string()));
        assert!(super::super::css::parse_declarations("margin: 0", &mut Vec::new())["margin"].value == "0");
    }
}
