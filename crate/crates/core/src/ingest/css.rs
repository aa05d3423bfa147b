//! Stylesheet parsing, selectors and value parsing.
//!
//! Supported selectors: type, `*`, `.class`, `#id`, compounds of those,
//! descendant combinators and comma groups. Anything else (attribute and
//! pseudo selectors, child/sibling combinators) drops the selector with a
//! note.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::color::CSS_NAMED_COLORS;
use crate::model::{ElementNode, RgbaColor};

/// One compound selector: `tag#id.class1.class2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Compound {
    pub tag: Option<String>,
    pub id: Option<String>,
    pub classes: Vec<String>,
}

/// Descendant chain of compounds, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selector {
    pub parts: Vec<Compound>,
}

/// `(id_count, class_count, tag_count)`.
pub type Specificity = (u32, u32, u32);

/// `(important, origin tier, specificity, source order, position in block)`.
pub type Precedence = (bool, u8, Specificity, usize, usize);

/// Anything a selector can be tested against.
pub trait Matchable {
    fn tag_name(&self) -> &str;
    fn element_id(&self) -> Option<&str>;
    fn class_list(&self) -> &[String];
}

impl Matchable for ElementNode {
    fn tag_name(&self) -> &str {
        &self.tag
    }
    fn element_id(&self) -> Option<&str> {
        Some(&self.id)
    }
    fn class_list(&self) -> &[String] {
        &self.classes
    }
}

impl Compound {
    fn matches<N: Matchable + ?Sized>(&self, node: &N) -> bool {
        if let Some(tag) = &self.tag {
            if tag != node.tag_name() {
                return false;
            }
        }
        if let Some(id) = &self.id {
            if node.element_id() != Some(id.as_str()) {
                return false;
            }
        }
        self.classes
            .iter()
            .all(|c| node.class_list().iter().any(|k| k == c))
    }
}

impl Selector {
    pub fn parse(text: &str) -> Result<Selector, String> {
        let text = text.trim();
        if text.is_empty() {
            return Err("empty selector".into());
        }
        if let Some(bad) = text.chars().find(|c| matches!(c, '>' | '+' | '~' | '[' | ':' | '(')) {
            return Err(format!("unsupported selector syntax `{bad}` in `{text}`"));
        }
        let parts = text
            .split_whitespace()
            .map(parse_compound)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Selector { parts })
    }

    pub fn specificity(&self) -> Specificity {
        self.parts.iter().fold((0, 0, 0), |(a, b, c), p| {
            (
                a + u32::from(p.id.is_some()),
                b + p.classes.len() as u32,
                c + u32::from(p.tag.is_some()),
            )
        })
    }

    /// `ancestors` runs from the nearest parent outwards.
    pub fn matches<N: Matchable + ?Sized>(&self, node: &N, ancestors: &[&N]) -> bool {
        let Some((last, rest)) = self.parts.split_last() else {
            return false;
        };
        if !last.matches(node) {
            return false;
        }
        let mut up = ancestors.iter();
        'outer: for part in rest.iter().rev() {
            for anc in up.by_ref() {
                if part.matches(*anc) {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '_' || !c.is_ascii()
}

fn parse_compound(s: &str) -> Result<Compound, String> {
    let mut tag = None;
    let mut id = None;
    let mut classes = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let ident = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && is_ident_char(chars[*i]) {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    if i < chars.len() && chars[i] == '*' {
        i += 1;
    } else if i < chars.len() && is_ident_char(chars[i]) {
        tag = Some(ident(&mut i).to_ascii_lowercase());
    }
    while i < chars.len() {
        let sigil = chars[i];
        i += 1;
        let name = ident(&mut i);
        if name.is_empty() {
            return Err(format!("malformed selector `{s}`"));
        }
        match sigil {
            '.' => classes.push(name),
            '#' if id.is_none() => id = Some(name),
            _ => return Err(format!("malformed selector `{s}`")),
        }
    }
    if tag.is_none() && id.is_none() && classes.is_empty() && !s.starts_with('*') {
        return Err(format!("malformed selector `{s}`"));
    }
    Ok(Compound { tag, id, classes })
}

impl fmt::Display for Compound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            Some(t) => write!(f, "{t}")?,
            None if self.id.is_none() && self.classes.is_empty() => write!(f, "*")?,
            None => {}
        }
        if let Some(id) = &self.id {
            write!(f, "#{id}")?;
        }
        for c in &self.classes {
            write!(f, ".{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Declaration {
    pub value: String,
    pub important: bool,
    /// Position inside its declaration block; later declarations win.
    pub position: usize,
}

/// Where a rule came from; later tiers win over earlier ones at equal
/// importance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Built-in default stylesheet.
    UserAgent,
    Stylesheet,
    /// `style="..."` attribute of the element with the given preorder index.
    Inline(usize),
    /// Declarations applied by a CSS patch.
    Patch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CssRule {
    pub selector: Option<Selector>,
    pub origin: Origin,
    pub declarations: BTreeMap<String, Declaration>,
    pub specificity: Specificity,
    pub source_order: usize,
}

impl CssRule {
    fn tier(&self) -> u8 {
        match self.origin {
            Origin::UserAgent => 0,
            Origin::Stylesheet => 1,
            Origin::Inline(_) => 2,
            Origin::Patch => 3,
        }
    }

    /// Cascade precedence of a declaration of this rule; larger wins.
    pub fn precedence(&self, decl: &Declaration) -> Precedence {
        (decl.important, self.tier(), self.specificity, self.source_order, decl.position)
    }
}

/// Removes `/* ... */` comments.
pub fn strip_comments(css: &str) -> String {
    let mut out = String::with_capacity(css.len());
    let mut rest = css;
    while let Some(start) = rest.find("/*") {
        out.push_str(&rest[..start]);
        match rest[start + 2..].find("*/") {
            Some(end) => rest = &rest[start + 2 + end + 2..],
            None => {
                rest = "";
                break;
            }
        }
    }
    out.push_str(rest);
    out
}

/// Splits on `sep` outside parentheses and quotes.
pub fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut quote: Option<char> = None;
    let mut cur = String::new();
    for c in s.chars() {
        match quote {
            Some(q) => {
                if c == q {
                    quote = None;
                }
                cur.push(c);
            }
            None => match c {
                '"' | '\'' => {
                    quote = Some(c);
                    cur.push(c);
                }
                '(' => {
                    depth += 1;
                    cur.push(c);
                }
                ')' => {
                    depth -= 1;
                    cur.push(c);
                }
                c if c == sep && depth == 0 => parts.push(std::mem::take(&mut cur)),
                _ => cur.push(c),
            },
        }
    }
    parts.push(cur);
    parts
}

/// Parses a declaration block body (`color: red; margin: 0 !important`).
pub fn parse_declarations(block: &str, notes: &mut Vec<String>) -> BTreeMap<String, Declaration> {
    let mut out = BTreeMap::new();
    for (position, decl) in split_top_level(block, ';').into_iter().enumerate() {
        let decl = decl.trim();
        if decl.is_empty() {
            continue;
        }
        let Some((prop, value)) = decl.split_once(':') else {
            notes.push(format!("malformed declaration `{decl}` ignored"));
            continue;
        };
        let prop = prop.trim().to_ascii_lowercase();
        let mut value = value.trim().to_string();
        let mut important = false;
        if let Some(pos) = value.to_ascii_lowercase().rfind("!important") {
            important = true;
            value.truncate(pos);
            value = value.trim().to_string();
        }
        if prop.is_empty() || value.is_empty() {
            notes.push(format!("malformed declaration `{decl}` ignored"));
            continue;
        }
        out.insert(prop, Declaration { value, important, position });
    }
    out
}

/// Parses a stylesheet; rules get consecutive source orders from `first_order`.
pub fn parse_stylesheet(
    css: &str,
    origin: Origin,
    first_order: usize,
    notes: &mut Vec<String>,
) -> Vec<CssRule> {
    let css = strip_comments(css);
    let mut rules = Vec::new();
    let mut order = first_order;
    let bytes: Vec<char> = css.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        while i < bytes.len() && bytes[i].is_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        let prelude_start = i;
        while i < bytes.len() && bytes[i] != '{' && bytes[i] != ';' {
            i += 1;
        }
        let prelude: String = bytes[prelude_start..i].iter().collect();
        if i >= bytes.len() {
            if !prelude.trim().is_empty() {
                notes.push(format!("unterminated rule `{}` ignored", prelude.trim()));
            }
            break;
        }
        if bytes[i] == ';' {
            // `@import ...;` and similar statements.
            notes.push(format!("statement `{}` ignored", prelude.trim()));
            i += 1;
            continue;
        }
        // Find the matching close brace.
        let body_start = i + 1;
        let mut depth = 0;
        let mut j = i;
        while j < bytes.len() {
            match bytes[j] {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            j += 1;
        }
        let body: String = bytes[body_start..j.min(bytes.len())].iter().collect();
        if j >= bytes.len() {
            notes.push(format!("unclosed block after `{}` auto-closed", prelude.trim()));
        }
        i = j + 1;
        let prelude = prelude.trim();
        if prelude.starts_with('@') {
            notes.push(format!("at-rule `{prelude}` ignored"));
            continue;
        }
        let declarations = parse_declarations(&body, notes);
        for sel_text in prelude.split(',') {
            match Selector::parse(sel_text) {
                Ok(selector) => {
                    rules.push(CssRule {
                        specificity: selector.specificity(),
                        selector: Some(selector),
                        origin,
                        declarations: declarations.clone(),
                        source_order: order,
                    });
                    order += 1;
                }
                Err(e) => notes.push(format!("selector ignored: {e}")),
            }
        }
    }
    rules
}

// ---------------------------------------------------------------------------
// Values

pub fn named_color(name: &str) -> Option<RgbaColor> {
    let name = name.trim().to_ascii_lowercase();
    if name == "transparent" {
        return Some(RgbaColor::TRANSPARENT);
    }
    CSS_NAMED_COLORS
        .binary_search_by(|(n, ..)| n.cmp(&name.as_str()))
        .ok()
        .map(|i| {
            let (_, r, g, b) = CSS_NAMED_COLORS[i];
            RgbaColor::rgb(r, g, b)
        })
}

fn parse_channel(s: &str) -> Option<u8> {
    let s = s.trim();
    let v = if let Some(p) = s.strip_suffix('%') {
        p.trim().parse::<f64>().ok()? * 2.55
    } else {
        s.parse::<f64>().ok()?
    };
    Some(v.round().clamp(0.0, 255.0) as u8)
}

fn parse_alpha(s: &str) -> Option<f64> {
    let s = s.trim();
    let v = if let Some(p) = s.strip_suffix('%') {
        p.trim().parse::<f64>().ok()? / 100.0
    } else {
        s.parse::<f64>().ok()?
    };
    Some(v.clamp(0.0, 1.0))
}

fn func_args(s: &str) -> Vec<String> {
    let normalized = s.replace('/', " / ");
    if normalized.contains(',') {
        normalized
            .split(',')
            .map(|p| p.replace(" / ", "").trim().to_string())
            .collect()
    } else {
        normalized
            .split_whitespace()
            .filter(|t| *t != "/")
            .map(str::to_string)
            .collect()
    }
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> (u8, u8, u8) {
    let h = h.rem_euclid(360.0) / 360.0;
    let q = if l < 0.5 { l * (1.0 + s) } else { l + s - l * s };
    let p = 2.0 * l - q;
    let hue = |mut t: f64| {
        if t < 0.0 {
            t += 1.0;
        }
        if t > 1.0 {
            t -= 1.0;
        }
        if t < 1.0 / 6.0 {
            p + (q - p) * 6.0 * t
        } else if t < 0.5 {
            q
        } else if t < 2.0 / 3.0 {
            p + (q - p) * (2.0 / 3.0 - t) * 6.0
        } else {
            p
        }
    };
    let to = |v: f64| (v * 255.0).round().clamp(0.0, 255.0) as u8;
    (to(hue(h + 1.0 / 3.0)), to(hue(h)), to(hue(h - 1.0 / 3.0)))
}

/// Parses a CSS color value. `currentcolor` is left to the caller.
pub fn parse_color(value: &str) -> Option<RgbaColor> {
    let v = value.trim().to_ascii_lowercase();
    if let Some(hex) = v.strip_prefix('#') {
        if !hex.is_ascii() {
            return None;
        }
        let h = |s: &str| u8::from_str_radix(s, 16).ok();
        return match hex.len() {
            3 | 4 => {
                let d: Vec<u8> = hex.chars().map(|c| h(&c.to_string()).map(|x| x * 17)).collect::<Option<_>>()?;
                let a = if d.len() == 4 { d[3] as f64 / 255.0 } else { 1.0 };
                Some(RgbaColor::rgba(d[0], d[1], d[2], a))
            }
            6 | 8 => {
                let a = if hex.len() == 8 { h(&hex[6..8])? as f64 / 255.0 } else { 1.0 };
                Some(RgbaColor::rgba(h(&hex[0..2])?, h(&hex[2..4])?, h(&hex[4..6])?, a))
            }
            _ => None,
        };
    }
    if let Some(open) = v.find('(') {
        let name = v[..open].trim();
        let inner = v[open + 1..].trim_end().strip_suffix(')')?;
        let args = func_args(inner);
        return match name {
            "rgb" | "rgba" if args.len() >= 3 => Some(RgbaColor::rgba(
                parse_channel(&args[0])?,
                parse_channel(&args[1])?,
                parse_channel(&args[2])?,
                args.get(3).map(|a| parse_alpha(a)).unwrap_or(Some(1.0))?,
            )),
            "hsl" | "hsla" if args.len() >= 3 => {
                let hue = args[0].trim_end_matches("deg").parse::<f64>().ok()?;
                let s = args[1].trim_end_matches('%').parse::<f64>().ok()? / 100.0;
                let l = args[2].trim_end_matches('%').parse::<f64>().ok()? / 100.0;
                let (r, g, b) = hsl_to_rgb(hue, s.clamp(0.0, 1.0), l.clamp(0.0, 1.0));
                let a = args.get(3).map(|a| parse_alpha(a)).unwrap_or(Some(1.0))?;
                Some(RgbaColor::rgba(r, g, b, a))
            }
            _ => None,
        };
    }
    named_color(&v)
}

/// Finds the first token of a shorthand (`background`, `border`) that is a color.
pub fn color_in_shorthand(value: &str) -> Option<RgbaColor> {
    if let Some(c) = parse_color(value) {
        return Some(c);
    }
    let mut tokens = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in value.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens.iter().find_map(|t| parse_color(t))
}

/// Context needed to resolve relative lengths.
#[derive(Debug, Clone, Copy)]
pub struct LengthContext {
    /// Font size that `em` refers to.
    pub em: f64,
    pub rem: f64,
    /// Reference for percentages.
    pub percent_base: f64,
    pub viewport_w: f64,
    pub viewport_h: f64,
}

/// Resolves a length to px. Unitless numbers other than 0 are rejected.
pub fn parse_length(value: &str, ctx: &LengthContext) -> Option<f64> {
    let v = value.trim().to_ascii_lowercase();
    if v == "0" {
        return Some(0.0);
    }
    let split = v
        .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-' || c == '+' || c == 'e'))
        .unwrap_or(v.len());
    // `e` is also the first letter of `em`/`ex`; back off if so.
    let split = if v[..split].ends_with('e') { split - 1 } else { split };
    let (num, unit) = v.split_at(split);
    let n: f64 = num.parse().ok()?;
    let px = match unit.trim() {
        "px" => n,
        "em" => n * ctx.em,
        "rem" => n * ctx.rem,
        "ex" => n * ctx.em * 0.5,
        "ch" => n * ctx.em * 0.5,
        "%" => n * ctx.percent_base / 100.0,
        "pt" => n * 96.0 / 72.0,
        "pc" => n * 16.0,
        "in" => n * 96.0,
        "cm" => n * 96.0 / 2.54,
        "mm" => n * 96.0 / 25.4,
        "q" => n * 96.0 / 101.6,
        "vw" => n * ctx.viewport_w / 100.0,
        "vh" => n * ctx.viewport_h / 100.0,
        "vmin" => n * ctx.viewport_w.min(ctx.viewport_h) / 100.0,
        "vmax" => n * ctx.viewport_w.max(ctx.viewport_h) / 100.0,
        _ => return None,
    };
    px.is_finite().then_some(px)
}

/// Expands a 1-4 value box shorthand into (top, right, bottom, left).
pub fn expand_box(value: &str) -> Option<[String; 4]> {
    let t: Vec<String> = value.split_whitespace().map(str::to_string).collect();
    Some(match t.len() {
        1 => [t[0].clone(), t[0].clone(), t[0].clone(), t[0].clone()],
        2 => [t[0].clone(), t[1].clone(), t[0].clone(), t[1].clone()],
        3 => [t[0].clone(), t[1].clone(), t[2].clone(), t[1].clone()],
        4 => [t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone()],
        _ => return None,
    })
}

/// Splits a `font-family` list, dropping quotes.
pub fn parse_font_families(value: &str) -> Vec<String> {
    split_top_level(value, ',')
        .into_iter()
        .map(|f| f.trim().trim_matches(|c| c == '"' || c == '\'').trim().to_string())
        .filter(|f| !f.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specificity_counts() {
        assert_eq!(Selector::parse(".a").unwrap().specificity(), (0, 1, 0));
        assert_eq!(Selector::parse("p").unwrap().specificity(), (0, 0, 1));
        assert_eq!(Selector::parse("#main div.x.y").unwrap().specificity(), (1, 2, 1));
        assert_eq!(Selector::parse("*").unwrap().specificity(), (0, 0, 0));
    }

    #[test]
    fn unsupported_selectors_error() {
        assert!(Selector::parse("a:hover").is_err());
        assert!(Selector::parse("ul > li").is_err());
        assert!(Selector::parse("input[type=text]").is_err());
    }

    #[test]
    fn comma_groups_split_into_rules() {
        let mut notes = vec![];
        let rules = parse_stylesheet("h1, .a p { color: red } a:hover{color:blue}", Origin::Stylesheet, 0, &mut notes);
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[1].selector.as_ref().unwrap().to_string(), ".a p");
        assert_eq!(rules[0].source_order, 0);
        assert_eq!(rules[1].source_order, 1);
        assert_eq!(notes.len(), 1);
    }

    #[test]
    fn important_is_detected() {
        let mut notes = vec![];
        let d = parse_declarations("color: red !important; margin:0", &mut notes);
        assert!(d["color"].important);
        assert_eq!(d["color"].value, "red");
        assert!(!d["margin"].important);
    }

    #[test]
    fn media_queries_are_skipped() {
        let mut notes = vec![];
        let rules = parse_stylesheet("@media (max-width: 10px) { p { color: red } } p{color:blue}", Origin::Stylesheet, 0, &mut notes);
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].declarations["color"].value, "blue");
    }

    #[test]
    fn color_syntaxes() {
        assert_eq!(parse_color("#f00"), Some(RgbaColor::rgb(255, 0, 0)));
        assert_eq!(parse_color("#3366CC"), Some(RgbaColor::rgb(0x33, 0x66, 0xcc)));
        assert_eq!(parse_color("rgb(168, 180, 255)"), Some(RgbaColor::rgb(168, 180, 255)));
        assert_eq!(parse_color("rgb(168 180 255 / 50%)"), Some(RgbaColor::rgba(168, 180, 255, 0.5)));
        assert_eq!(parse_color("rgba(0,0,0,0.5)"), Some(RgbaColor::rgba(0, 0, 0, 0.5)));
        assert_eq!(parse_color("hsl(120, 100%, 50%)"), Some(RgbaColor::rgb(0, 255, 0)));
        assert_eq!(parse_color("White"), Some(RgbaColor::WHITE));
        assert_eq!(parse_color("transparent"), Some(RgbaColor::TRANSPARENT));
        assert_eq!(parse_color("nonsense"), None);
        assert_eq!(color_in_shorthand("1px solid #ccc"), Some(RgbaColor::rgb(204, 204, 204)));
        assert_eq!(color_in_shorthand("url(x.png) no-repeat rgb(1, 2, 3)"), Some(RgbaColor::rgb(1, 2, 3)));
    }

    #[test]
    fn lengths() {
        let ctx = LengthContext { em: 20.0, rem: 16.0, percent_base: 200.0, viewport_w: 1000.0, viewport_h: 800.0 };
        assert_eq!(parse_length("12px", &ctx), Some(12.0));
        assert_eq!(parse_length("1.5em", &ctx), Some(30.0));
        assert_eq!(parse_length("2rem", &ctx), Some(32.0));
        assert_eq!(parse_length("50%", &ctx), Some(100.0));
        assert_eq!(parse_length("12pt", &ctx), Some(16.0));
        assert_eq!(parse_length("0", &ctx), Some(0.0));
        assert_eq!(parse_length("-4px", &ctx), Some(-4.0));
        assert_eq!(parse_length("10vw", &ctx), Some(100.0));
        assert_eq!(parse_length("auto", &ctx), None);
        assert_eq!(parse_length("12", &ctx), None);
    }

    #[test]
    fn font_family_lists() {
        assert_eq!(parse_font_families("\"Open Sans\", Arial, sans-serif"), vec!["Open Sans", "Arial", "sans-serif"]);
    }

    #[test]
    fn descendant_matching() {
        let sel = Selector::parse(".nav a").unwrap();
        let mut nav = ElementNode::new("n1", "div");
        nav.classes = vec!["nav".into()];
        let li = ElementNode::new("n2", "li");
        let a = ElementNode::new("n3", "a");
        assert!(sel.matches(&a, &[&li, &nav]));
        assert!(!sel.matches(&a, &[&li]));
        assert!(!sel.matches(&li, &[&nav]));
    }
}
