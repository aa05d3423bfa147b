//! Lenient HTML tokenizer and tree builder.
//!
//! Malformed markup never fails: unclosed elements are closed implicitly,
//! stray end tags are dropped and unknown tags are kept. Every recovery that
//! changes the tree shape beyond the optional-end-tag rules of HTML is
//! recorded as a note.

use crate::error::{Error, Result};

use super::css::Matchable;

#[derive(Debug, Clone, PartialEq)]
pub enum DomChild {
    Element(DomNode),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomNode {
    pub tag: String,
    pub attrs: Vec<(String, String)>,
    pub classes: Vec<String>,
    pub children: Vec<DomChild>,
}

impl DomNode {
    pub fn new(tag: &str, attrs: Vec<(String, String)>) -> Self {
        let classes = attrs
            .iter()
            .find(|(k, _)| k == "class")
            .map(|(_, v)| v.split_whitespace().map(str::to_string).collect())
            .unwrap_or_default();
        DomNode {
            tag: tag.to_string(),
            attrs,
            classes,
            children: Vec::new(),
        }
    }

    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn elements(&self) -> impl Iterator<Item = &DomNode> {
        self.children.iter().filter_map(|c| match c {
            DomChild::Element(e) => Some(e),
            DomChild::Text(_) => None,
        })
    }

    /// Direct text children joined and whitespace-normalized.
    pub fn own_text(&self) -> Option<String> {
        let raw: Vec<&str> = self
            .children
            .iter()
            .filter_map(|c| match c {
                DomChild::Text(t) => Some(t.as_str()),
                DomChild::Element(_) => None,
            })
            .collect();
        let text = normalize_whitespace(&raw.join(" "));
        (!text.is_empty()).then_some(text)
    }

    /// Number of elements in this subtree, including `self`.
    pub fn subtree_len(&self) -> usize {
        1 + self.elements().map(DomNode::subtree_len).sum::<usize>()
    }
}

impl Matchable for DomNode {
    fn tag_name(&self) -> &str {
        &self.tag
    }
    fn element_id(&self) -> Option<&str> {
        self.attr("id")
    }
    fn class_list(&self) -> &[String] {
        &self.classes
    }
}

/// Collapses whitespace runs (including no-break spaces) to single spaces.
pub fn normalize_whitespace(s: &str) -> String {
    s.split(|c: char| c.is_whitespace() || c == '\u{a0}')
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Output of [`parse_html`].
#[derive(Debug, Clone, PartialEq)]
pub struct HtmlTree {
    /// The `<body>` element (synthesized when absent).
    pub body: DomNode,
    /// Attributes of the `<html>` element.
    pub html_attrs: Vec<(String, String)>,
    /// Contents of every `<style>` element in document order.
    pub style_sheets: Vec<String>,
    pub title: Option<String>,
    pub notes: Vec<String>,
}

const VOID: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "source", "track",
    "wbr", "param", "keygen",
];

const RAW_TEXT: &[&str] = &["script", "style", "textarea", "title", "xmp", "noscript"];

const HEAD_ONLY: &[&str] = &["title", "meta", "link", "base", "style", "script"];

/// Elements whose end tag may be omitted without it being an error.
const OPTIONAL_END: &[&str] = &[
    "p", "li", "dt", "dd", "tr", "td", "th", "thead", "tbody", "tfoot", "option", "optgroup",
    "colgroup", "caption", "rb", "rt", "rp", "body", "html", "head",
];

/// Start tags that close an open `<p>`.
const CLOSES_P: &[&str] = &[
    "address", "article", "aside", "blockquote", "center", "details", "dialog", "dir", "div", "dl",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "hgroup", "hr", "main", "menu", "nav", "ol", "p", "pre", "section", "summary",
    "table", "ul", "li", "dd", "dt", "search", "listing", "xmp",
];

/// Foreign-content leaves that are routinely written as `<path/>`.
const SVG_LEAVES: &[&str] = &[
    "path", "circle", "rect", "line", "polyline", "polygon", "ellipse", "use", "stop",
];

const HEADINGS: &[&str] = &["h1", "h2", "h3", "h4", "h5", "h6"];

/// Elements that stop the search for an open `<li>`/`<dd>`/`<dt>`.
const LIST_ITEM_BARRIERS: &[&str] = &[
    "applet", "area", "article", "aside", "base", "blockquote", "body", "button", "caption",
    "center", "col", "colgroup", "dir", "dl", "embed", "fieldset", "figcaption", "figure",
    "footer", "form", "header", "hgroup", "html", "iframe", "img", "input", "main", "marquee",
    "menu", "nav", "object", "ol", "pre", "section", "select", "table", "tbody", "td", "template",
    "textarea", "tfoot", "th", "thead", "tr", "ul",
];

/// Elements that stop the search for an open `<p>` ("button scope").
const P_SCOPE_BARRIERS: &[&str] = &[
    "applet", "caption", "html", "table", "td", "th", "marquee", "object", "template", "button",
];

const ENTITIES: &[(&str, &str)] = &[
    ("amp", "&"),
    ("lt", "<"),
    ("gt", ">"),
    ("quot", "\""),
    ("apos", "'"),
    ("nbsp", "\u{a0}"),
    ("copy", "©"),
    ("reg", "®"),
    ("trade", "™"),
    ("mdash", "—"),
    ("ndash", "–"),
    ("hellip", "…"),
    ("laquo", "«"),
    ("raquo", "»"),
    ("lsquo", "‘"),
    ("rsquo", "’"),
    ("ldquo", "“"),
    ("rdquo", "”"),
    ("bull", "•"),
    ("middot", "·"),
    ("times", "×"),
    ("deg", "°"),
    ("euro", "€"),
    ("pound", "£"),
];

pub fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('&') {
        out.push_str(&rest[..pos]);
        rest = &rest[pos..];
        let end = rest[1..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '#'))
            .map(|e| e + 1)
            .unwrap_or(rest.len());
        let name = &rest[1..end];
        let decoded = if let Some(num) = name.strip_prefix('#') {
            let code = match num.strip_prefix(['x', 'X']) {
                Some(hex) => u32::from_str_radix(hex, 16).ok(),
                None => num.parse().ok(),
            };
            code.and_then(char::from_u32).map(String::from)
        } else {
            ENTITIES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| v.to_string())
        };
        match decoded {
            Some(text) => {
                out.push_str(&text);
                rest = &rest[end..];
                if rest.starts_with(';') {
                    rest = &rest[1..];
                }
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

#[derive(Debug)]
enum Token {
    Start {
        tag: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    End(String),
    Text(String),
    /// Contents of a raw-text element (`<style>`, `<script>`, ...).
    Raw(String),
}

fn tokenize(src: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut i = 0;
    let bytes = src.as_bytes();
    let mut text_start = 0;
    let flush = |tokens: &mut Vec<Token>, from: usize, to: usize| {
        if to > from {
            tokens.push(Token::Text(decode_entities(&src[from..to])));
        }
    };
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let rest = &src[i..];
        if rest.starts_with("<!--") {
            flush(&mut tokens, text_start, i);
            i = match rest[4..].find("-->") {
                Some(e) => i + 4 + e + 3,
                None => bytes.len(),
            };
            text_start = i;
            continue;
        }
        if rest.starts_with("<!") || rest.starts_with("<?") {
            flush(&mut tokens, text_start, i);
            i = match rest.find('>') {
                Some(e) => i + e + 1,
                None => bytes.len(),
            };
            text_start = i;
            continue;
        }
        let is_end = rest.starts_with("</");
        let name_start = i + if is_end { 2 } else { 1 };
        if name_start >= bytes.len() || !bytes[name_start].is_ascii_alphabetic() {
            i += 1;
            continue;
        }
        flush(&mut tokens, text_start, i);
        let mut j = name_start;
        while j < bytes.len() && !bytes[j].is_ascii_whitespace() && bytes[j] != b'>' && bytes[j] != b'/' {
            j += 1;
        }
        let tag = src[name_start..j].to_ascii_lowercase();
        // Attributes.
        let mut attrs: Vec<(String, String)> = Vec::new();
        let mut self_closing = false;
        loop {
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if j >= bytes.len() {
                break;
            }
            if bytes[j] == b'>' {
                j += 1;
                break;
            }
            if bytes[j] == b'/' {
                self_closing = true;
                j += 1;
                continue;
            }
            self_closing = false;
            let an_start = j;
            while j < bytes.len()
                && !bytes[j].is_ascii_whitespace()
                && !matches!(bytes[j], b'=' | b'>')
                && !(bytes[j] == b'/' && j > an_start)
            {
                j += 1;
            }
            let name = src[an_start..j].to_ascii_lowercase();
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            let mut value = String::new();
            if j < bytes.len() && bytes[j] == b'=' {
                j += 1;
                while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'"' || bytes[j] == b'\'') {
                    let q = bytes[j];
                    let vs = j + 1;
                    let ve = src[vs..].find(q as char).map(|e| vs + e).unwrap_or(bytes.len());
                    value = decode_entities(&src[vs..ve]);
                    j = (ve + 1).min(bytes.len());
                } else {
                    let vs = j;
                    while j < bytes.len() && !bytes[j].is_ascii_whitespace() && bytes[j] != b'>' {
                        j += 1;
                    }
                    value = decode_entities(&src[vs..j]);
                }
            }
            if !name.is_empty() && !attrs.iter().any(|(n, _)| *n == name) {
                attrs.push((name, value));
            }
        }
        i = j;
        text_start = i;
        if is_end {
            tokens.push(Token::End(tag));
            continue;
        }
        let raw = RAW_TEXT.contains(&tag.as_str()) && !self_closing;
        tokens.push(Token::Start {
            tag: tag.clone(),
            attrs,
            self_closing,
        });
        if raw {
            let close = format!("</{tag}");
            let lower = src[i..].to_ascii_lowercase();
            let end = lower.find(&close).map(|e| i + e).unwrap_or(bytes.len());
            let content = &src[i..end];
            if !content.is_empty() {
                tokens.push(Token::Raw(if tag == "title" || tag == "textarea" {
                    decode_entities(content)
                } else {
                    content.to_string()
                }));
            }
            tokens.push(Token::End(tag));
            i = match src[end..].find('>') {
                Some(e) => end + e + 1,
                None => bytes.len(),
            };
            text_start = i;
        }
    }
    flush(&mut tokens, text_start, bytes.len());
    tokens
}

struct Builder {
    /// Open elements; index 0 is `<body>`.
    stack: Vec<DomNode>,
    in_head: bool,
    head_depth: Option<String>,
    style_sheets: Vec<String>,
    title: Option<String>,
    html_attrs: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Builder {
    fn current(&self) -> &str {
        &self.stack.last().expect("body stays open").tag
    }

    /// Pops the current element into its parent.
    fn pop(&mut self) {
        if self.stack.len() <= 1 {
            return;
        }
        let node = self.stack.pop().expect("non-empty");
        self.stack
            .last_mut()
            .expect("body")
            .children
            .push(DomChild::Element(node));
    }

    /// Pops every element from the top of the stack down to `pos` inclusive.
    fn close_through(&mut self, pos: usize) {
        while self.stack.len() > pos + 1 {
            let tag = self.current().to_string();
            if !OPTIONAL_END.contains(&tag.as_str()) {
                self.notes.push(format!("unclosed <{tag}> closed implicitly"));
            }
            self.pop();
        }
        self.pop();
    }

    fn find_open(&self, tag: &str, barriers: &[&str]) -> Option<usize> {
        for (i, node) in self.stack.iter().enumerate().skip(1).rev() {
            if node.tag == tag {
                return Some(i);
            }
            if barriers.contains(&node.tag.as_str()) {
                return None;
            }
        }
        None
    }

    fn close_p_if_open(&mut self) {
        if let Some(pos) = self.find_open("p", P_SCOPE_BARRIERS) {
            self.close_through(pos);
        }
    }

    fn start(&mut self, tag: String, attrs: Vec<(String, String)>, self_closing: bool) {
        match tag.as_str() {
            "html" => {
                if self.html_attrs.is_empty() {
                    self.html_attrs = attrs;
                }
                return;
            }
            "head" => {
                self.in_head = true;
                return;
            }
            "body" => {
                self.in_head = false;
                let body = &mut self.stack[0];
                if body.attrs.is_empty() {
                    *body = DomNode {
                        children: std::mem::take(&mut body.children),
                        ..DomNode::new("body", attrs)
                    };
                }
                return;
            }
            _ => {}
        }
        if self.in_head {
            if HEAD_ONLY.contains(&tag.as_str()) {
                if RAW_TEXT.contains(&tag.as_str()) && !self_closing {
                    self.head_depth = Some(tag);
                }
                return;
            }
            self.in_head = false;
        }
        if CLOSES_P.contains(&tag.as_str()) {
            self.close_p_if_open();
        }
        match tag.as_str() {
            "li" => {
                if let Some(pos) = self.find_open("li", LIST_ITEM_BARRIERS) {
                    self.close_through(pos);
                }
            }
            "dd" | "dt" => {
                let dd = self.find_open("dd", LIST_ITEM_BARRIERS);
                let dt = self.find_open("dt", LIST_ITEM_BARRIERS);
                if let Some(pos) = dd.max(dt) {
                    self.close_through(pos);
                }
            }
            "h1" | "h2" | "h3" | "h4" | "h5" | "h6" if HEADINGS.contains(&self.current()) => {
                let cur = self.current().to_string();
                self.notes.push(format!("<{tag}> inside <{cur}>: closed <{cur}>"));
                self.pop();
            }
            "option" if self.current() == "option" => self.pop(),
            "tr" => {
                if let Some(pos) = self.find_open("tr", &["table"]) {
                    self.close_through(pos);
                }
                if self.current() == "table" {
                    self.stack.push(DomNode::new("tbody", Vec::new()));
                }
            }
            "td" | "th" => {
                let td = self.find_open("td", &["tr", "table"]);
                let th = self.find_open("th", &["tr", "table"]);
                if let Some(pos) = td.max(th) {
                    self.close_through(pos);
                }
                if self.current() == "table" {
                    self.stack.push(DomNode::new("tbody", Vec::new()));
                }
                if matches!(self.current(), "tbody" | "thead" | "tfoot") {
                    self.stack.push(DomNode::new("tr", Vec::new()));
                }
            }
            "thead" | "tbody" | "tfoot" => {
                for t in ["thead", "tbody", "tfoot"] {
                    if let Some(pos) = self.find_open(t, &["table"]) {
                        self.close_through(pos);
                    }
                }
            }
            "a" => {
                if let Some(pos) = self.find_open("a", &[]) {
                    self.notes.push("nested <a> closed the outer link".into());
                    self.close_through(pos);
                }
            }
            _ => {}
        }
        let node = DomNode::new(&tag, attrs);
        if VOID.contains(&tag.as_str()) {
            self.stack.last_mut().expect("body").children.push(DomChild::Element(node));
            return;
        }
        if self_closing && SVG_LEAVES.contains(&tag.as_str()) {
            self.stack.last_mut().expect("body").children.push(DomChild::Element(node));
            return;
        }
        self.stack.push(node);
    }

    fn end(&mut self, tag: String) {
        if let Some(open) = &self.head_depth {
            if *open == tag {
                self.head_depth = None;
                return;
            }
        }
        match tag.as_str() {
            "html" | "body" => return,
            "head" => {
                self.in_head = false;
                return;
            }
            "br" => {
                self.start("br".into(), Vec::new(), false);
                return;
            }
            _ => {}
        }
        let barriers: &[&str] = if tag == "p" { P_SCOPE_BARRIERS } else { &[] };
        match self.find_open(&tag, barriers) {
            Some(pos) => self.close_through(pos),
            None => self.notes.push(format!("stray </{tag}> ignored")),
        }
    }

    fn text(&mut self, text: String) {
        if self.in_head {
            if text.trim().is_empty() {
                return;
            }
            self.in_head = false;
        }
        let children = &mut self.stack.last_mut().expect("body").children;
        if let Some(DomChild::Text(prev)) = children.last_mut() {
            prev.push_str(&text);
        } else {
            children.push(DomChild::Text(text));
        }
    }

    fn raw(&mut self, content: String) {
        let tag = self
            .head_depth
            .clone()
            .unwrap_or_else(|| self.current().to_string());
        match tag.as_str() {
            "style" => self.style_sheets.push(content.clone()),
            "title" => {
                if self.title.is_none() {
                    self.title = Some(normalize_whitespace(&content));
                }
            }
            _ => {}
        }
        if self.head_depth.is_none() {
            self.stack
                .last_mut()
                .expect("body")
                .children
                .push(DomChild::Text(content));
        }
    }
}

/// Parses HTML leniently. Leading content before `<body>` that belongs in
/// the head (`title`, `meta`, `link`, `style`, `script`) is kept out of the
/// body tree; its style sheets are still collected.
pub fn parse_html(src: &str) -> HtmlTree {
    let mut b = Builder {
        stack: vec![DomNode::new("body", Vec::new())],
        in_head: true,
        head_depth: None,
        style_sheets: Vec::new(),
        title: None,
        html_attrs: Vec::new(),
        notes: Vec::new(),
    };
    for token in tokenize(src) {
        match token {
            Token::Start {
                tag,
                attrs,
                self_closing,
            } => b.start(tag, attrs, self_closing),
            Token::End(tag) => b.end(tag),
            Token::Text(t) => b.text(t),
            Token::Raw(t) => b.raw(t),
        }
    }
    while b.stack.len() > 1 {
        let tag = b.current().to_string();
        if !OPTIONAL_END.contains(&tag.as_str()) {
            b.notes.push(format!("unclosed <{tag}> closed at end of input"));
        }
        b.pop();
    }
    let body = b.stack.pop().expect("body");
    HtmlTree {
        body,
        html_attrs: b.html_attrs,
        style_sheets: b.style_sheets,
        title: b.title,
        notes: b.notes,
    }
}

/// Decodes bytes as UTF-8 HTML; rejects binary input.
pub fn decode_html_bytes(bytes: &[u8]) -> Result<String> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::Parse(format!("input is not UTF-8 text: {e}")))?;
    if text.contains('\0') {
        return Err(Error::Parse("input contains NUL bytes; not a text document".into()));
    }
    Ok(text.strip_prefix('\u{feff}').unwrap_or(text).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: &DomNode) -> String {
        let kids: Vec<String> = n.elements().map(shape).collect();
        if kids.is_empty() {
            n.tag.clone()
        } else {
            format!("{}({})", n.tag, kids.join(","))
        }
    }

    #[test]
    fn basic_tree() {
        let t = parse_html("<html><head><style>p{}</style></head><body><p class='a b'>hi</p></body></html>");
        assert_eq!(shape(&t.body), "body(p)");
        assert_eq!(t.style_sheets, vec!["p{}"]);
        let p = t.body.elements().next().unwrap();
        assert_eq!(p.classes, vec!["a", "b"]);
        assert_eq!(p.own_text().as_deref(), Some("hi"));
        assert!(t.notes.is_empty());
    }

    #[test]
    fn implicit_body() {
        let t = parse_html("<title>x</title><h1>A</h1><p>b");
        assert_eq!(shape(&t.body), "body(h1,p)");
        assert_eq!(t.title.as_deref(), Some("x"));
    }

    #[test]
    fn unclosed_list_items() {
        let a = parse_html("<ul><li>one<li>two<li>three</ul>");
        let b = parse_html("<ul><li>one</li><li>two</li><li>three</li></ul>");
        assert_eq!(a.body, b.body);
        assert!(a.notes.is_empty());
    }

    #[test]
    fn paragraphs_close_on_blocks() {
        let t = parse_html("<p>one<div>two</div><p>three<p>four");
        assert_eq!(shape(&t.body), "body(p,div,p,p)");
    }

    #[test]
    fn stray_end_tags_are_noted() {
        let t = parse_html("<div>x</span></div>");
        assert_eq!(shape(&t.body), "body(div)");
        assert_eq!(t.notes, vec!["stray </span> ignored"]);
    }

    #[test]
    fn unclosed_div_noted() {
        let t = parse_html("<section><div>x</section>");
        assert_eq!(shape(&t.body), "body(section(div))");
        assert_eq!(t.notes.len(), 1);
    }

    #[test]
    fn entities_and_whitespace() {
        let t = parse_html("<p>  a &amp;  b&nbsp;&#169; &#x41;  </p>");
        let p = t.body.elements().next().unwrap();
        assert_eq!(p.own_text().as_deref(), Some("a & b © A"));
        assert_eq!(decode_entities("AT&T &bogus;"), "AT&T &bogus;");
    }

    #[test]
    fn raw_text_is_not_parsed() {
        let t = parse_html("<body><script>if (a < b) { x = '</div>' }</script><p>k</p>");
        assert_eq!(shape(&t.body), "body(script,p)");
    }

    #[test]
    fn binary_input_rejected() {
        assert!(decode_html_bytes(&[0xff, 0xfe, 0x00]).is_err());
        assert!(decode_html_bytes(b"a\0b").is_err());
        assert_eq!(decode_html_bytes(b"<p>x</p>").unwrap(), "<p>x</p>");
    }

    #[test]
    fn attribute_forms() {
        let t = parse_html(r#"<input type=text disabled value="a b"><img src='x.png'/>"#);
        let input = t.body.elements().next().unwrap();
        assert_eq!(input.attr("type"), Some("text"));
        assert_eq!(input.attr("disabled"), Some(""));
        assert_eq!(input.attr("value"), Some("a b"));
        assert_eq!(shape(&t.body), "body(input,img)");
    }

    #[test]
    fn table_sections_are_implied() {
        let t = parse_html("<table><tr><td>a<td>b</table>");
        assert_eq!(shape(&t.body), "body(table(tbody(tr(td,td))))");
    }
}
