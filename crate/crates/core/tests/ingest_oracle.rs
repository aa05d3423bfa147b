//! The lenient HTML parser and the selector matcher checked against an
//! independent HTML5 parser and selector engine.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use scraper::{ElementRef, Html};

use designlint::ingest::css::Matchable;
use designlint::ingest::{parse_document, DomNode, Origin, ParsedDocument, Selector};

fn fixture_pages() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut pages = vec![dir.join("clean.html"), dir.join("w1.html"), dir.join("w2.html")];
    for f in std::fs::read_dir(dir.join("sites")).unwrap() {
        pages.push(f.unwrap().path());
    }
    pages.sort();
    pages
}

/// Our body tree in preorder, with each element's ancestors (nearest first).
fn ours(root: &DomNode) -> Vec<(&DomNode, Vec<&DomNode>)> {
    fn walk<'a>(n: &'a DomNode, stack: &mut Vec<&'a DomNode>, out: &mut Vec<(&'a DomNode, Vec<&'a DomNode>)>) {
        out.push((n, stack.iter().rev().copied().collect()));
        stack.push(n);
        for c in n.elements() {
            walk(c, stack, out);
        }
        stack.pop();
    }
    let mut out = Vec::new();
    walk(root, &mut Vec::new(), &mut out);
    out
}

/// The oracle's `<body>` subtree in preorder.
fn theirs(doc: &Html) -> Vec<ElementRef<'_>> {
    let body = doc.select(&scraper::Selector::parse("body").unwrap()).next().expect("body");
    let mut out = vec![body];
    out.extend(body.descendants().skip(1).filter_map(ElementRef::wrap));
    out
}

fn tags_ours(root: &DomNode) -> Vec<String> {
    ours(root).iter().map(|(n, _)| n.tag.clone()).collect()
}

fn tags_theirs(doc: &Html) -> Vec<String> {
    theirs(doc).iter().map(|e| e.value().name().to_string()).collect()
}

/// Preorder positions matched by `selector`, according to each side. Like the
/// cascade, our side sees `<html>` as the outermost ancestor of every element.
fn matched(parsed: &ParsedDocument, doc: &Html, selector: &Selector) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let html = DomNode::new("html", parsed.html_attrs.clone());
    let mine = ours(&parsed.root)
        .into_iter()
        .enumerate()
        .filter(|(_, (n, anc))| {
            let mut chain = anc.clone();
            chain.push(&html);
            selector.matches(*n, &chain)
        })
        .map(|(i, _)| i)
        .collect();
    let index: HashMap<_, usize> = theirs(doc).iter().enumerate().map(|(i, e)| (e.id(), i)).collect();
    let oracle = scraper::Selector::parse(&selector.to_string()).expect("oracle parses our selector");
    let other = doc.select(&oracle).filter_map(|e| index.get(&e.id()).copied()).collect();
    (mine, other)
}

#[test]
fn fixture_pages_parse_to_the_same_element_tree() {
    for p in fixture_pages() {
        let src = std::fs::read_to_string(&p).unwrap();
        let doc = parse_document(&src);
        let oracle = Html::parse_document(&src);
        assert_eq!(tags_ours(&doc.root), tags_theirs(&oracle), "{}", p.display());
        for ((n, _), e) in ours(&doc.root).iter().zip(theirs(&oracle)) {
            assert_eq!(n.attr("id"), e.value().id(), "{}", p.display());
            let classes: Vec<&str> = e.value().classes().collect();
            let mut theirs_sorted = classes.clone();
            theirs_sorted.sort();
            let mut ours_sorted: Vec<&str> = n.class_list().iter().map(String::as_str).collect();
            ours_sorted.sort();
            ours_sorted.dedup();
            assert_eq!(ours_sorted, theirs_sorted, "{}", p.display());
        }
    }
}

#[test]
fn fixture_selectors_match_the_same_elements() {
    let mut checked = 0;
    for p in fixture_pages() {
        let src = std::fs::read_to_string(&p).unwrap();
        let doc = parse_document(&src);
        let oracle = Html::parse_document(&src);
        for rule in doc.rules.iter().filter(|r| r.origin == Origin::Stylesheet) {
            let selector = rule.selector.as_ref().expect("stylesheet rules carry a selector");
            let (mine, other) = matched(&doc, &oracle, selector);
            assert_eq!(mine, other, "{} `{selector}`", p.display());
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} selectors checked");
}

const TAGS: &[&str] = &["div", "section", "p", "span", "a", "ul", "li", "h2"];
const CLASSES: &[&str] = &["a", "b", "c"];
const IDS: &[&str] = &["x", "y"];
/// Selector vocabulary: the generated tags plus the two document wrappers.
const SELECTOR_TAGS: &[&str] = &["div", "section", "p", "span", "a", "ul", "li", "h2", "body", "html"];

#[derive(Debug, Clone)]
struct Gen {
    tag: usize,
    id: Option<usize>,
    classes: Vec<usize>,
    children: Vec<Gen>,
}

fn gen_tree() -> impl Strategy<Value = Gen> {
    let leaf = (0..TAGS.len(), proptest::option::weighted(0.2, 0..IDS.len()), proptest::collection::vec(0..CLASSES.len(), 0..3))
        .prop_map(|(tag, id, classes)| Gen { tag, id, classes, children: vec![] });
    leaf.prop_recursive(4, 40, 4, |inner| {
        (
            0..TAGS.len(),
            proptest::option::weighted(0.2, 0..IDS.len()),
            proptest::collection::vec(0..CLASSES.len(), 0..3),
            proptest::collection::vec(inner, 0..4),
        )
            .prop_map(|(tag, id, classes, children)| Gen { tag, id, classes, children })
    })
}

/// Serializes with explicit end tags. Block content inside `p`, `a` or `span`
/// would be re-parented by an HTML5 parser, so it is rendered as `div`.
fn render(g: &Gen, inline_parent: bool, out: &mut String) {
    let mut tag = TAGS[g.tag];
    if inline_parent && !matches!(tag, "span" | "a") {
        tag = "span";
    }
    if tag == "li" {
        tag = "div";
    }
    out.push('<');
    out.push_str(tag);
    if let Some(i) = g.id {
        out.push_str(&format!(" id=\"{}\"", IDS[i]));
    }
    if !g.classes.is_empty() {
        let names: Vec<&str> = g.classes.iter().map(|&c| CLASSES[c]).collect();
        out.push_str(&format!(" class=\"{}\"", names.join(" ")));
    }
    out.push('>');
    let inline = inline_parent || matches!(tag, "p" | "span" | "a" | "h2");
    for c in &g.children {
        if tag == "ul" {
            out.push_str("<li>");
            render(c, false, out);
            out.push_str("</li>");
        } else if tag == "a" && TAGS[c.tag] == "a" {
            let mut c = c.clone();
            c.tag = TAGS.iter().position(|t| *t == "span").unwrap();
            render(&c, true, out);
        } else {
            render(c, inline, out);
        }
    }
    out.push_str("</");
    out.push_str(tag);
    out.push('>');
}

fn gen_compound() -> impl Strategy<Value = String> {
    (
        proptest::option::of(0..SELECTOR_TAGS.len()),
        proptest::option::weighted(0.2, 0..IDS.len()),
        proptest::collection::vec(0..CLASSES.len(), 0..2),
    )
        .prop_map(|(tag, id, classes)| {
            let mut s = tag.map(|t| SELECTOR_TAGS[t].to_string()).unwrap_or_default();
            if let Some(i) = id {
                s.push('#');
                s.push_str(IDS[i]);
            }
            for c in classes {
                s.push('.');
                s.push_str(CLASSES[c]);
            }
            if s.is_empty() {
                s.push('*');
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_pages_agree_with_the_oracle(
        tree in gen_tree(),
        selectors in proptest::collection::vec(proptest::collection::vec(gen_compound(), 1..4), 1..8),
    ) {
        let mut html = String::from("<!DOCTYPE html><html><head><title>t</title></head><body>");
        render(&tree, false, &mut html);
        html.push_str("</body></html>");
        let doc = parse_document(&html);
        let oracle = Html::parse_document(&html);
        prop_assert_eq!(tags_ours(&doc.root), tags_theirs(&oracle));
        for parts in selectors {
            let text = parts.join(" ");
            let selector = Selector::parse(&text).unwrap();
            let (mine, other) = matched(&doc, &oracle, &selector);
            prop_assert_eq!(mine, other, "`{}` on {}", text, html);
        }
    }
}
