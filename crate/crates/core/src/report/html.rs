//! Screen-reader friendly HTML rendering of a report.
//!
//! One `h1`, an `h2` per category (or per element group), an `h3` per entry;
//! passing entries sit in collapsed `details`; no scripts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{AuditReport, Category, Finding, Outcome};
use crate::compare::Comparisons;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HtmlOptions {
    /// Section by element group instead of by category.
    pub group_by_element: bool,
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect()
}

fn entry(out: &mut String, f: &Finding, heading: &str) {
    let kind = match f.outcome() {
        Outcome::Issue => "Issue",
        Outcome::Pass => "Pass",
        Outcome::Skipped => "Skipped",
    };
    let _ = writeln!(out, "<article>\n<h3>{kind}: {}</h3>", esc(heading));
    let _ = writeln!(out, "<p>{}</p>", esc(&f.explanation));
    if let Some(sample) = &f.sample_text {
        let _ = writeln!(out, "<p>Sample text: <q>{}</q></p>", esc(sample));
    }
    if !f.member_ids.is_empty() {
        let _ = writeln!(
            out,
            "<p>Elements ({}): {}</p>",
            f.member_ids.len(),
            esc(&f.member_ids.join(", "))
        );
    }
    if !f.suggestions.is_empty() {
        out.push_str("<p>Suggested changes:</p>\n<ul>\n");
        for s in &f.suggestions {
            let alt = if s.alternative > 0 { "Alternative: " } else { "" };
            let _ = writeln!(
                out,
                "<li>{alt}<code>{} {{ {}: {}; }}</code> {}</li>",
                esc(&s.selector),
                esc(&s.property),
                esc(&s.value),
                esc(&s.rationale)
            );
        }
        out.push_str("</ul>\n");
    }
    for n in &f.notes {
        let _ = writeln!(out, "<p>Note: {}</p>", esc(n));
    }
    out.push_str("</article>\n");
}

/// Issues first, passes collapsed, skipped checks in a labelled region.
fn entries(out: &mut String, findings: &[&Finding], heading: &dyn Fn(&Finding) -> String, label: &str) {
    let by = |o: Outcome| findings.iter().copied().filter(move |f| f.outcome() == o);
    let issues: Vec<_> = by(Outcome::Issue).collect();
    let passes: Vec<_> = by(Outcome::Pass).collect();
    let skipped: Vec<_> = by(Outcome::Skipped).collect();
    if issues.is_empty() {
        out.push_str("<p>No issues.</p>\n");
    }
    for f in issues {
        entry(out, f, &heading(f));
    }
    if !passes.is_empty() {
        let _ = writeln!(
            out,
            "<details>\n<summary>{} passing {}</summary>",
            passes.len(),
            if passes.len() == 1 { "entry" } else { "entries" }
        );
        for f in passes {
            entry(out, f, &heading(f));
        }
        out.push_str("</details>\n");
    }
    if !skipped.is_empty() {
        let _ = writeln!(out, "<section aria-label=\"Skipped checks: {}\">", esc(label));
        for f in skipped {
            entry(out, f, &heading(f));
        }
        out.push_str("</section>\n");
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{}", (v * 100.0).round() / 100.0))
        .unwrap_or_else(|| "n/a".to_string())
}

fn comparison(out: &mut String, c: &Comparisons) {
    out.push_str("<section aria-labelledby=\"comparison\">\n<h2 id=\"comparison\">Comparison</h2>\n");
    out.push_str("<table>\n<caption>Guidelines</caption>\n<tr><th scope=\"col\">Metric</th><th scope=\"col\">Guideline</th><th scope=\"col\">This page</th><th scope=\"col\">Meets</th></tr>\n");
    for g in &c.guideline {
        let meets = match g.meets {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        };
        let _ = writeln!(
            out,
            "<tr><th scope=\"row\">{}</th><td>{}</td><td>{}</td><td>{meets}</td></tr>",
            esc(&g.metric),
            esc(&g.guideline),
            opt(g.value)
        );
    }
    out.push_str("</table>\n");
    if let Some(r) = &c.reference {
        let _ = writeln!(
            out,
            "<table>\n<caption>Reference: {}</caption>\n<tr><th scope=\"col\">Metric</th><th scope=\"col\">This page</th><th scope=\"col\">Reference</th></tr>",
            esc(&r.reference.source_id)
        );
        for d in &r.deltas {
            let _ = writeln!(
                out,
                "<tr><th scope=\"row\">{}</th><td>{}</td><td>{}</td></tr>",
                esc(&d.metric),
                opt(d.mine),
                opt(d.reference)
            );
        }
        out.push_str("</table>\n");
        for n in &r.notes {
            let _ = writeln!(out, "<p>{}</p>", esc(n));
        }
    }
    if let Some(t) = &c.trend {
        let _ = writeln!(
            out,
            "<table>\n<caption>Trends: {} ({} sites)</caption>\n<tr><th scope=\"col\">Metric</th><th scope=\"col\">This page</th><th scope=\"col\">Most common</th><th scope=\"col\">Typical range</th></tr>",
            t.category, t.n_sites
        );
        for r in &t.rows {
            let _ = writeln!(
                out,
                "<tr><th scope=\"row\">{}</th><td>{}</td><td>{}</td><td>{} to {}</td></tr>",
                esc(&r.metric),
                opt(r.mine),
                opt(Some(r.modal)),
                opt(Some(r.range.0)),
                opt(Some(r.range.1))
            );
        }
        out.push_str("</table>\n");
        let ranked = |v: &[crate::compare::Ranked]| {
            v.iter()
                .map(|r| format!("{} ({} sites)", esc(&r.name), r.sites))
                .collect::<Vec<_>>()
                .join(", ")
        };
        if !t.top_families.is_empty() {
            let _ = writeln!(out, "<p>Popular body fonts: {}</p>", ranked(&t.top_families));
        }
        if !t.top_colors.is_empty() {
            let _ = writeln!(out, "<p>Popular colors: {}</p>", ranked(&t.top_colors));
        }
    }
    out.push_str("</section>\n");
}

pub fn render_accessible_html(report: &AuditReport, options: &HtmlOptions) -> String {
    let source = &report.run_meta.source_id;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Design audit: {}</title>\n</head>\n<body>\n<main>\n<h1>Design audit: {}</h1>",
        esc(source),
        esc(source)
    );
    let fam = report.family_counts();
    let _ = writeln!(
        out,
        "<p>{} issues: {} text, {} layout, {} color.</p>",
        report.issue_count(),
        fam.values().next().copied().unwrap_or(0),
        fam.values().nth(1).copied().unwrap_or(0),
        fam.values().nth(2).copied().unwrap_or(0)
    );
    if let Some(s) = &report.font_summary {
        let _ = writeln!(out, "<p>Fonts: {}</p>", esc(s));
    }
    if let Some(s) = &report.color_scheme {
        let _ = writeln!(out, "<p>Colors: {}</p>", esc(&s.summary));
    }

    let all: Vec<&Finding> = report.findings().collect();
    if options.group_by_element {
        let mut groups: BTreeMap<&str, Vec<&Finding>> = BTreeMap::new();
        let mut order: Vec<&str> = Vec::new();
        for f in &all {
            if !groups.contains_key(f.group_key.as_str()) {
                order.push(&f.group_key);
            }
            groups.entry(&f.group_key).or_default().push(f);
        }
        for key in order {
            let mut fs = groups.remove(key).unwrap_or_default();
            fs.sort_by_key(|f| f.category);
            let id = format!("group-{}", slug(key));
            let _ = writeln!(out, "<section aria-labelledby=\"{id}\">\n<h2 id=\"{id}\">{}</h2>", esc(key));
            entries(&mut out, &fs, &|f| f.category.title().to_string(), key);
            out.push_str("</section>\n");
        }
    } else {
        for cat in Category::ALL {
            let fs: Vec<&Finding> = all.iter().copied().filter(|f| f.category == cat).collect();
            let id = format!("cat-{}", cat.as_str());
            let _ = writeln!(
                out,
                "<section aria-labelledby=\"{id}\">\n<h2 id=\"{id}\">{}</h2>",
                cat.title()
            );
            let _ = writeln!(out, "<p>Guideline: {}</p>", esc(&super::guidelines::guideline(cat).rule));
            entries(&mut out, &fs, &|f| f.group_key.clone(), cat.title());
            out.push_str("</section>\n");
        }
    }
    if let Some(c) = &report.comparison {
        comparison(&mut out, c);
    }
    if !report.notes.is_empty() {
        out.push_str("<section aria-labelledby=\"notes\">\n<h2 id=\"notes\">Notes</h2>\n<ul>\n");
        for n in &report.notes {
            let _ = writeln!(out, "<li>{}</li>", esc(n));
        }
        out.push_str("</ul>\n</section>\n");
    }
    out.push_str("</main>\n</body>\n</html>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping() {
        assert_eq!(esc("<a href=\"x\">&</a>"), "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;");
    }
}
