//! Matching OCR text lines to HTML text elements.
//!
//! OCR lines arrive with normalized quad vertices. They are scaled onto the
//! page canvas, then paired with text elements by a score mixing box
//! proximity and a length-tolerant edit-distance similarity. The pairing
//! recovers how each element wrapped on the rendered page:
//!
//! * one-to-one: an element occupying a single line on its own,
//! * one-to-many: a paragraph wrapped over several lines,
//! * many-to-one: several inline elements sharing one line.
//!
//! Similarity is `1 - d / n` where `d` is the edit distance from the shorter
//! text to its best-matching substring of the longer text and `n` is the
//! shorter text's length, so a single line of a long paragraph (or one link of
//! a navigation row) scores as high as an exact match.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{visible_elements, BoundingBox, ElementNode, PageSnapshot};

/// Beyond this gap (px) two boxes get no proximity credit.
pub const PROXIMITY_LIMIT_PX: f64 = 50.0;
pub const PROXIMITY_WEIGHT: f64 = 0.5;
pub const SIMILARITY_WEIGHT: f64 = 0.5;
/// Pairs scoring below this never enter the assignment.
pub const MIN_PAIR_SCORE: f64 = 0.75;

/// One OCR text line, vertices normalized to [0,1] against the OCR image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OcrLine {
    pub text: String,
    pub vertices: [[f64; 2]; 4],
    pub page_width: u32,
    pub page_height: u32,
}

impl OcrLine {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.text.trim().is_empty() {
            return Err("empty text".into());
        }
        if self.page_width == 0 || self.page_height == 0 {
            return Err("page dimensions must be > 0".into());
        }
        if self
            .vertices
            .iter()
            .flatten()
            .any(|v| !(0.0..=1.0).contains(v))
        {
            return Err("vertex outside [0,1]".into());
        }
        if quad_area(&self.vertices) <= 0.0 {
            return Err("degenerate quad".into());
        }
        Ok(())
    }
}

fn quad_area(v: &[[f64; 2]; 4]) -> f64 {
    let mut twice = 0.0;
    for i in 0..4 {
        let [x0, y0] = v[i];
        let [x1, y1] = v[(i + 1) % 4];
        twice += x0 * y1 - x1 * y0;
    }
    (twice / 2.0).abs()
}

/// An OCR line mapped to page pixels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledLine {
    pub index: usize,
    pub text: String,
    pub bbox: BoundingBox,
}

/// Maps normalized OCR vertices onto a canvas of `canvas_w` x `canvas_h` px.
pub fn scale_ocr_lines(lines: &[OcrLine], canvas_w: f64, canvas_h: f64) -> Result<Vec<ScaledLine>> {
    lines
        .iter()
        .enumerate()
        .map(|(index, line)| {
            if quad_area(&line.vertices) <= 0.0 {
                return Err(Error::DegenerateQuad(line.text.clone()));
            }
            let sx = canvas_w / line.page_width as f64;
            let sy = canvas_h / line.page_height as f64;
            let px: Vec<(f64, f64)> = line
                .vertices
                .iter()
                .map(|[x, y]| {
                    (
                        x * line.page_width as f64 * sx,
                        y * line.page_height as f64 * sy,
                    )
                })
                .collect();
            let min_x = px.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let max_x = px.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            let min_y = px.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let max_y = px.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            Ok(ScaledLine {
                index,
                text: line.text.clone(),
                bbox: BoundingBox::new(min_x, min_y, max_x - min_x, max_y - min_y),
            })
        })
        .collect()
}

/// Whitespace-collapsed, lowercased text.
pub fn normalize_text(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Edit distance from `pattern` to the closest substring of `text`.
pub fn substring_edit_distance(pattern: &str, text: &str) -> usize {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    // Row 0 is all zeros: a match may start anywhere in `text`.
    let mut prev = vec![0usize; t.len() + 1];
    let mut cur = vec![0usize; t.len() + 1];
    for i in 1..=p.len() {
        cur[0] = i;
        for j in 1..=t.len() {
            let sub = prev[j - 1] + usize::from(p[i - 1] != t[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev.into_iter().min().unwrap_or(0)
}

/// Length-tolerant similarity in [0,1]; symmetric in its arguments.
pub fn text_similarity(a: &str, b: &str) -> f64 {
    let a = normalize_text(a);
    let b = normalize_text(b);
    let (la, lb) = (a.chars().count(), b.chars().count());
    if la == 0 || lb == 0 {
        return 0.0;
    }
    let (dist, norm) = match la.cmp(&lb) {
        std::cmp::Ordering::Less => (substring_edit_distance(&a, &b), la),
        std::cmp::Ordering::Greater => (substring_edit_distance(&b, &a), lb),
        std::cmp::Ordering::Equal => (
            substring_edit_distance(&a, &b).min(substring_edit_distance(&b, &a)),
            la,
        ),
    };
    (1.0 - dist as f64 / norm as f64).clamp(0.0, 1.0)
}

/// Proximity term: overlap normalized by the smaller box, else a linear decay
/// that reaches zero at [`PROXIMITY_LIMIT_PX`].
pub fn proximity(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter > 0.0 {
        let smaller = a.area().min(b.area());
        return if smaller > 0.0 { (inter / smaller).min(1.0) } else { 0.0 };
    }
    let d = a.distance(b);
    if d >= PROXIMITY_LIMIT_PX {
        0.0
    } else {
        0.5 * (1.0 - d / PROXIMITY_LIMIT_PX)
    }
}

/// Score of pairing an element (box + text) with a scaled OCR line.
pub fn match_score(element_box: &BoundingBox, element_text: &str, line: &ScaledLine) -> f64 {
    PROXIMITY_WEIGHT * proximity(element_box, &line.bbox)
        + SIMILARITY_WEIGHT * text_similarity(element_text, &line.text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchKind {
    OneToOne,
    OneToMany,
    ManyToOne,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineMatch {
    pub kind: MatchKind,
    pub element_ids: Vec<String>,
    pub line_indices: Vec<usize>,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MatchSet {
    pub matches: Vec<LineMatch>,
    pub lines: Vec<ScaledLine>,
    pub unmatched_lines: Vec<usize>,
    pub unmatched_elements: Vec<String>,
}

impl MatchSet {
    /// Lines matched to `element_id`, top to bottom.
    pub fn lines_for(&self, element_id: &str) -> Vec<&ScaledLine> {
        let mut out: Vec<&ScaledLine> = self
            .matches
            .iter()
            .filter(|m| m.element_ids.iter().any(|e| e == element_id))
            .flat_map(|m| m.line_indices.iter().map(|&i| &self.lines[i]))
            .collect();
        out.sort_by(|a, b| a.bbox.y.total_cmp(&b.bbox.y).then(a.bbox.x.total_cmp(&b.bbox.x)));
        out
    }

    pub fn match_for(&self, element_id: &str) -> Option<&LineMatch> {
        self.matches
            .iter()
            .find(|m| m.element_ids.iter().any(|e| e == element_id))
    }
}

fn char_len(s: &str) -> usize {
    normalize_text(s).chars().count()
}

/// Height of the laid-out page: the lowest box edge, never less than the
/// viewport (OCR screenshots are full-page).
pub fn page_height(snapshot: &PageSnapshot) -> f64 {
    let mut bottom = snapshot.viewport.height as f64;
    let mut stack = vec![&snapshot.root];
    while let Some(n) = stack.pop() {
        if let Some(b) = n.bbox {
            bottom = bottom.max(b.y + b.height);
        }
        stack.extend(n.children.iter());
    }
    bottom
}

/// Greedy score-ordered assignment of OCR lines to text elements.
///
/// Each accepted pair must keep every connected component a star: one element
/// with several lines, or one line with several elements. Components whose
/// accumulated text would clearly overflow the other side are refused.
pub fn match_elements_to_lines(snapshot: &PageSnapshot) -> Result<MatchSet> {
    let Some(ocr) = &snapshot.ocr_lines else {
        return Ok(MatchSet::default());
    };
    let lines = scale_ocr_lines(ocr, snapshot.viewport.width as f64, page_height(snapshot))?;
    let elements: Vec<(&ElementNode, BoundingBox, &str)> = visible_elements(snapshot)
        .into_iter()
        .filter_map(|n| {
            let text = n.text.as_deref().filter(|t| !t.trim().is_empty())?;
            Some((n, n.bbox?, text))
        })
        .collect();
    Ok(assign(&elements, lines))
}

fn assign(elements: &[(&ElementNode, BoundingBox, &str)], lines: Vec<ScaledLine>) -> MatchSet {
    let mut pairs = Vec::new();
    for (ei, (_, bbox, text)) in elements.iter().enumerate() {
        for (li, line) in lines.iter().enumerate() {
            let prox = proximity(bbox, &line.bbox);
            if prox <= 0.0 {
                continue;
            }
            let score = PROXIMITY_WEIGHT * prox + SIMILARITY_WEIGHT * text_similarity(text, &line.text);
            if score >= MIN_PAIR_SCORE {
                pairs.push((score, ei, li));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let elem_len: Vec<usize> = elements.iter().map(|e| char_len(e.2)).collect();
    let line_len: Vec<usize> = lines.iter().map(|l| char_len(&l.text)).collect();
    let budget = |n: usize| n as f64 * 1.15 + 2.0;

    let mut elem_lines: Vec<Vec<usize>> = vec![Vec::new(); elements.len()];
    let mut line_elems: Vec<Vec<usize>> = vec![Vec::new(); lines.len()];
    let mut pair_score = std::collections::HashMap::new();

    for &(score, e, l) in &pairs {
        let accept = match (elem_lines[e].is_empty(), line_elems[l].is_empty()) {
            (true, true) => true,
            (false, true) => {
                let star = elem_lines[e].iter().all(|&x| line_elems[x] == [e]);
                let used: usize = elem_lines[e].iter().map(|&x| line_len[x]).sum();
                star && (used + line_len[l]) as f64 <= budget(elem_len[e])
            }
            (true, false) => {
                let star = line_elems[l].iter().all(|&x| elem_lines[x] == [l]);
                let used: usize = line_elems[l].iter().map(|&x| elem_len[x]).sum();
                star && (used + elem_len[e]) as f64 <= budget(line_len[l])
            }
            (false, false) => false,
        };
        if accept {
            elem_lines[e].push(l);
            line_elems[l].push(e);
            pair_score.insert((e, l), score);
        }
    }

    let mut matches = Vec::new();
    for (e, ls) in elem_lines.iter().enumerate() {
        if ls.is_empty() || line_elems[ls[0]].len() > 1 {
            continue;
        }
        let mut ls = ls.clone();
        ls.sort_by(|&a, &b| {
            lines[a].bbox.y.total_cmp(&lines[b].bbox.y).then(lines[a].bbox.x.total_cmp(&lines[b].bbox.x))
        });
        let score = ls.iter().map(|&l| pair_score[&(e, l)]).sum::<f64>() / ls.len() as f64;
        matches.push(LineMatch {
            kind: if ls.len() == 1 { MatchKind::OneToOne } else { MatchKind::OneToMany },
            element_ids: vec![elements[e].0.id.clone()],
            line_indices: ls,
            score,
        });
    }
    for (l, es) in line_elems.iter().enumerate() {
        if es.len() < 2 {
            continue;
        }
        let mut es = es.clone();
        es.sort_by(|&a, &b| elements[a].1.x.total_cmp(&elements[b].1.x).then(a.cmp(&b)));
        let score = es.iter().map(|&e| pair_score[&(e, l)]).sum::<f64>() / es.len() as f64;
        matches.push(LineMatch {
            kind: MatchKind::ManyToOne,
            element_ids: es.iter().map(|&e| elements[e].0.id.clone()).collect(),
            line_indices: vec![l],
            score,
        });
    }
    matches.sort_by_key(|m| m.line_indices[0]);

    let unmatched_lines = (0..lines.len()).filter(|&l| line_elems[l].is_empty()).collect();
    let unmatched_elements = (0..elements.len())
        .filter(|&e| elem_lines[e].is_empty())
        .map(|e| elements[e].0.id.clone())
        .collect();
    MatchSet {
        matches,
        lines,
        unmatched_lines,
        unmatched_elements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(text: &str, x0: f64, y0: f64, x1: f64, y1: f64, w: u32, h: u32) -> OcrLine {
        OcrLine {
            text: text.into(),
            vertices: [[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
            page_width: w,
            page_height: h,
        }
    }

    #[test]
    fn unit_scaling_is_identity() {
        let l = line("a", 0.1, 0.2, 0.5, 0.3, 1000, 2000);
        let s = scale_ocr_lines(&[l], 1000.0, 2000.0).unwrap();
        let b = s[0].bbox;
        assert!((b.x - 100.0).abs() < 1e-9 && (b.y - 400.0).abs() < 1e-9);
        assert!((b.width - 400.0).abs() < 1e-9 && (b.height - 200.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_doubles_on_double_canvas() {
        let l = line("a", 0.5, 0.5, 0.75, 0.75, 500, 500);
        let s = scale_ocr_lines(&[l], 1000.0, 1000.0).unwrap();
        assert_eq!((s[0].bbox.x, s[0].bbox.y), (500.0, 500.0));
        assert_eq!(s[0].bbox.width, 250.0);
    }

    #[test]
    fn zero_area_quad_is_rejected() {
        let l = line("a", 0.1, 0.2, 0.1, 0.4, 100, 100);
        assert!(matches!(
            scale_ocr_lines(&[l], 100.0, 100.0),
            Err(Error::DegenerateQuad(_))
        ));
    }

    #[test]
    fn identical_text_and_box_scores_one() {
        let b = BoundingBox::new(10.0, 10.0, 100.0, 20.0);
        let l = ScaledLine { index: 0, text: "Hello World".into(), bbox: b };
        assert!((match_score(&b, "hello   world", &l) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn far_boxes_get_no_proximity() {
        let a = BoundingBox::new(0.0, 0.0, 10.0, 10.0);
        let b = BoundingBox::new(70.0, 0.0, 10.0, 10.0);
        assert_eq!(proximity(&a, &b), 0.0);
        let c = BoundingBox::new(0.0, 60.0, 10.0, 10.0);
        assert_eq!(proximity(&a, &c), 0.0);
    }

    #[test]
    fn prefix_of_paragraph_is_similar() {
        assert!(text_similarity("alpha beta gamma delta", "alpha beta") >= 0.9);
        assert!(text_similarity("alpha beta", "alpha beta gamma delta") >= 0.9);
        assert!(text_similarity("alpha beta gamma delta", "zzzz qqqq") < 0.5);
    }

    #[test]
    fn substring_distance_basics() {
        assert_eq!(substring_edit_distance("gamma", "alpha beta gamma delta"), 0);
        assert_eq!(substring_edit_distance("gamna", "alpha beta gamma delta"), 1);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
    }
}
