//! The design guidelines each check enforces.

use serde::{Deserialize, Serialize};

use super::Category;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Guideline {
    pub id: String,
    pub category: Category,
    pub rule: String,
    /// CSS properties a suggestion for this guideline may change.
    pub properties: Vec<String>,
    /// Where the guideline comes from, when a link is configured.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

struct Row {
    id: &'static str,
    category: Category,
    rule: &'static str,
    properties: &'static [&'static str],
}

const ROWS: &[Row] = &[
    Row {
        id: "text-size",
        category: Category::FontSize,
        rule: "Body text is at least 16px; titles are at least 20px.",
        properties: &["font-size"],
    },
    Row {
        id: "text-family",
        category: Category::FontFamily,
        rule: "Body and title text use sans-serif families; decorative or narrow families are kept to headlines and decorative text.",
        properties: &["font-family"],
    },
    Row {
        id: "text-line-length",
        category: Category::LineLength,
        rule: "Body text lines hold 50 to 75 characters; short titles fit on one line.",
        properties: &["width", "max-width"],
    },
    Row {
        id: "text-line-spacing",
        category: Category::LineSpacing,
        rule: "Body text line height is at least 1.5 times the font size.",
        properties: &["line-height"],
    },
    Row {
        id: "layout-spacing",
        category: Category::Spacing,
        rule: "Containers have at least 24px of padding; neighbouring elements are at least 8px apart, adjusted through bottom and right margins.",
        properties: &[
            "padding",
            "padding-top",
            "padding-right",
            "padding-bottom",
            "padding-left",
            "margin-bottom",
            "margin-right",
        ],
    },
    Row {
        id: "layout-alignment",
        category: Category::SpatialAlignment,
        rule: "Elements that line up almost exactly (within 5px) should line up exactly.",
        properties: &["margin-left", "margin-top"],
    },
    Row {
        id: "layout-text-align",
        category: Category::TextualAlignment,
        rule: "Body paragraphs and list items are left-aligned; centering is for short texts such as headings.",
        properties: &["text-align"],
    },
    Row {
        id: "color-contrast",
        category: Category::ColorContrast,
        rule: "Text and its background reach an APCA contrast of at least Lc 74.7.",
        properties: &["color", "background-color"],
    },
    Row {
        id: "color-harmony",
        category: Category::ColorHarmony,
        rule: "Colors follow a consistent palette; highly saturated backgrounds and large numbers of unrelated colors are avoided.",
        properties: &["color", "background-color", "border-color"],
    },
];

pub fn guideline(category: Category) -> Guideline {
    let row = ROWS
        .iter()
        .find(|r| r.category == category)
        .expect("every category has a guideline");
    Guideline {
        id: row.id.to_string(),
        category,
        rule: row.rule.to_string(),
        properties: row.properties.iter().map(|p| p.to_string()).collect(),
        source: None,
    }
}

pub fn all() -> Vec<Guideline> {
    Category::ALL.iter().map(|c| guideline(*c)).collect()
}
