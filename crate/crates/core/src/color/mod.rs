//! Color primitives: contrast, compositing, naming, extraction, palettes.

pub mod apca;
mod names_table;
pub mod palette;
pub mod quantize;
pub mod space;

use serde::{Deserialize, Serialize};

use crate::descriptor::{Descriptor, DescriptorRequest, DescriptorResponse};
use crate::error::DescriptorError;
use crate::model::{NodeIndex, RgbaColor};

pub use apca::{apca_lc, MIN_LC};
pub use names_table::CSS_NAMED_COLORS;
pub use palette::{generate_palette, ColorPalette, PaletteRole};
pub use quantize::{dominant_colors, Raster};
pub use space::{chroma, to_lab, to_lch, Lab, Lch};

/// Colors with CIELCh chroma below this read as grey.
pub const ACHROMATIC_CHROMA: f64 = 8.0;

/// Seed used when neither the screenshot nor the CSS offers a chromatic color.
pub const DEFAULT_SEED: RgbaColor = RgbaColor::rgb(0x67, 0x50, 0xa4);

pub fn is_achromatic(c: RgbaColor) -> bool {
    chroma(c) < ACHROMATIC_CHROMA
}

/// Background an element's content is painted on: its own and its ancestors'
/// backgrounds composited from the root down over a white page.
pub fn effective_background(element_id: &str, index: &NodeIndex<'_>) -> RgbaColor {
    let Some(node) = index.get(element_id) else {
        return RgbaColor::WHITE;
    };
    let mut chain = index.ancestors(element_id);
    chain.reverse();
    chain.push(node);
    chain
        .iter()
        .map(|n| n.style.background_color)
        .filter(|c| c.a > 0.0)
        .fold(RgbaColor::WHITE, |acc, bg| bg.over(acc))
}

/// Nearest CSS named color by CIELAB distance; ties go to the earlier name.
pub fn nearest_named_color(c: RgbaColor) -> &'static str {
    let target = to_lab(c.opaque());
    let mut best = ("", f64::INFINITY);
    for &(name, r, g, b) in CSS_NAMED_COLORS {
        let d = to_lab(RgbaColor::rgb(r, g, b)).distance(&target);
        if d < best.1 {
            best = (name, d);
        }
    }
    best.0
}

/// Human-readable name for a color, via the configured descriptor.
pub fn name_color(c: RgbaColor, descriptor: &dyn Descriptor) -> Result<String, DescriptorError> {
    match descriptor.describe(&DescriptorRequest::ColorName { color: c })? {
        DescriptorResponse::ColorName { name, .. } => Ok(name),
        _ => Err(DescriptorError::Schema("expected a color name".into())),
    }
}

/// First chromatic dominant color, else the most prominent chromatic CSS
/// color, else [`DEFAULT_SEED`].
pub fn pick_primary_color(dominants: &[RgbaColor], declared: &[RgbaColor]) -> RgbaColor {
    dominants
        .iter()
        .chain(declared)
        .copied()
        .find(|&c| !is_achromatic(c))
        .map(RgbaColor::opaque)
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Light,
    Dark,
}

/// Rec. 601 greyscale value of a color, in [0,1].
pub fn greyscale(c: RgbaColor) -> f64 {
    (0.299 * c.r as f64 + 0.587 * c.g as f64 + 0.114 * c.b as f64) / 255.0
}

pub fn detect_mode(page_background: RgbaColor) -> Mode {
    if greyscale(page_background) >= 0.5 {
        Mode::Light
    } else {
        Mode::Dark
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ElementNode, PageSnapshot, Viewport};

    fn snap(body_bg: RgbaColor, div_bg: RgbaColor) -> PageSnapshot {
        let mut body = ElementNode::new("body", "body");
        body.style.background_color = body_bg;
        let mut div = ElementNode::new("div", "div");
        div.style.background_color = div_bg;
        div.children.push(ElementNode::new("p", "p"));
        body.children.push(div);
        let mut s = PageSnapshot {
            source_id: "t".into(),
            viewport: Viewport { width: 10, height: 10 },
            root: body,
            ocr_lines: None,
            screenshot_colors: None,
            capture_mode: Default::default(),
            notes: vec![],
        };
        s.relink();
        s
    }

    #[test]
    fn transparent_paragraph_inherits_div_background() {
        let s = snap(RgbaColor::TRANSPARENT, RgbaColor::rgb(0, 0, 255));
        let idx = NodeIndex::new(&s);
        assert_eq!(effective_background("p", &idx), RgbaColor::rgb(0, 0, 255));
    }

    #[test]
    fn no_backgrounds_means_white() {
        let s = snap(RgbaColor::TRANSPARENT, RgbaColor::TRANSPARENT);
        let idx = NodeIndex::new(&s);
        assert_eq!(effective_background("p", &idx), RgbaColor::WHITE);
    }

    #[test]
    fn half_black_over_white_is_mid_grey() {
        let s = snap(RgbaColor::TRANSPARENT, RgbaColor::rgba(0, 0, 0, 0.5));
        let idx = NodeIndex::new(&s);
        let c = effective_background("p", &idx);
        for ch in [c.r, c.g, c.b] {
            assert!((ch as i32 - 128).abs() <= 1);
        }
    }

    #[test]
    fn exact_named_colors() {
        assert_eq!(nearest_named_color(RgbaColor::rgb(255, 0, 0)), "red");
        assert_eq!(nearest_named_color(RgbaColor::WHITE), "white");
        assert_eq!(nearest_named_color(RgbaColor::rgb(128, 128, 128)), "gray");
    }

    #[test]
    fn primary_skips_achromatic() {
        let c = RgbaColor::rgb(0x33, 0x66, 0xcc);
        let dominants = [RgbaColor::WHITE, c, RgbaColor::rgb(128, 128, 128)];
        assert_eq!(pick_primary_color(&dominants, &[]), c);
    }

    #[test]
    fn primary_falls_back_to_css_then_default() {
        let greys = [RgbaColor::rgb(250, 250, 250), RgbaColor::rgb(30, 30, 30)];
        let red = RgbaColor::rgb(0xaa, 0, 0);
        assert_eq!(pick_primary_color(&greys, &[RgbaColor::BLACK, red]), red);
        assert_eq!(pick_primary_color(&greys, &[RgbaColor::BLACK]), DEFAULT_SEED);
    }

    #[test]
    fn mode_detection() {
        assert_eq!(detect_mode(RgbaColor::WHITE), Mode::Light);
        assert_eq!(detect_mode(RgbaColor::rgb(0x11, 0x11, 0x11)), Mode::Dark);
    }
}
