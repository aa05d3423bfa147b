//! APCA lightness contrast (APCA-W3, 0.0.98G-4g constants).
//!
//! Positive Lc means dark text on a light background, negative Lc light text
//! on a dark background. Inputs must be opaque; composite translucent colors
//! onto their backdrop first.

use crate::model::RgbaColor;

/// Minimum |Lc| a text/background pair must reach.
pub const MIN_LC: f64 = 74.7;

const MAIN_TRC: f64 = 2.4;
const S_RCO: f64 = 0.212_672_9;
const S_GCO: f64 = 0.715_152_2;
const S_BCO: f64 = 0.072_175_0;

const NORM_BG: f64 = 0.56;
const NORM_TXT: f64 = 0.57;
const REV_TXT: f64 = 0.62;
const REV_BG: f64 = 0.65;

const BLK_THRS: f64 = 0.022;
const BLK_CLMP: f64 = 1.414;
const SCALE_BOW: f64 = 1.14;
const SCALE_WOB: f64 = 1.14;
const LO_BOW_OFFSET: f64 = 0.027;
const LO_WOB_OFFSET: f64 = 0.027;
const DELTA_Y_MIN: f64 = 0.0005;
const LO_CLIP: f64 = 0.1;

/// Screen luminance as APCA estimates it (simple 2.4 power curve).
pub fn screen_luminance(c: RgbaColor) -> f64 {
    let lin = |v: u8| (v as f64 / 255.0).powf(MAIN_TRC);
    S_RCO * lin(c.r) + S_GCO * lin(c.g) + S_BCO * lin(c.b)
}

fn soft_clamp(y: f64) -> f64 {
    if y > BLK_THRS {
        y
    } else {
        y + (BLK_THRS - y).powf(BLK_CLMP)
    }
}

/// Signed Lc of `text` over `background`.
pub fn apca_lc(text: RgbaColor, background: RgbaColor) -> f64 {
    let txt = soft_clamp(screen_luminance(text.opaque()));
    let bg = soft_clamp(screen_luminance(background.opaque()));
    if (bg - txt).abs() < DELTA_Y_MIN {
        return 0.0;
    }
    let out = if bg > txt {
        let sapc = (bg.powf(NORM_BG) - txt.powf(NORM_TXT)) * SCALE_BOW;
        if sapc < LO_CLIP {
            0.0
        } else {
            sapc - LO_BOW_OFFSET
        }
    } else {
        let sapc = (bg.powf(REV_BG) - txt.powf(REV_TXT)) * SCALE_WOB;
        if sapc > -LO_CLIP {
            0.0
        } else {
            sapc + LO_WOB_OFFSET
        }
    };
    out * 100.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_colors_have_no_contrast() {
        let c = RgbaColor::rgb(120, 40, 200);
        assert_eq!(apca_lc(c, c), 0.0);
    }

    #[test]
    fn black_on_white() {
        let lc = apca_lc(RgbaColor::BLACK, RgbaColor::WHITE);
        assert!((lc - 106.04).abs() < 0.1, "{lc}");
    }

    #[test]
    fn white_on_black_is_negative() {
        let lc = apca_lc(RgbaColor::WHITE, RgbaColor::BLACK);
        assert!((lc + 107.88).abs() < 0.5, "{lc}");
    }
}
