//! sRGB <-> CIELAB / CIELCh (D65).

use crate::model::RgbaColor;

const XN: f64 = 0.950_47;
const YN: f64 = 1.0;
const ZN: f64 = 1.088_83;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

/// Lightness, chroma and hue angle in degrees [0, 360).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lch {
    pub l: f64,
    pub c: f64,
    pub h: f64,
}

fn srgb_to_linear(v: u8) -> f64 {
    let v = v as f64 / 255.0;
    if v <= 0.040_45 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn linear_to_srgb(v: f64) -> f64 {
    if v <= 0.003_130_8 {
        v * 12.92
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

fn f(t: f64) -> f64 {
    const D: f64 = 6.0 / 29.0;
    if t > D * D * D {
        t.cbrt()
    } else {
        t / (3.0 * D * D) + 4.0 / 29.0
    }
}

fn f_inv(t: f64) -> f64 {
    const D: f64 = 6.0 / 29.0;
    if t > D {
        t * t * t
    } else {
        3.0 * D * D * (t - 4.0 / 29.0)
    }
}

/// Relative luminance Y (sRGB piecewise transfer).
pub fn relative_luminance(c: RgbaColor) -> f64 {
    0.212_6 * srgb_to_linear(c.r) + 0.715_2 * srgb_to_linear(c.g) + 0.072_2 * srgb_to_linear(c.b)
}

pub fn to_lab(c: RgbaColor) -> Lab {
    let (r, g, b) = (srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b));
    let x = 0.412_456_4 * r + 0.357_576_1 * g + 0.180_437_5 * b;
    let y = 0.212_672_9 * r + 0.715_152_2 * g + 0.072_175_0 * b;
    let z = 0.019_333_9 * r + 0.119_192_0 * g + 0.950_304_1 * b;
    let (fx, fy, fz) = (f(x / XN), f(y / YN), f(z / ZN));
    Lab {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

/// Linear-light sRGB for a Lab color; components may fall outside [0,1].
fn lab_to_linear(lab: Lab) -> [f64; 3] {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    let (x, y, z) = (XN * f_inv(fx), YN * f_inv(fy), ZN * f_inv(fz));
    [
        3.240_454_2 * x - 1.537_138_5 * y - 0.498_531_4 * z,
        -0.969_266_0 * x + 1.876_010_8 * y + 0.041_556_0 * z,
        0.055_643_4 * x - 0.204_025_9 * y + 1.057_225_2 * z,
    ]
}

/// Tolerance absorbs the rounding of the published conversion matrices.
fn in_gamut(lin: &[f64; 3]) -> bool {
    lin.iter().all(|v| (-5e-5..=1.0 + 5e-5).contains(v))
}

fn quantize(lin: [f64; 3]) -> RgbaColor {
    let q = |v: f64| (linear_to_srgb(v.clamp(0.0, 1.0)) * 255.0).round() as u8;
    RgbaColor::rgb(q(lin[0]), q(lin[1]), q(lin[2]))
}

/// Exact Lab -> sRGB conversion, `None` when out of gamut.
pub fn from_lab(lab: Lab) -> Option<RgbaColor> {
    let lin = lab_to_linear(lab);
    in_gamut(&lin).then(|| quantize(lin))
}

impl Lab {
    pub fn to_lch(self) -> Lch {
        let c = (self.a * self.a + self.b * self.b).sqrt();
        let h = self.b.atan2(self.a).to_degrees().rem_euclid(360.0);
        Lch { l: self.l, c, h }
    }

    pub fn distance(&self, other: &Lab) -> f64 {
        ((self.l - other.l).powi(2) + (self.a - other.a).powi(2) + (self.b - other.b).powi(2)).sqrt()
    }
}

impl Lch {
    pub fn to_lab(self) -> Lab {
        let h = self.h.to_radians();
        Lab {
            l: self.l,
            a: self.c * h.cos(),
            b: self.c * h.sin(),
        }
    }
}

pub fn to_lch(c: RgbaColor) -> Lch {
    to_lab(c).to_lch()
}

/// CIELCh chroma of a color.
pub fn chroma(c: RgbaColor) -> f64 {
    to_lch(c).c
}

/// Renders an LCh color into sRGB, reducing chroma (at fixed lightness and
/// hue) until the color fits the gamut.
pub fn from_lch_mapped(lch: Lch) -> RgbaColor {
    let l = lch.l.clamp(0.0, 100.0);
    let at = |c: f64| lab_to_linear(Lch { l, c, h: lch.h }.to_lab());
    let full = at(lch.c.max(0.0));
    if in_gamut(&full) {
        return quantize(full);
    }
    let (mut lo, mut hi) = (0.0, lch.c.max(0.0));
    for _ in 0..40 {
        let mid = (lo + hi) / 2.0;
        if in_gamut(&at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    quantize(at(lo))
}

/// Hue difference in degrees, in [0, 180].
pub fn hue_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_and_black_lab() {
        let w = to_lab(RgbaColor::WHITE);
        assert!((w.l - 100.0).abs() < 0.01 && w.a.abs() < 0.01 && w.b.abs() < 0.01);
        let k = to_lab(RgbaColor::BLACK);
        assert!(k.l.abs() < 1e-9);
    }

    #[test]
    fn pure_red_reference_values() {
        // Reference CIELAB for sRGB red under D65.
        let lab = to_lab(RgbaColor::rgb(255, 0, 0));
        assert!((lab.l - 53.24).abs() < 0.05, "{lab:?}");
        assert!((lab.a - 80.09).abs() < 0.05, "{lab:?}");
        assert!((lab.b - 67.20).abs() < 0.05, "{lab:?}");
    }

    #[test]
    fn lab_round_trip_on_grid() {
        for r in (0..=255).step_by(51) {
            for g in (0..=255).step_by(51) {
                for b in (0..=255).step_by(51) {
                    let c = RgbaColor::rgb(r as u8, g as u8, b as u8);
                    assert_eq!(from_lab(to_lab(c)), Some(c));
                    assert_eq!(from_lch_mapped(to_lch(c)), c);
                }
            }
        }
    }

    #[test]
    fn gamut_mapping_keeps_lightness() {
        let c = from_lch_mapped(Lch { l: 50.0, c: 200.0, h: 140.0 });
        assert!((to_lab(c).l - 50.0).abs() < 0.5);
    }
}
