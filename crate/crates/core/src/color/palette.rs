//! Tonal palettes and role assignment from a single seed color.
//!
//! The seed is converted to CIELCh. Each color family keeps a hue and chroma
//! and varies only lightness ("tone"); roles pick fixed tones per mode. After
//! rendering, every role/on-role pair is pushed apart in tone until its APCA
//! contrast clears [`MIN_LC`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::apca::{apca_lc, MIN_LC};
use super::space::{from_lch_mapped, to_lch, Lch};
use super::Mode;
use crate::model::RgbaColor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaletteRole {
    Primary,
    OnPrimary,
    PrimaryContainer,
    OnPrimaryContainer,
    Secondary,
    OnSecondary,
    SecondaryContainer,
    OnSecondaryContainer,
    Tertiary,
    OnTertiary,
    TertiaryContainer,
    OnTertiaryContainer,
    Error,
    OnError,
    ErrorContainer,
    OnErrorContainer,
    Surface,
    OnSurface,
    Outline,
}

impl PaletteRole {
    pub const ALL: [PaletteRole; 19] = [
        PaletteRole::Primary,
        PaletteRole::OnPrimary,
        PaletteRole::PrimaryContainer,
        PaletteRole::OnPrimaryContainer,
        PaletteRole::Secondary,
        PaletteRole::OnSecondary,
        PaletteRole::SecondaryContainer,
        PaletteRole::OnSecondaryContainer,
        PaletteRole::Tertiary,
        PaletteRole::OnTertiary,
        PaletteRole::TertiaryContainer,
        PaletteRole::OnTertiaryContainer,
        PaletteRole::Error,
        PaletteRole::OnError,
        PaletteRole::ErrorContainer,
        PaletteRole::OnErrorContainer,
        PaletteRole::Surface,
        PaletteRole::OnSurface,
        PaletteRole::Outline,
    ];

    /// `(fill, content)` pairs that must keep readable contrast.
    pub const PAIRS: [(PaletteRole, PaletteRole); 9] = [
        (PaletteRole::Primary, PaletteRole::OnPrimary),
        (PaletteRole::PrimaryContainer, PaletteRole::OnPrimaryContainer),
        (PaletteRole::Secondary, PaletteRole::OnSecondary),
        (PaletteRole::SecondaryContainer, PaletteRole::OnSecondaryContainer),
        (PaletteRole::Tertiary, PaletteRole::OnTertiary),
        (PaletteRole::TertiaryContainer, PaletteRole::OnTertiaryContainer),
        (PaletteRole::Error, PaletteRole::OnError),
        (PaletteRole::ErrorContainer, PaletteRole::OnErrorContainer),
        (PaletteRole::Surface, PaletteRole::OnSurface),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PaletteRole::Primary => "primary",
            PaletteRole::OnPrimary => "on_primary",
            PaletteRole::PrimaryContainer => "primary_container",
            PaletteRole::OnPrimaryContainer => "on_primary_container",
            PaletteRole::Secondary => "secondary",
            PaletteRole::OnSecondary => "on_secondary",
            PaletteRole::SecondaryContainer => "secondary_container",
            PaletteRole::OnSecondaryContainer => "on_secondary_container",
            PaletteRole::Tertiary => "tertiary",
            PaletteRole::OnTertiary => "on_tertiary",
            PaletteRole::TertiaryContainer => "tertiary_container",
            PaletteRole::OnTertiaryContainer => "on_tertiary_container",
            PaletteRole::Error => "error",
            PaletteRole::OnError => "on_error",
            PaletteRole::ErrorContainer => "error_container",
            PaletteRole::OnErrorContainer => "on_error_container",
            PaletteRole::Surface => "surface",
            PaletteRole::OnSurface => "on_surface",
            PaletteRole::Outline => "outline",
        }
    }

    /// Content role drawn on top of this fill role, if any.
    pub fn on_role(&self) -> Option<PaletteRole> {
        PaletteRole::PAIRS
            .iter()
            .find(|(fill, _)| fill == self)
            .map(|(_, on)| *on)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorPalette {
    pub mode: Mode,
    pub seed: RgbaColor,
    pub roles: BTreeMap<PaletteRole, RgbaColor>,
}

impl ColorPalette {
    pub fn get(&self, role: PaletteRole) -> RgbaColor {
        self.roles[&role]
    }

    /// Pairs failing the contrast floor; empty for every generated palette.
    pub fn contrast_violations(&self) -> Vec<(PaletteRole, PaletteRole, f64)> {
        PaletteRole::PAIRS
            .iter()
            .filter_map(|&(fill, on)| {
                let lc = apca_lc(self.get(on), self.get(fill));
                (lc.abs() < MIN_LC).then_some((fill, on, lc))
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
struct Family {
    hue: f64,
    chroma: f64,
}

impl Family {
    fn tone(&self, tone: f64) -> RgbaColor {
        from_lch_mapped(Lch {
            l: tone,
            c: self.chroma,
            h: self.hue,
        })
    }
}

/// CIELCh hue of saturated error red.
const ERROR_HUE: f64 = 40.0;
const ERROR_CHROMA: f64 = 80.0;

struct Tones {
    fill: f64,
    on_fill: f64,
    container: f64,
    on_container: f64,
    surface: f64,
    on_surface: f64,
    outline: f64,
}

const LIGHT: Tones = Tones {
    fill: 40.0,
    on_fill: 100.0,
    container: 90.0,
    on_container: 10.0,
    surface: 98.0,
    on_surface: 10.0,
    outline: 50.0,
};

const DARK: Tones = Tones {
    fill: 80.0,
    on_fill: 20.0,
    container: 30.0,
    on_container: 90.0,
    surface: 6.0,
    on_surface: 90.0,
    outline: 60.0,
};

/// Moves the two tones apart one step at a time until the rendered pair
/// reaches [`MIN_LC`].
fn contrasting_pair(family_fill: Family, family_on: Family, fill: f64, on: f64) -> (RgbaColor, RgbaColor) {
    let (mut fill, mut on) = (fill, on);
    let on_darker = on < fill;
    loop {
        let (f, o) = (family_fill.tone(fill), family_on.tone(on));
        if apca_lc(o, f).abs() >= MIN_LC {
            return (f, o);
        }
        if on_darker {
            on = (on - 1.0).max(0.0);
            fill = (fill + 1.0).min(100.0);
        } else {
            on = (on + 1.0).min(100.0);
            fill = (fill - 1.0).max(0.0);
        }
    }
}

/// Full role palette for `seed` in the given mode.
pub fn generate_palette(seed: RgbaColor, mode: Mode) -> ColorPalette {
    let lch = to_lch(seed.opaque());
    let hue = lch.h;
    let c = lch.c;
    let primary = Family { hue, chroma: c };
    let secondary = Family { hue, chroma: c / 3.0 };
    let tertiary = Family {
        hue: (hue + 60.0).rem_euclid(360.0),
        chroma: c / 2.0,
    };
    let error = Family {
        hue: ERROR_HUE,
        chroma: ERROR_CHROMA,
    };
    let neutral = Family {
        hue,
        chroma: (c / 12.0).min(6.0),
    };
    let neutral_variant = Family {
        hue,
        chroma: (c / 6.0).min(12.0),
    };
    let t = match mode {
        Mode::Light => LIGHT,
        Mode::Dark => DARK,
    };

    let mut roles = BTreeMap::new();
    let families = [
        (PaletteRole::Primary, PaletteRole::PrimaryContainer, primary),
        (PaletteRole::Secondary, PaletteRole::SecondaryContainer, secondary),
        (PaletteRole::Tertiary, PaletteRole::TertiaryContainer, tertiary),
        (PaletteRole::Error, PaletteRole::ErrorContainer, error),
    ];
    for (fill_role, container_role, family) in families {
        let (fill, on) = contrasting_pair(family, family, t.fill, t.on_fill);
        roles.insert(fill_role, fill);
        roles.insert(fill_role.on_role().unwrap(), on);
        let (cont, on_cont) = contrasting_pair(family, family, t.container, t.on_container);
        roles.insert(container_role, cont);
        roles.insert(container_role.on_role().unwrap(), on_cont);
    }
    let (surface, on_surface) = contrasting_pair(neutral, neutral, t.surface, t.on_surface);
    roles.insert(PaletteRole::Surface, surface);
    roles.insert(PaletteRole::OnSurface, on_surface);
    roles.insert(PaletteRole::Outline, neutral_variant.tone(t.outline));

    ColorPalette {
        mode,
        seed: seed.opaque(),
        roles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::space::{relative_luminance, hue_distance};
    use crate::color::is_achromatic;

    #[test]
    fn every_role_present() {
        let p = generate_palette(RgbaColor::rgb(0x33, 0x66, 0xcc), Mode::Light);
        for role in PaletteRole::ALL {
            assert!(p.roles.contains_key(&role), "{role:?}");
        }
    }

    #[test]
    fn grey_seed_gives_achromatic_seed_roles() {
        for mode in [Mode::Light, Mode::Dark] {
            let p = generate_palette(RgbaColor::rgb(128, 128, 128), mode);
            for (role, c) in &p.roles {
                let err = matches!(
                    role,
                    PaletteRole::Error | PaletteRole::OnError | PaletteRole::ErrorContainer | PaletteRole::OnErrorContainer
                );
                if !err {
                    assert!(is_achromatic(*c), "{role:?} {c}");
                }
            }
            assert!(p.contrast_violations().is_empty());
        }
    }

    #[test]
    fn light_surface_is_lighter_than_text() {
        let p = generate_palette(RgbaColor::rgb(200, 30, 90), Mode::Light);
        assert!(relative_luminance(p.get(PaletteRole::Surface)) > relative_luminance(p.get(PaletteRole::OnSurface)));
        let d = generate_palette(RgbaColor::rgb(200, 30, 90), Mode::Dark);
        assert!(relative_luminance(d.get(PaletteRole::Surface)) < relative_luminance(d.get(PaletteRole::OnSurface)));
    }

    #[test]
    fn primary_keeps_seed_hue() {
        let seed = RgbaColor::rgb(0x1e, 0x88, 0xe5);
        let p = generate_palette(seed, Mode::Light);
        let d = hue_distance(to_lch(seed).h, to_lch(p.get(PaletteRole::Primary)).h);
        assert!(d <= 10.0, "{d}");
    }
}
