//! Font family classification.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FontClass {
    Serif,
    SansSerif,
    Monospace,
    /// Script, display and narrow faces.
    Decorative,
}

impl FontClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FontClass::Serif => "serif",
            FontClass::SansSerif => "sans-serif",
            FontClass::Monospace => "monospace",
            FontClass::Decorative => "decorative",
        }
    }
}

/// How a family was classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSource {
    Table,
    Generic,
    /// Guessed from words in the family name.
    Heuristic,
    /// Nothing recognizable; the user-agent default was assumed.
    Default,
}

use FontClass::*;

/// Curated family table.
pub const FONT_TABLE: &[(&str, FontClass)] = &[
    ("times new roman", Serif),
    ("times", Serif),
    ("georgia", Serif),
    ("garamond", Serif),
    ("eb garamond", Serif),
    ("baskerville", Serif),
    ("libre baskerville", Serif),
    ("palatino", Serif),
    ("palatino linotype", Serif),
    ("book antiqua", Serif),
    ("cambria", Serif),
    ("merriweather", Serif),
    ("playfair display", Serif),
    ("lora", Serif),
    ("pt serif", Serif),
    ("noto serif", Serif),
    ("source serif pro", Serif),
    ("crimson text", Serif),
    ("bodoni mt", Serif),
    ("didot", Serif),
    ("rockwell", Serif),
    ("constantia", Serif),
    ("charter", Serif),
    ("iowan old style", Serif),
    ("arial", SansSerif),
    ("helvetica", SansSerif),
    ("helvetica neue", SansSerif),
    ("verdana", SansSerif),
    ("tahoma", SansSerif),
    ("trebuchet ms", SansSerif),
    ("open sans", SansSerif),
    ("roboto", SansSerif),
    ("lato", SansSerif),
    ("montserrat", SansSerif),
    ("source sans pro", SansSerif),
    ("noto sans", SansSerif),
    ("segoe ui", SansSerif),
    ("inter", SansSerif),
    ("poppins", SansSerif),
    ("raleway", SansSerif),
    ("ubuntu", SansSerif),
    ("nunito", SansSerif),
    ("work sans", SansSerif),
    ("fira sans", SansSerif),
    ("pt sans", SansSerif),
    ("calibri", SansSerif),
    ("gill sans", SansSerif),
    ("futura", SansSerif),
    ("avenir", SansSerif),
    ("franklin gothic medium", SansSerif),
    ("century gothic", SansSerif),
    ("lucida grande", SansSerif),
    ("lucida sans", SansSerif),
    ("geneva", SansSerif),
    ("courier new", Monospace),
    ("courier", Monospace),
    ("consolas", Monospace),
    ("monaco", Monospace),
    ("menlo", Monospace),
    ("lucida console", Monospace),
    ("source code pro", Monospace),
    ("fira code", Monospace),
    ("fira mono", Monospace),
    ("roboto mono", Monospace),
    ("jetbrains mono", Monospace),
    ("inconsolata", Monospace),
    ("dejavu sans mono", Monospace),
    ("ubuntu mono", Monospace),
    ("sf mono", Monospace),
    ("comic sans ms", Decorative),
    ("papyrus", Decorative),
    ("brush script mt", Decorative),
    ("lobster", Decorative),
    ("pacifico", Decorative),
    ("impact", Decorative),
    ("dancing script", Decorative),
    ("great vibes", Decorative),
    ("chalkduster", Decorative),
    ("jokerman", Decorative),
    ("curlz mt", Decorative),
    ("bradley hand", Decorative),
    ("luminari", Decorative),
    ("marker felt", Decorative),
    ("arial narrow", Decorative),
];

/// CSS generic family keywords.
pub const GENERIC_FAMILIES: &[(&str, FontClass)] = &[
    ("serif", Serif),
    ("sans-serif", SansSerif),
    ("monospace", Monospace),
    ("cursive", Decorative),
    ("fantasy", Decorative),
    ("system-ui", SansSerif),
    ("ui-sans-serif", SansSerif),
    ("ui-serif", Serif),
    ("ui-monospace", Monospace),
    ("ui-rounded", SansSerif),
    ("-apple-system", SansSerif),
    ("blinkmacsystemfont", SansSerif),
];

/// Family suggested when a body or title font needs replacing.
pub const SUGGESTED_FAMILY: &str = "\"Open Sans\", Arial, sans-serif";

/// Browser default used when no family in a list is recognizable.
pub const DEFAULT_FAMILY: &str = "Times New Roman";

/// Name-based guess for families missing from the table.
fn heuristic(lower: &str) -> Option<FontClass> {
    let words = |keys: &[&str]| keys.iter().any(|k| lower.contains(k));
    if words(&["mono", "code"]) {
        Some(Monospace)
    } else if words(&["narrow", "condensed", "compressed", "script", "hand", "brush", "display"]) {
        Some(Decorative)
    } else if words(&["sans", "grotesk", "grotesque", "gothic"]) {
        Some(SansSerif)
    } else if words(&["serif", "antiqua", "roman"]) {
        Some(Serif)
    } else {
        None
    }
}

/// Classifies one family name.
pub fn classify_family(name: &str) -> Option<(FontClass, ClassSource)> {
    let lower = name.trim().trim_matches(['"', '\'']).to_ascii_lowercase();
    if let Some((_, c)) = FONT_TABLE.iter().find(|(n, _)| *n == lower) {
        return Some((*c, ClassSource::Table));
    }
    if let Some((_, c)) = GENERIC_FAMILIES.iter().find(|(n, _)| *n == lower) {
        return Some((*c, ClassSource::Generic));
    }
    heuristic(&lower).map(|c| (c, ClassSource::Heuristic))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    /// The family the verdict is based on.
    pub family: String,
    pub class: FontClass,
    pub source: ClassSource,
}

/// Classifies the first recognizable family of a `font-family` list.
pub fn resolve_families(families: &[String]) -> FamilyVerdict {
    families
        .iter()
        .find_map(|f| {
            classify_family(f).map(|(class, source)| FamilyVerdict {
                family: f.clone(),
                class,
                source,
            })
        })
        .unwrap_or(FamilyVerdict {
            family: DEFAULT_FAMILY.to_string(),
            class: Serif,
            source: ClassSource::Default,
        })
}

/// Whether a family class is acceptable for text of the given role.
/// Serif faces are flagged on body and title text; decorative faces are
/// tolerated on titles and decorative text only.
pub fn family_allowed(role: super::TextRole, class: FontClass) -> bool {
    use super::TextRole;
    match role {
        TextRole::Body => matches!(class, SansSerif | Monospace),
        TextRole::Title => matches!(class, SansSerif | Monospace | Decorative),
        TextRole::Decorative | TextRole::Other => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_large_and_unique() {
        assert!(FONT_TABLE.len() >= 40);
        let mut names: Vec<&str> = FONT_TABLE.iter().map(|(n, _)| *n).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), FONT_TABLE.len());
        for class in [Serif, SansSerif, Monospace, Decorative] {
            assert!(FONT_TABLE.iter().filter(|(_, c)| *c == class).count() >= 5);
        }
    }

    #[test]
    fn classification_sources() {
        assert_eq!(classify_family("Open Sans"), Some((SansSerif, ClassSource::Table)));
        assert_eq!(classify_family("'Georgia'"), Some((Serif, ClassSource::Table)));
        assert_eq!(classify_family("fantasy"), Some((Decorative, ClassSource::Generic)));
        assert_eq!(classify_family("FooSans"), Some((SansSerif, ClassSource::Heuristic)));
        assert_eq!(classify_family("Foo Serif"), Some((Serif, ClassSource::Heuristic)));
        assert_eq!(classify_family("Acme Mono"), Some((Monospace, ClassSource::Heuristic)));
        assert_eq!(classify_family("Foo"), None);
    }

    #[test]
    fn first_resolvable_wins() {
        let v = resolve_families(&["Foo".into(), "Papyrus".into(), "sans-serif".into()]);
        assert_eq!((v.family.as_str(), v.class), ("Papyrus", Decorative));
        let v = resolve_families(&["Foo".into()]);
        assert_eq!((v.class, v.source), (Serif, ClassSource::Default));
    }
}
