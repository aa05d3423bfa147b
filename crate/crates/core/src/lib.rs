//! designlint: an offline visual-design auditor for web pages.
//!
//! A page (static HTML or a rendered snapshot) is grouped by shared style,
//! checked against text, layout and color guidelines, optionally compared
//! with a reference page and a trend corpus, and reported with concrete CSS
//! suggestions.

pub mod audit;
pub mod cli;
pub mod color;
pub mod color_audit;
pub mod compare;
pub mod descriptor;
pub mod error;
pub mod groups;
pub mod ingest;
pub mod input;
pub mod layout;
pub mod model;
pub mod ocr;
pub mod patch;
pub mod report;
pub mod stats;
pub mod text;

pub use audit::{audit, fix_all_patch, AuditContext, AuditOptions, CompareSources};
pub use color::{apca_lc, generate_palette, ColorPalette, PaletteRole, MIN_LC};
pub use color_audit::ContrastProfile;
pub use compare::{aggregate_trends, TrendCategory, TrendManifest, TrendProfile};
pub use descriptor::{Descriptor, Deterministic};
pub use error::{DescriptorError, Error, Result};
pub use ingest::{apply_css_patch, StaticPage};
pub use model::{validate_snapshot, PageSnapshot};
pub use patch::CssPatch;
pub use report::{diff_reports, render_accessible_html, AuditReport, Category, ChangeSummary, Finding, HtmlOptions};
