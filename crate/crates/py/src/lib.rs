//! Python bindings: snapshots, audits, reports, patches, palettes and trend
//! profiles. Structured results cross the boundary as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use designlint::color::palette::generate_palette as core_palette;
use designlint::color::Mode;
use designlint::compare::{aggregate_trends as core_trends, TrendCategory};
use designlint::model::RgbaColor;
use designlint::{descriptor, AuditOptions, CompareSources, ContrastProfile, HtmlOptions};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn hex(s: &str) -> PyResult<RgbaColor> {
    RgbaColor::from_hex(s).ok_or_else(|| err(format!("not a hex color: {s}")))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

/// A page snapshot: static (from HTML) or rendered (from snapshot JSON).
#[pyclass(frozen, module = "designlint_py")]
struct PageSnapshot {
    inner: designlint::PageSnapshot,
    html: Option<String>,
}

#[pymethods]
impl PageSnapshot {
    /// Resolves static HTML into a snapshot.
    #[staticmethod]
    #[pyo3(signature = (html, source_id = "page"))]
    fn from_html(html: &str, source_id: &str) -> Self {
        PageSnapshot {
            inner: designlint::StaticPage::from_html(html, source_id).snapshot,
            html: Some(html.to_string()),
        }
    }

    /// Parses and validates a snapshot document.
    #[staticmethod]
    fn from_json(raw: &str) -> PyResult<Self> {
        Ok(PageSnapshot {
            inner: designlint::validate_snapshot(raw).map_err(err)?,
            html: None,
        })
    }

    #[getter]
    fn source_id(&self) -> &str {
        &self.inner.source_id
    }

    #[getter]
    fn rendered(&self) -> bool {
        self.inner.capture_mode == designlint::model::CaptureMode::Rendered
    }

    fn element_count(&self) -> usize {
        self.inner.element_count()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Re-resolves a static page with a CSS patch applied.
    fn apply_css_patch(&self, css: &str) -> PyResult<PageSnapshot> {
        let html = self
            .html
            .as_deref()
            .ok_or_else(|| err("patches apply to snapshots built from HTML"))?;
        let page = designlint::StaticPage::from_html(html, &self.inner.source_id);
        let patched = page.apply_css_patch(css).map_err(err)?;
        Ok(PageSnapshot {
            inner: patched.snapshot,
            html: None,
        })
    }

    fn __repr__(&self) -> String {
        format!("PageSnapshot(source_id={:?}, elements={})", self.inner.source_id, self.inner.element_count())
    }
}

#[pyclass(frozen, module = "designlint_py")]
struct AuditReport {
    inner: designlint::AuditReport,
}

#[pymethods]
impl AuditReport {
    #[staticmethod]
    fn from_json(raw: &str) -> PyResult<Self> {
        Ok(AuditReport {
            inner: designlint::AuditReport::from_json(raw).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[pyo3(signature = (group_by_element = false))]
    fn to_html(&self, group_by_element: bool) -> String {
        designlint::render_accessible_html(&self.inner, &HtmlOptions { group_by_element })
    }

    #[getter]
    fn issue_count(&self) -> usize {
        self.inner.issue_count()
    }

    /// `(category, group_key)` of every issue.
    fn issues(&self) -> Vec<(String, String)> {
        self.inner
            .issues
            .iter()
            .map(|f| (f.category.to_string(), f.group_key.clone()))
            .collect()
    }

    /// CSS applying the preferred suggestion of every issue.
    fn fix_all_patch(&self) -> String {
        designlint::fix_all_patch(&self.inner).to_css()
    }

    fn __repr__(&self) -> String {
        format!("AuditReport(source_id={:?}, issues={})", self.inner.run_meta.source_id, self.inner.issue_count())
    }
}

/// Audits a snapshot. The deterministic descriptor is used unless
/// `offline` is false and a remote endpoint is configured.
#[pyfunction]
#[pyo3(signature = (snapshot, offline = true, strict_contrast = false, reference = None))]
fn audit(
    snapshot: &PageSnapshot,
    offline: bool,
    strict_contrast: bool,
    reference: Option<&PageSnapshot>,
) -> PyResult<AuditReport> {
    let d = descriptor::from_env(offline);
    let options = AuditOptions {
        descriptor: d.as_ref(),
        compare: CompareSources {
            reference: reference.map(|r| &r.inner),
            trends: None,
        },
        contrast_profile: if strict_contrast {
            ContrastProfile::SizeAware
        } else {
            ContrastProfile::Flat
        },
        timestamp: None,
    };
    let inner = designlint::audit(&snapshot.inner, &[], &options).map_err(err)?;
    Ok(AuditReport { inner })
}

/// Change summary between two reports, as JSON.
#[pyfunction]
fn diff_reports(before: &AuditReport, after: &AuditReport) -> PyResult<String> {
    let summary = designlint::diff_reports(&before.inner, &after.inner, None, None).map_err(err)?;
    Ok(json(&summary))
}

/// APCA lightness contrast of text on a background, both hex colors.
#[pyfunction]
fn apca_lc(text: &str, background: &str) -> PyResult<f64> {
    Ok(designlint::apca_lc(hex(text)?, hex(background)?))
}

/// Tonal palette for a seed color, as JSON.
#[pyfunction]
#[pyo3(signature = (seed, dark = false))]
fn generate_palette(seed: &str, dark: bool) -> PyResult<String> {
    let mode = if dark { Mode::Dark } else { Mode::Light };
    Ok(json(&core_palette(hex(seed)?, mode)))
}

/// Trend profile of a corpus, as JSON.
#[pyfunction]
fn aggregate_trends(corpus: Vec<PyRef<'_, PageSnapshot>>, category: &str) -> PyResult<String> {
    let category: TrendCategory = category.parse().map_err(err)?;
    let snapshots: Vec<designlint::PageSnapshot> = corpus.iter().map(|s| s.inner.clone()).collect();
    Ok(json(&core_trends(&snapshots, category).map_err(err)?))
}

#[pymodule]
fn designlint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PageSnapshot>()?;
    m.add_class::<AuditReport>()?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(diff_reports, m)?)?;
    m.add_function(wrap_pyfunction!(apca_lc, m)?)?;
    m.add_function(wrap_pyfunction!(generate_palette, m)?)?;
    m.add_function(wrap_pyfunction!(aggregate_trends, m)?)?;
    m.add("MIN_LC", designlint::MIN_LC)?;
    Ok(())
}
