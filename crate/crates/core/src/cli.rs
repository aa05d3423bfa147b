//! Command-line surface. Exit codes follow the linter convention: 0 when no
//! issues were found, 1 when there are issues, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::{audit, fix_all_patch, AuditOptions, CompareSources};
use crate::color_audit::ContrastProfile;
use crate::compare::{aggregate_trends, TrendCategory, TrendManifest, TrendProfile};
use crate::descriptor;
use crate::error::{Error, Result};
use crate::input::{attach_ocr, attach_screenshot, load_input, InputKind};
use crate::model::PageSnapshot;
use crate::patch::CssPatch;
use crate::report::{diff_reports, render_accessible_html, AuditReport, HtmlOptions};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_ISSUES: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "designlint", version, about = "Offline visual-design auditor for web pages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Audit a page (static HTML or snapshot JSON).
    Audit(AuditArgs),
    /// Build or inspect trend corpora.
    #[command(subcommand)]
    Trends(TrendsCommand),
    /// Compare two reports of the same page.
    Diff(DiffArgs),
    /// Apply a CSS patch to a static page and write the new snapshot.
    Patch(PatchArgs),
    /// Resolve a static HTML page into a snapshot.
    Snapshot(SnapshotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Html,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Auto,
    Static,
    Snapshot,
}

impl From<Kind> for InputKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Auto => InputKind::Auto,
            Kind::Static => InputKind::Static,
            Kind::Snapshot => InputKind::Snapshot,
        }
    }
}

#[derive(Debug, Args)]
struct AuditArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    input_kind: Kind,
    /// Audit an HTML input with this CSS patch applied.
    #[arg(long)]
    apply_patch: Option<PathBuf>,
    /// Source id recorded in the report instead of the input path.
    #[arg(long)]
    source_id: Option<String>,
    /// Reference page to compare against.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Trend corpus manifest.
    #[arg(long)]
    trends: Option<PathBuf>,
    /// Expected category of the trend corpus.
    #[arg(long, requires = "trends")]
    category: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; with `--format both`, the stem for `.json` and `.html`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Never contact a remote descriptor.
    #[arg(long)]
    offline: bool,
    /// OCR lines (JSON array) to attach to the snapshot.
    #[arg(long)]
    ocr: Option<PathBuf>,
    /// Screenshot (PNG/BMP) to take dominant colors from.
    #[arg(long)]
    screenshot: Option<PathBuf>,
    /// Write the fix-all CSS patch here.
    #[arg(long)]
    emit_patch: Option<PathBuf>,
    /// Earlier report of the same page; a change summary goes to stderr.
    #[arg(long)]
    diff_against: Option<PathBuf>,
    /// Record the current time in the report metadata.
    #[arg(long)]
    timestamp: bool,
    /// Section the HTML report by element group.
    #[arg(long)]
    group_by_element: bool,
    /// Require a higher contrast for text below 16px.
    #[arg(long)]
    strict_contrast: bool,
}

#[derive(Debug, Subcommand)]
enum TrendsCommand {
    /// Write a manifest listing every snapshot or page in a directory.
    Build {
        dir: PathBuf,
        #[arg(long)]
        category: String,
        #[arg(long)]
        out: PathBuf,
        /// Capture date; defaults to today.
        #[arg(long)]
        captured: Option<String>,
    },
    /// Print the trend profile of a manifest's corpus.
    Profile {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct DiffArgs {
    before: PathBuf,
    after: PathBuf,
    /// Patch that produced `after`, listed as CSS changes.
    #[arg(long)]
    patch: Option<PathBuf>,
    /// The page `before` was audited from, for old property values.
    #[arg(long)]
    before_input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PatchArgs {
    input: PathBuf,
    #[arg(long)]
    apply: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SnapshotArgs {
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(format!("writing {}", p.display()), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
                .map_err(|e| Error::io("writing stdout", e))
        }
    }
}

/// Loads a manifest's corpus and aggregates it, checking the category when
/// one is expected.
pub fn load_trend_profile(manifest: &Path, expected: Option<TrendCategory>) -> Result<TrendProfile> {
    let (m, paths) = TrendManifest::load(manifest)?;
    if let Some(c) = expected {
        if c != m.category {
            return Err(Error::Parse(format!(
                "manifest {} holds `{}` sites, not `{c}`",
                manifest.display(),
                m.category
            )));
        }
    }
    let corpus = paths
        .iter()
        .map(|p| load_input(p, InputKind::Auto).map(|l| l.snapshot))
        .collect::<Result<Vec<PageSnapshot>>>()?;
    aggregate_trends(&corpus, m.category)
}

fn run_audit(a: AuditArgs) -> Result<i32> {
    if a.format == Format::Both && a.out.is_none() {
        return Err(Error::Parse("`--format both` needs `--out`".into()));
    }
    let mut loaded = load_input(&a.input, a.input_kind.into())?;
    let mut snapshot = match &a.apply_patch {
        Some(p) => {
            let page = loaded
                .page
                .as_ref()
                .ok_or_else(|| Error::Parse("`--apply-patch` needs an HTML input".into()))?;
            let css = read_text(p)?;
            let patched = page.apply_css_patch(&css)?.snapshot;
            // The report hash covers the page and the patch together.
            loaded.raw.extend_from_slice(css.as_bytes());
            patched
        }
        None => loaded.snapshot,
    };
    if let Some(id) = &a.source_id {
        snapshot.source_id = id.clone();
    }
    if let Some(p) = &a.ocr {
        snapshot = attach_ocr(snapshot, p)?;
    }
    if let Some(p) = &a.screenshot {
        snapshot = attach_screenshot(snapshot, p)?;
    }
    let reference = a
        .reference
        .as_deref()
        .map(|p| load_input(p, InputKind::Auto).map(|l| l.snapshot))
        .transpose()
        .map_err(|e| Error::ReferenceIngest(e.to_string()))?;
    let category = a.category.as_deref().map(str::parse::<TrendCategory>).transpose()?;
    let trends = a.trends.as_deref().map(|m| load_trend_profile(m, category)).transpose()?;

    let descriptor = descriptor::from_env(a.offline);
    let options = AuditOptions {
        descriptor: descriptor.as_ref(),
        compare: CompareSources {
            reference: reference.as_ref(),
            trends: trends.as_ref(),
        },
        contrast_profile: if a.strict_contrast {
            ContrastProfile::SizeAware
        } else {
            ContrastProfile::Flat
        },
        timestamp: a.timestamp.then(|| chrono::Utc::now().to_rfc3339()),
    };
    let report = audit(&snapshot, &loaded.raw, &options)?;

    let json = report.to_json();
    let html = || {
        render_accessible_html(
            &report,
            &HtmlOptions {
                group_by_element: a.group_by_element,
            },
        )
    };
    match a.format {
        Format::Json => write_out(a.out.as_deref(), &json)?,
        Format::Html => write_out(a.out.as_deref(), &html())?,
        Format::Both => {
            let stem = a.out.as_deref().expect("checked above");
            write_out(Some(&stem.with_extension("json")), &json)?;
            write_out(Some(&stem.with_extension("html")), &html())?;
        }
    }
    if let Some(p) = &a.emit_patch {
        write_out(Some(p), &fix_all_patch(&report).to_css())?;
    }
    if let Some(p) = &a.diff_against {
        let before = AuditReport::from_json(&read_text(p)?)?;
        let summary = diff_reports(&before, &report, None, None)?;
        eprintln!(
            "since {}: {} resolved, {} introduced, {} unchanged",
            p.display(),
            summary.resolved.len(),
            summary.introduced.len(),
            summary.unchanged_count
        );
    }
    for n in &report.notes {
        eprintln!("note: {n}");
    }
    Ok(exit_code(&report))
}

/// 0 without issues, 1 with issues.
pub fn exit_code(report: &AuditReport) -> i32 {
    if report.issue_count() == 0 {
        EXIT_CLEAN
    } else {
        EXIT_ISSUES
    }
}

fn run_trends(t: TrendsCommand) -> Result<i32> {
    match t {
        TrendsCommand::Build {
            dir,
            category,
            out,
            captured,
        } => {
            let category: TrendCategory = category.parse()?;
            let captured = captured.unwrap_or_else(|| chrono::Utc::now().format("%Y-%m-%d").to_string());
            let mut manifest = TrendManifest::scan(&dir, category, &captured)?;
            // Site paths are stored relative to the manifest's directory.
            let base = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            if base.canonicalize().ok() != dir.canonicalize().ok() {
                let dir_abs = dir
                    .canonicalize()
                    .map_err(|e| Error::io(format!("resolving {}", dir.display()), e))?;
                for s in &mut manifest.sites {
                    *s = dir_abs.join(&*s).display().to_string();
                }
            }
            // Every site must load before the manifest is written.
            load_trend_profile_from(&manifest, &dir)?;
            let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            write_out(Some(&out), &json)?;
            eprintln!("{} sites written to {}", manifest.sites.len(), out.display());
            Ok(EXIT_CLEAN)
        }
        TrendsCommand::Profile { manifest, out } => {
            let profile = load_trend_profile(&manifest, None)?;
            write_out(
                out.as_deref(),
                &serde_json::to_string_pretty(&profile).expect("profile serializes"),
            )?;
            Ok(EXIT_CLEAN)
        }
    }
}

fn load_trend_profile_from(manifest: &TrendManifest, dir: &Path) -> Result<TrendProfile> {
    let corpus = manifest
        .sites
        .iter()
        .map(|s| load_input(&dir.join(s), InputKind::Auto).map(|l| l.snapshot))
        .collect::<Result<Vec<_>>>()?;
    aggregate_trends(&corpus, manifest.category)
}

fn run_diff(d: DiffArgs) -> Result<i32> {
    let before = AuditReport::from_json(&read_text(&d.before)?)?;
    let after = AuditReport::from_json(&read_text(&d.after)?)?;
    let patch = d.patch.as_deref().map(|p| read_text(p).and_then(|t| CssPatch::parse(&t))).transpose()?;
    let snapshot = d
        .before_input
        .as_deref()
        .map(|p| load_input(p, InputKind::Auto).map(|l| l.snapshot))
        .transpose()?;
    let summary = diff_reports(&before, &after, patch.as_ref(), snapshot.as_ref())?;
    write_out(None, &serde_json::to_string_pretty(&summary).expect("summary serializes"))?;
    Ok(if summary.introduced.is_empty() {
        EXIT_CLEAN
    } else {
        EXIT_ISSUES
    })
}

fn run_patch(p: PatchArgs) -> Result<i32> {
    let loaded = load_input(&p.input, InputKind::Auto)?;
    let page = loaded
        .page
        .ok_or_else(|| Error::Parse("patches apply to static HTML pages, not snapshots".into()))?;
    let patched = page.apply_css_patch(&read_text(&p.apply)?)?;
    write_out(p.out.as_deref(), &patched.snapshot.to_json())?;
    Ok(EXIT_CLEAN)
}

fn run_snapshot(s: SnapshotArgs) -> Result<i32> {
    let loaded = load_input(&s.input, InputKind::Static)?;
    write_out(s.out.as_deref(), &loaded.snapshot.to_json())?;
    Ok(EXIT_CLEAN)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_CLEAN };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Audit(a) => run_audit(a),
        Command::Trends(t) => run_trends(t),
        Command::Diff(d) => run_diff(d),
        Command::Patch(p) => run_patch(p),
        Command::Snapshot(s) => run_snapshot(s),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
