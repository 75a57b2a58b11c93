//! Running manifests and writing their reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use crate::error::CliError;
use crate::execute::{execute, Outcome};
use crate::manifest::{parse_manifest, Overrides};
use crate::mtx::format_mtx;
use crate::report::{InlineMatrix, ResultReport, Witness, F64, INLINE_LIMIT};
use crate::residuals::residuals;

/// A rendered report plus the sibling witness file, if any.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub report: ResultReport,
    /// File name (relative to the report) and Matrix Market text.
    pub witness_file: Option<(String, String)>,
}

/// Place the witness inline, or in `<stem>.witness.mtx` when it is large.
pub fn render(outcome: &Outcome, stem: &str) -> Rendered {
    let mut report = ResultReport::new(outcome.problem);
    report.exists = outcome.exists;
    report.min_value = outcome.min_value.map(F64);
    report.residuals = outcome.residuals_f64();
    report.conditions = outcome.conditions.clone();
    report.diagnostics = outcome.diagnostics.clone();
    let mut witness_file = None;
    if let Some(w) = &outcome.witness {
        if w.nrows() > INLINE_LIMIT || w.ncols() > INLINE_LIMIT {
            let name = format!("{stem}.witness.mtx");
            witness_file = Some((name.clone(), format_mtx(w)));
            report.witness = Some(Witness::File { path: name });
        } else {
            report.witness = Some(Witness::Inline(InlineMatrix::from_operator(w)));
        }
    }
    Rendered {
        report,
        witness_file,
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into())
}

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Solve one manifest and write its report to `out`, or to stdout when
/// `out` is `None`. Returns the exit code.
pub fn run_single(manifest: &Path, out: Option<&Path>, ov: &Overrides) -> Result<u8, CliError> {
    let m = parse_manifest(manifest, ov)?;
    log::info!("{}: solving '{}'", manifest.display(), m.problem);
    let outcome = execute(&m)?;
    for d in &outcome.diagnostics {
        log::debug!("{}: {d}", manifest.display());
    }
    let (dir, name) = match out {
        Some(p) => (
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
            stem(p),
        ),
        None => (
            manifest.parent().map(Path::to_path_buf).unwrap_or_default(),
            stem(manifest),
        ),
    };
    let rendered = render(&outcome, &name);
    if let Some((file, text)) = &rendered.witness_file {
        let path = dir.join(file);
        fs::write(&path, text).map_err(|e| io(&path, e))?;
    }
    let json = rendered.report.to_json()?;
    match out {
        Some(p) => fs::write(p, json).map_err(|e| io(p, e))?,
        None => print!("{json}"),
    }
    log::info!("{}: exit code {}", manifest.display(), outcome.code);
    Ok(outcome.code)
}

/// Manifests in `dir`: `*.json` files that are not `*.report.json`, sorted
/// by name.
pub fn batch_manifests(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            p.is_file() && name.ends_with(".json") && !name.ends_with(".report.json")
        })
        .collect();
    paths.sort();
    Ok(paths)
}

/// Outcome of one manifest in a batch.
#[derive(Debug)]
pub struct BatchEntry {
    pub manifest: PathBuf,
    pub report: PathBuf,
    pub code: u8,
    pub error: Option<String>,
}

/// Run every manifest in `dir` concurrently. Reports are written to
/// `<out_dir>/<stem>.report.json`; entries come back in name order.
pub fn run_batch(
    dir: &Path,
    out_dir: Option<&Path>,
    ov: &Overrides,
) -> Result<Vec<BatchEntry>, CliError> {
    let out_dir = out_dir.unwrap_or(dir);
    fs::create_dir_all(out_dir).map_err(|e| io(out_dir, e))?;
    let manifests = batch_manifests(dir)?;
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(1);
    let mut entries: Vec<BatchEntry> = Vec::with_capacity(manifests.len());
    for chunk in manifests.chunks(workers) {
        let done: Vec<BatchEntry> = thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|manifest| {
                    let report = out_dir.join(format!("{}.report.json", stem(manifest)));
                    s.spawn(move || {
                        let (code, error) = match run_single(manifest, Some(&report), ov) {
                            Ok(c) => (c, None),
                            Err(e) => (e.exit_code(), Some(e.to_string())),
                        };
                        BatchEntry {
                            manifest: manifest.clone(),
                            report,
                            code,
                            error,
                        }
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("batch worker panicked"))
                .collect()
        });
        entries.extend(done);
    }
    Ok(entries)
}

/// One recomputed residual: name, value in the report, value recomputed
/// from the witness as read back.
pub type ResidualCheck = (String, f64, f64);

/// Read a report back, reload its witness and recompute every residual.
pub fn verify_report(
    manifest: &Path,
    report: &Path,
    ov: &Overrides,
) -> Result<Vec<ResidualCheck>, CliError> {
    let m = parse_manifest(manifest, ov)?;
    let text = fs::read_to_string(report).map_err(|e| io(report, e))?;
    let r = ResultReport::from_json(&text)?;
    let dir = report.parent().unwrap_or(Path::new(""));
    let Some(w) = &r.witness else {
        return Ok(Vec::new());
    };
    let witness = w.load(dir)?;
    let again = residuals(&m, &witness, r.min_value.map(|v| v.0))?;
    if again.len() != r.residuals.len() {
        return Err(CliError::Parse(format!(
            "report lists residuals {:?}, recomputation gives {:?}",
            r.residuals.keys().collect::<Vec<_>>(),
            again.keys().collect::<Vec<_>>()
        )));
    }
    Ok(r.residuals
        .iter()
        .map(|(k, v)| (k.clone(), v.0, again.get(k).copied().unwrap_or(f64::NAN)))
        .collect())
}
