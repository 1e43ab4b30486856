use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::manifest::{csv_error, write_csv_rows};
use super::write_atomic;
use crate::error::{Error, Result};
use crate::texture::{summarize, FileScore, GroupSummary, ScoreReport};

/// Columns of a per-file score CSV.
pub const SCORE_COLUMNS: [&str; 6] = ["dataset", "class", "file", "stats", "strts", "error"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// One row per file.
    Csv,
    /// Group means, standard deviations and counts.
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::param(format!("unknown report format `{other}` (csv | json)"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SummaryDoc {
    schema_version: u32,
    n_files: usize,
    n_failed: usize,
    groups: Vec<GroupSummary>,
}

pub fn report_to_json(report: &ScoreReport) -> Result<String> {
    let doc = SummaryDoc {
        schema_version: crate::CONFIG_SCHEMA_VERSION,
        n_files: report.files.len(),
        n_failed: report.n_failed(),
        groups: report.groups.clone(),
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Group summaries from a JSON report.
pub fn summary_from_json(text: &str) -> Result<Vec<GroupSummary>> {
    Ok(serde_json::from_str::<SummaryDoc>(text)?.groups)
}

pub fn report_to_csv(report: &ScoreReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for f in &report.files {
        w.serialize(f).map_err(|e| csv_error(Path::new("<memory>"), e))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<memory>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn write_report(report: &ScoreReport, path: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Csv => write_csv_rows(path, &report.files),
        ReportFormat::Json => write_atomic(path, report_to_json(report)?.as_bytes()),
    }
}

/// Reads a per-file score CSV, checking the header first.
pub fn read_scores(path: &Path) -> Result<Vec<FileScore>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(file));
    let headers = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().ne(SCORE_COLUMNS) {
        return Err(Error::Csv {
            path: path.to_path_buf(),
            row: Some(1),
            message: format!(
                "header `{}` does not match score columns `{}`",
                headers.iter().collect::<Vec<_>>().join(","),
                SCORE_COLUMNS.join(",")
            ),
        });
    }
    r.deserialize().map(|row| row.map_err(|e| csv_error(path, e))).collect()
}

/// Concatenates score tables, keeping the first occurrence of each
/// (dataset, class, file), so merging a table with itself changes nothing.
pub fn merge_scores(tables: Vec<Vec<FileScore>>) -> ScoreReport {
    let mut seen = HashSet::new();
    let mut files = Vec::new();
    for f in tables.into_iter().flatten() {
        if seen.insert((f.dataset.clone(), f.class_name.clone(), f.file.clone())) {
            files.push(f);
        }
    }
    let groups = summarize(&files);
    ScoreReport { files, groups }
}

fn pm(mean: Option<f64>, std: Option<f64>) -> String {
    match (mean, std) {
        (Some(m), Some(s)) => format!("{m:.2} ± {s:.2}"),
        _ => "n/a".to_string(),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn dataset_rows(groups: &[GroupSummary]) -> impl Iterator<Item = &GroupSummary> {
    groups.iter().filter(|g| g.class_name.is_none())
}

/// One aligned line per dataset: StrTS and StaTS as mean ± std.
pub fn summary_table(groups: &[GroupSummary]) -> String {
    let header = ["dataset", "n", "StrTS", "StaTS"].map(String::from);
    let mut rows = vec![header];
    for g in dataset_rows(groups) {
        rows.push([
            g.dataset.clone(),
            g.n.to_string(),
            pm(g.strts_mean, g.strts_std),
            pm(g.stats_mean, g.stats_std),
        ]);
    }
    let widths: Vec<usize> = (0..4)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, &w))| {
                let pad = " ".repeat(w - cell.chars().count());
                if c == 0 { format!("{cell}{pad}") } else { format!("{pad}{cell}") }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Dataset rows as CSV with separate mean and std columns.
pub fn summary_csv(groups: &[GroupSummary]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e| csv_error(Path::new("<summary>"), e);
    w.write_record(["dataset", "n", "strts_mean", "strts_std", "stats_mean", "stats_std"])
        .map_err(to_err)?;
    for g in dataset_rows(groups) {
        w.write_record([
            g.dataset.clone(),
            g.n.to_string(),
            opt(g.strts_mean),
            opt(g.strts_std),
            opt(g.stats_mean),
            opt(g.stats_std),
        ])
        .map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<summary>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
