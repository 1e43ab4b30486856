use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{stats_score, strts_score, StaTSParams, StaTSResult, StrTSResult};
use crate::dsp::resample;
use crate::error::Result;
use crate::store::{read_wav, Manifest};
use crate::SignalBuffer;

/// Scores of one file. A score is empty when it could not be computed;
/// `error` then says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileScore {
    pub dataset: String,
    #[serde(rename = "class")]
    pub class_name: String,
    pub file: String,
    pub stats: Option<f64>,
    pub strts: Option<f64>,
    pub error: Option<String>,
}

/// Mean and sample standard deviation over the scored files of a dataset
/// (`class_name` empty) or of one class within it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub dataset: String,
    #[serde(rename = "class")]
    pub class_name: Option<String>,
    pub n: usize,
    pub stats_mean: Option<f64>,
    pub stats_std: Option<f64>,
    pub strts_mean: Option<f64>,
    pub strts_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub files: Vec<FileScore>,
    pub groups: Vec<GroupSummary>,
}

impl ScoreReport {
    pub fn from_files(files: Vec<FileScore>) -> Self {
        let groups = summarize(&files);
        Self { files, groups }
    }

    /// Files for which neither score was computed.
    pub fn n_failed(&self) -> usize {
        self.files
            .iter()
            .filter(|f| f.stats.is_none() && f.strts.is_none())
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreOptions {
    pub stats: StaTSParams,
    /// Inputs at other rates are resampled to this rate first.
    pub target_rate_hz: Option<u32>,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        Self {
            stats: StaTSParams::default(),
            target_rate_hz: Some(32_000),
        }
    }
}

/// Both scores of one signal, after resampling to the target rate.
pub fn score_signal(
    signal: &SignalBuffer,
    opts: &ScoreOptions,
) -> (Result<StaTSResult>, Result<StrTSResult>) {
    let resampled;
    let sig = match opts.target_rate_hz {
        Some(rate) if rate != signal.sample_rate_hz() => {
            resampled = resample(signal, rate);
            &resampled
        }
        _ => signal,
    };
    (stats_score(sig, &opts.stats), strts_score(sig))
}

fn score_path(path: &Path, dataset: &str, class_name: &str, file: &str, opts: &ScoreOptions) -> FileScore {
    let mut out = FileScore {
        dataset: dataset.to_string(),
        class_name: class_name.to_string(),
        file: file.to_string(),
        stats: None,
        strts: None,
        error: None,
    };
    let signal = match read_wav(path) {
        Ok(s) => s,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    let (stats, strts) = score_signal(&signal, opts);
    let mut errors = Vec::new();
    match stats {
        Ok(r) => out.stats = Some(r.score),
        Err(e) => errors.push(format!("StaTS: {e}")),
    }
    match strts {
        Ok(r) => out.strts = Some(r.score),
        Err(e) => errors.push(format!("StrTS: {e}")),
    }
    if !errors.is_empty() {
        out.error = Some(errors.join("; "));
    }
    out
}

/// Scores every manifest row in parallel; rows keep manifest order and a
/// failing file is recorded rather than aborting the batch. Relative paths
/// resolve against `base_dir`.
pub fn batch_score(manifest: &Manifest, base_dir: &Path, opts: &ScoreOptions) -> ScoreReport {
    let files = manifest
        .rows()
        .par_iter()
        .map(|row| {
            let path = manifest.resolve(base_dir, row);
            score_path(&path, row.kind.as_str(), &row.class_name, &row.path, opts)
        })
        .collect();
    ScoreReport::from_files(files)
}

/// Scores loose files as one dataset and class.
pub fn score_files(paths: &[PathBuf], dataset: &str, class_name: &str, opts: &ScoreOptions) -> ScoreReport {
    let files = paths
        .par_iter()
        .map(|p| score_path(p, dataset, class_name, &p.display().to_string(), opts))
        .collect();
    ScoreReport::from_files(files)
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    let n = values.len();
    if n == 0 {
        return (None, None);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (Some(mean), Some(0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (Some(mean), Some(var.sqrt()))
}

fn group(dataset: &str, class_name: Option<&str>, files: &[&FileScore]) -> GroupSummary {
    let stats: Vec<f64> = files.iter().filter_map(|f| f.stats).collect();
    let strts: Vec<f64> = files.iter().filter_map(|f| f.strts).collect();
    let (stats_mean, stats_std) = mean_std(&stats);
    let (strts_mean, strts_std) = mean_std(&strts);
    GroupSummary {
        dataset: dataset.to_string(),
        class_name: class_name.map(str::to_string),
        n: files.iter().filter(|f| f.stats.is_some() || f.strts.is_some()).count(),
        stats_mean,
        stats_std,
        strts_mean,
        strts_std,
    }
}

/// Per-dataset rows, each followed by its per-class rows, in order of first
/// appearance. Standard deviations are sample (n - 1) estimates; a single
/// file has std 0.
pub fn summarize(files: &[FileScore]) -> Vec<GroupSummary> {
    let mut datasets: Vec<&str> = Vec::new();
    for f in files {
        if !datasets.contains(&f.dataset.as_str()) {
            datasets.push(&f.dataset);
        }
    }
    let mut out = Vec::new();
    for ds in datasets {
        let members: Vec<&FileScore> = files.iter().filter(|f| f.dataset == ds).collect();
        out.push(group(ds, None, &members));
        let mut classes: Vec<&str> = Vec::new();
        for f in &members {
            if !classes.contains(&f.class_name.as_str()) {
                classes.push(&f.class_name);
            }
        }
        for c in classes {
            let in_class: Vec<&FileScore> = members.iter().copied().filter(|f| f.class_name == c).collect();
            out.push(group(ds, Some(c), &in_class));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(dataset: &str, class: &str, stats: Option<f64>, strts: Option<f64>) -> FileScore {
        FileScore {
            dataset: dataset.into(),
            class_name: class.into(),
            file: "x.wav".into(),
            stats,
            strts,
            error: None,
        }
    }

    #[test]
    fn single_file_has_zero_std() {
        let g = summarize(&[fs("mixed", "A", Some(4.2), Some(3.1))]);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].stats_mean, Some(4.2));
        assert_eq!(g[0].stats_std, Some(0.0));
        assert_eq!(g[0].n, 1);
        assert_eq!(g[1].class_name.as_deref(), Some("A"));
    }

    #[test]
    fn groups_follow_first_appearance() {
        let files = vec![
            fs("b", "2", Some(1.0), Some(2.0)),
            fs("a", "1", Some(3.0), None),
            fs("b", "1", Some(3.0), Some(4.0)),
            fs("b", "2", None, None),
        ];
        let g = summarize(&files);
        let labels: Vec<(String, Option<String>)> =
            g.iter().map(|g| (g.dataset.clone(), g.class_name.clone())).collect();
        assert_eq!(
            labels,
            vec![
                ("b".into(), None),
                ("b".into(), Some("2".into())),
                ("b".into(), Some("1".into())),
                ("a".into(), None),
                ("a".into(), Some("1".into())),
            ]
        );
        assert_eq!(g[0].n, 2);
        assert_eq!(g[0].stats_mean, Some(2.0));
        assert!((g[0].stats_std.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(g[3].strts_mean, None);
    }

    #[test]
    fn unreadable_file_is_recorded() {
        let report = score_files(&[PathBuf::from("/nonexistent/a.wav")], "d", "c", &ScoreOptions::default());
        assert_eq!(report.files.len(), 1);
        assert_eq!(report.n_failed(), 1);
        assert!(report.files[0].error.as_ref().unwrap().contains("nonexistent"));
    }

    #[test]
    fn non_target_rate_is_resampled() {
        let n = 48_000 * 2;
        let x: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::TAU * 440.0 * i as f64 / 48_000.0).sin())
            .collect();
        let sig = SignalBuffer::new(x, 48_000).unwrap();
        let (stats, strts) = score_signal(&sig, &ScoreOptions::default());
        let strts = strts.unwrap();
        assert!((strts.score - 5.0).abs() < 0.1);
        // lag counted at 32 kHz: one 440 Hz period is ~72.7 samples
        assert_eq!(strts.tau_max, 16_000);
        assert!(stats.unwrap().score > 0.0);
    }
}
