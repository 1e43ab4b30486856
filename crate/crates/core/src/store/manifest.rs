use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::write_atomic;
use crate::error::{Error, Result};
use crate::synth::DatasetKind;

/// One generated or scored file. `path` is relative to the manifest's
/// directory unless absolute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub path: String,
    pub class_name: String,
    pub seed: u64,
    pub kind: DatasetKind,
    pub duration_s: f64,
    pub sample_rate_hz: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    rows: Vec<ManifestRow>,
}

impl Manifest {
    /// Builds a manifest, rejecting duplicate paths.
    pub fn new(rows: Vec<ManifestRow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, r) in rows.iter().enumerate() {
            if !seen.insert(r.path.as_str()) {
                return Err(Error::param(format!(
                    "manifest row {}: duplicate path `{}`",
                    i + 1,
                    r.path
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[ManifestRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Class names in order of first appearance.
    pub fn classes(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.class_name.as_str()) {
                out.push(&r.class_name);
            }
        }
        out
    }

    /// Resolves a row path against the manifest directory.
    pub fn resolve(&self, base_dir: &Path, row: &ManifestRow) -> PathBuf {
        let p = Path::new(&row.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base_dir.join(p)
        }
    }
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        row: e.position().map(|p| p.line()),
        message: match e.kind() {
            csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
            _ => e.to_string(),
        },
    }
}

pub(crate) fn write_csv_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| csv_error(path, e))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?;
    write_atomic(path, &bytes)
}

pub(crate) fn read_csv_rows<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(file));
    r.deserialize().map(|row| row.map_err(|e| csv_error(path, e))).collect()
}

pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    write_csv_rows(path, manifest.rows())
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    Manifest::new(read_csv_rows(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(n: usize) -> Vec<ManifestRow> {
        (0..n)
            .map(|i| ManifestRow {
                path: format!("vessel_{}/vessel_{}_{:05}.wav", i / 10 + 1, i / 10 + 1, i % 10),
                class_name: format!("Vessel {}, \"quoted\"", i / 10 + 1),
                seed: u64::MAX - i as u64,
                kind: DatasetKind::Mixed,
                duration_s: 5.0,
                sample_rate_hz: 32_000,
            })
            .collect()
    }

    #[test]
    fn round_trip_forty_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.csv");
        let m = Manifest::new(rows(40)).unwrap();
        write_manifest(&m, &path).unwrap();
        let back = read_manifest(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.classes().len(), 4);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("path,class_name,seed,kind,duration_s,sample_rate_hz\n"));
        assert!(text.contains("\"Vessel 1, \"\"quoted\"\"\""));
    }

    #[test]
    fn duplicate_paths_rejected() {
        let mut r = rows(2);
        r[1].path = r[0].path.clone();
        assert!(Manifest::new(r).is_err());
    }

    #[test]
    fn parse_errors_carry_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(
            &path,
            "path,class_name,seed,kind,duration_s,sample_rate_hz\n\
             a.wav,A,1,mixed,5.0,32000\n\
             b.wav,B,notanumber,mixed,5.0,32000\n",
        )
        .unwrap();
        match read_manifest(&path) {
            Err(Error::Csv { row: Some(3), .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
