use std::path::Path;

use rayon::prelude::*;

use super::{gen_mixed_sample, gen_statistical_sample, gen_structural_sample, DatasetKind, DatasetSpec};
use crate::error::{Error, Result};
use crate::random::{derive_seed, RngHandle};
use crate::store::{write_config, write_manifest, write_wav, Manifest, ManifestRow};
use crate::SignalBuffer;

/// File-system friendly class name: lowercase ASCII alphanumerics with
/// everything else collapsed to single underscores.
pub fn class_slug(name: &str) -> String {
    let mut out = String::new();
    for ch in name.trim().chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('_') && !out.is_empty() {
            out.push('_');
        }
    }
    while out.ends_with('_') {
        out.pop();
    }
    if out.is_empty() {
        "class".to_string()
    } else {
        out
    }
}

pub fn sample_seed(spec: &DatasetSpec, class_index: usize, index: usize) -> u64 {
    derive_seed(spec.master_seed, class_index, index)
}

/// Sample `index` of class `class_index`; depends only on the spec and the
/// two indices.
pub fn gen_sample(spec: &DatasetSpec, class_index: usize, index: usize) -> Result<SignalBuffer> {
    let class = spec
        .classes
        .get(class_index)
        .ok_or_else(|| Error::param(format!("class index {class_index} out of range")))?;
    let mut rng = RngHandle::new(sample_seed(spec, class_index, index));
    match spec.kind {
        DatasetKind::Statistical => gen_statistical_sample(class, spec, &mut rng),
        DatasetKind::Structural => gen_structural_sample(class, spec, &mut rng),
        DatasetKind::Mixed => gen_mixed_sample(class, spec, &mut rng),
    }
}

/// File name of the resolved config written next to the manifest.
pub const RESOLVED_CONFIG_NAME: &str = "config.resolved.toml";
pub const MANIFEST_NAME: &str = "manifest.csv";

/// Writes `<slug>/<slug>_<index>.wav` for every sample, then `manifest.csv`
/// and the resolved config. Samples are synthesized on the current rayon
/// pool; the manifest is class-major and identical for any worker count.
/// If any sample fails, no manifest is written.
pub fn generate_dataset(spec: &DatasetSpec, out_dir: &Path) -> Result<Manifest> {
    spec.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let slugs: Vec<String> = spec.classes.iter().map(|c| class_slug(&c.class_name)).collect();
    for slug in &slugs {
        let dir = out_dir.join(slug);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(dir, e))?;
    }
    let duration_s = spec.n_samples() as f64 / spec.sample_rate_hz as f64;
    let jobs: Vec<(usize, usize)> = (0..spec.classes.len())
        .flat_map(|c| (0..spec.samples_per_class).map(move |i| (c, i)))
        .collect();
    let results: Vec<Result<ManifestRow>> = jobs
        .par_iter()
        .map(|&(c, i)| {
            let rel = format!("{0}/{0}_{1:05}.wav", slugs[c], i);
            let signal = gen_sample(spec, c, i)?;
            write_wav(&signal, &out_dir.join(&rel), spec.wav_format)?;
            Ok(ManifestRow {
                path: rel,
                class_name: spec.classes[c].class_name.clone(),
                seed: sample_seed(spec, c, i),
                kind: spec.kind,
                duration_s,
                sample_rate_hz: spec.sample_rate_hz,
            })
        })
        .collect();
    let total = results.len();
    let written = results.iter().filter(|r| r.is_ok()).count();
    let mut rows = Vec::with_capacity(total);
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                return Err(Error::PartialOutput {
                    written,
                    total,
                    first_error: e.to_string(),
                })
            }
        }
    }
    let manifest = Manifest::new(rows)?;
    write_manifest(&manifest, &out_dir.join(MANIFEST_NAME))?;
    write_config(spec, &out_dir.join(RESOLVED_CONFIG_NAME))?;
    Ok(manifest)
}
