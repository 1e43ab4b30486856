//! File formats: WAV audio, manifest and score CSVs, JSON summaries, TOML
//! dataset configs, and PNG/CSV matrix exports. Every writer goes through a
//! temporary file in the destination directory and a rename.

mod config;
mod image;
mod manifest;
mod report;
mod wav;

pub use config::{config_to_toml, parse_config, read_config, write_config, LoadedConfig};
pub use image::{encode_gray_png, matrix_to_csv, parse_matrix_csv, write_matrix_csv, write_png};
pub use manifest::{read_manifest, write_manifest, Manifest, ManifestRow};
pub use report::{
    merge_scores, read_scores, report_to_csv, report_to_json, summary_csv, summary_from_json,
    summary_table, write_report, ReportFormat, SCORE_COLUMNS,
};
pub use wav::{decode_wav, encode_wav, read_wav, write_wav, WavFormat};

pub(crate) use wav::write_atomic;
