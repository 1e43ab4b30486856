//! Synthetic underwater-acoustic datasets with controlled texture, plus two
//! texture scores for arbitrary audio:
//!
//! * **StaTS** (statistical texture score): bidirectional temporal entropy of
//!   amplitude histograms, on a 0–5 scale.
//! * **StrTS** (structural texture score): normalized autocorrelation at the
//!   first significant peak lag, on a 0–5 scale.
//!
//! The crate is organised as
//!
//! * [`random`] and [`model`]: deterministic sampling (Rayleigh, K) and the
//!   parameter types the generators share,
//! * [`synth`]: statistical, structural and mixed dataset generators,
//! * [`texture`]: StaTS, StrTS, self-similarity matrices and batch scoring,
//! * [`dsp`]: STFT, mel filterbank, log-mel, resampling and segmentation,
//! * [`store`]: WAV, manifest/report CSV, JSON, TOML config and PNG I/O.

pub mod dsp;
pub mod error;
pub mod model;
pub mod parallel;
pub mod random;
pub mod signal;
pub mod store;
pub mod synth;
pub mod texture;

pub use error::{Error, Result};
pub use signal::SignalBuffer;

/// Version of the dataset config schema understood by [`store::config`].
pub const CONFIG_SCHEMA_VERSION: u32 = 1;
