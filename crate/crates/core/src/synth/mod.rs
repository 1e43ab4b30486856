//! Synthetic dataset generators.
//!
//! Three dataset kinds share one sample-rate/duration plan:
//!
//! * **statistical**: three tones per class whose envelopes are drawn
//!   segment by segment from a Rayleigh/K mixture and cosine cross-faded,
//!   plus colored noise with impulses;
//! * **structural**: a jittered three-harmonic stack under a deterministic
//!   class envelope, plus faint white noise;
//! * **mixed**: four tones whose envelopes blend from Rayleigh to K (or back)
//!   under a Gaussian weight and carry slow or fast sinusoidal modulation.

mod config;
mod dataset;
mod envelope;
mod mixed;
mod noise;
mod statistical;
mod structural;

pub use config::{
    ClassConfig, DatasetKind, DatasetSpec, EnvelopeShape, ModulationSpeed, NoiseSpec, Transition,
};
pub use dataset::{class_slug, gen_sample, generate_dataset, sample_seed, MANIFEST_NAME, RESOLVED_CONFIG_NAME};
pub use envelope::{cosine_crossfade, segment_len_samples};
pub use mixed::{gen_mixed_sample, rayleigh_share};
pub use noise::{background_noise_parts, gen_background_noise, BackgroundNoise, Impulse};
pub use statistical::{gen_statistical_sample, mixture_levels};
pub use structural::gen_structural_sample;

use crate::SignalBuffer;

/// Peak value generated buffers are normalized to.
pub const PEAK_LEVEL: f64 = 1.0;

fn finish(samples: Vec<f64>, sample_rate_hz: u32) -> SignalBuffer {
    let mut sig = SignalBuffer::new(samples, sample_rate_hz).expect("finite synthesis output");
    sig.normalize_peak(PEAK_LEVEL);
    sig
}
