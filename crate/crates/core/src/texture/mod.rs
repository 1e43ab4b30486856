//! Texture scores.
//!
//! * [`stats_score`]: statistical texture from forward/reverse running
//!   entropy curves.
//! * [`strts_score`]: structural texture from the normalized
//!   autocorrelation's first significant peak.
//! * [`self_similarity`]: frame-wise cosine self-similarity matrix.
//! * [`batch_score`]: both scores over a manifest, with group summaries.

mod autocorr;
mod batch;
mod entropy;
mod ssm;

pub use autocorr::{autocorr_normalized, strts_score, StrTSResult};
pub use batch::{batch_score, score_files, score_signal, summarize, FileScore, GroupSummary, ScoreOptions, ScoreReport};
pub use entropy::{
    curve_area, entropy_curves, frame_entropy, histogram_edges, stats_score, EntropyCurves, StaTSParams,
    StaTSResult,
};
pub use ssm::{self_similarity, SelfSimilarityMatrix};

/// Both scores share a 0–5 scale.
pub const SCORE_MAX: f64 = 5.0;
