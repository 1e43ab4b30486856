//! Statistical texture score (StaTS).
//!
//! Per-frame Shannon entropies of M-bin amplitude histograms are averaged
//! cumulatively over the signal and over its time reversal. With
//! H_final the last forward value, S the area between the two curves and
//! S_max = T_obs·log2 M:
//!
//! ```text
//! P_rel = H_final / log2 M
//! StaTS = 5 · P_rel · (1 - P_T · S / S_max)
//! ```
//!
//! where P_T is the fraction of frames the forward curve needs before it
//! stays within `convergence_eps · H_final` of H_final.
//!
//! Both passes histogram against the same global edges. By default these are
//! the 0.5% and 99.5% sample quantiles of the whole signal (samples outside
//! are clamped into the end bins); `edge_quantile = 0` uses the exact
//! minimum and maximum instead.

use serde::{Deserialize, Serialize};

use crate::dsp::{frame_count, frames};
use crate::error::{Error, Result};
use crate::SignalBuffer;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaTSParams {
    /// Frame length L in samples.
    pub frame_len: usize,
    /// Hop H in samples.
    pub hop: usize,
    /// Histogram bins M.
    pub n_bins: usize,
    /// Convergence band half-width, as a fraction of H_final.
    pub convergence_eps: f64,
    /// Tail mass excluded on each side when placing the global bin edges.
    pub edge_quantile: f64,
}

impl Default for StaTSParams {
    fn default() -> Self {
        Self {
            frame_len: 2048,
            hop: 512,
            n_bins: 64,
            convergence_eps: 0.02,
            edge_quantile: 0.005,
        }
    }
}

impl StaTSParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_bins < 2 {
            return Err(Error::param("StaTS needs at least 2 histogram bins"));
        }
        if self.frame_len < 2 * self.n_bins {
            return Err(Error::param(format!(
                "frame length {} is below 2 x {} bins",
                self.frame_len, self.n_bins
            )));
        }
        if self.hop == 0 || self.hop > self.frame_len {
            return Err(Error::param(format!(
                "hop {} must lie in 1..={}",
                self.hop, self.frame_len
            )));
        }
        if !(self.convergence_eps > 0.0 && self.convergence_eps.is_finite()) {
            return Err(Error::param("convergence eps must be positive"));
        }
        if !(0.0..0.5).contains(&self.edge_quantile) {
            return Err(Error::param("edge quantile must lie in [0, 0.5)"));
        }
        Ok(())
    }
}

/// Shannon entropy in bits of an `n_bins` equal-width histogram over
/// `[bin_lo, bin_hi]`; out-of-range values fall into the end bins.
pub fn frame_entropy(frame: &[f64], n_bins: usize, bin_lo: f64, bin_hi: f64) -> Result<f64> {
    if frame.is_empty() {
        return Err(Error::param("frame is empty"));
    }
    if n_bins == 0 || !(bin_lo < bin_hi) {
        return Err(Error::param(format!(
            "need n_bins >= 1 and bin_lo < bin_hi, got {n_bins} bins over [{bin_lo}, {bin_hi}]"
        )));
    }
    let mut counts = vec![0u32; n_bins];
    let scale = n_bins as f64 / (bin_hi - bin_lo);
    let last = (n_bins - 1) as f64;
    for &v in frame {
        let idx = ((v - bin_lo) * scale).floor().clamp(0.0, last);
        counts[idx as usize] += 1;
    }
    let n = frame.len() as f64;
    Ok(counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum())
}

/// Global histogram edges: quantiles `q` and `1 - q` (linear interpolation),
/// falling back to min/max when those coincide. `None` for constant input.
///
/// The upper edge is interpolated from the top of the sorted data with the
/// same fractional offset as the lower one, so negating the signal exactly
/// swaps and negates the edges.
pub fn histogram_edges(samples: &[f64], q: f64) -> Option<(f64, f64)> {
    if samples.is_empty() {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let (min, max) = (sorted[0], sorted[n - 1]);
    if q > 0.0 && n > 1 {
        let pos = (n - 1) as f64 * q;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        let lo = sorted[i] + frac * (sorted[(i + 1).min(n - 1)] - sorted[i]);
        let top = n - 1 - i;
        let hi = sorted[top] - frac * (sorted[top] - sorted[top.saturating_sub(1)]);
        if lo < hi {
            return Some((lo, hi));
        }
    }
    (min < max).then_some((min, max))
}

#[derive(Debug, Clone)]
pub struct EntropyCurves {
    /// Running mean of frame entropies of x(t), in bits.
    pub forward: Vec<f64>,
    /// Same for x(T - t).
    pub reverse: Vec<f64>,
    /// Shared bin edges; `None` when the signal is constant.
    pub edges: Option<(f64, f64)>,
}

fn running_mean(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut sum = 0.0;
    values
        .enumerate()
        .map(|(i, v)| {
            sum += v;
            sum / (i + 1) as f64
        })
        .collect()
}

/// Forward and reverse running-mean entropy curves over shared edges.
pub fn entropy_curves(signal: &SignalBuffer, params: &StaTSParams) -> Result<EntropyCurves> {
    params.validate()?;
    let x = signal.samples();
    let n_frames = frame_count(x.len(), params.frame_len, params.hop);
    if n_frames == 0 {
        return Err(Error::SignalTooShort {
            needed: params.frame_len,
            got: x.len(),
        });
    }
    let edges = histogram_edges(x, params.edge_quantile);
    let Some((lo, hi)) = edges else {
        return Ok(EntropyCurves {
            forward: vec![0.0; n_frames],
            reverse: vec![0.0; n_frames],
            edges,
        });
    };
    let entropy = |f: &[f64]| frame_entropy(f, params.n_bins, lo, hi).expect("validated edges");
    let reversed = signal.reversed();
    let forward = running_mean(frames(x, params.frame_len, params.hop).map(entropy));
    let reverse = running_mean(frames(reversed.samples(), params.frame_len, params.hop).map(entropy));
    Ok(EntropyCurves {
        forward,
        reverse,
        edges,
    })
}

/// Trapezoidal area of |forward - reverse| with samples `dt` apart.
pub fn curve_area(forward: &[f64], reverse: &[f64], dt: f64) -> f64 {
    let gaps: Vec<f64> = forward.iter().zip(reverse).map(|(a, b)| (a - b).abs()).collect();
    gaps.windows(2).map(|w| 0.5 * (w[0] + w[1]) * dt).sum()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StaTSResult {
    pub score: f64,
    pub p_rel: f64,
    pub p_t: f64,
    /// S, bit·seconds.
    pub area_s: f64,
    /// S_max = T_obs·log2 M.
    pub s_max: f64,
    /// Last value of the forward curve, bits.
    pub h_final: f64,
    pub forward_curve: Vec<f64>,
    pub reverse_curve: Vec<f64>,
    /// Set when the signal is constant and no histogram range exists.
    pub degenerate: bool,
}

/// Statistical texture score of `signal`.
pub fn stats_score(signal: &SignalBuffer, params: &StaTSParams) -> Result<StaTSResult> {
    params.validate()?;
    let needed = 2 * params.frame_len;
    if signal.len() < needed {
        return Err(Error::SignalTooShort {
            needed,
            got: signal.len(),
        });
    }
    let curves = entropy_curves(signal, params)?;
    let log_m = (params.n_bins as f64).log2();
    let s_max = signal.duration_s() * log_m;
    let degenerate = curves.edges.is_none();

    let dt = params.hop as f64 / signal.sample_rate_hz() as f64;
    let area_s = curve_area(&curves.forward, &curves.reverse, dt);
    let h_final = *curves.forward.last().expect("at least one frame");
    let p_rel = h_final / log_m;

    let band = params.convergence_eps * h_final;
    let settled_from = curves
        .forward
        .iter()
        .rposition(|h| (h - h_final).abs() > band)
        .map_or(0, |i| i + 1);
    let p_t = settled_from as f64 / curves.forward.len() as f64;

    let score = (5.0 * p_rel * (1.0 - p_t * area_s / s_max)).clamp(0.0, 5.0);
    Ok(StaTSResult {
        score,
        p_rel,
        p_t,
        area_s,
        s_max,
        h_final,
        forward_curve: curves.forward,
        reverse_curve: curves.reverse,
        degenerate,
    })
}
