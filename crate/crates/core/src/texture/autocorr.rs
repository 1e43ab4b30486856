//! Structural texture score (StrTS).
//!
//! The zero-meaned signal's biased autocorrelation, normalized so R(0) = 1,
//! is searched for its first significant peak: the largest R(τ) at or after
//! the first lag where R drops to zero or below, up to τ_max = 0.25·N.
//! Skipping the lag-0 main lobe matters; without it the maximum is almost
//! always τ = 1. StrTS = 5·max(0, R(τ*)).

use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dsp::{inverse_dft, real_dft};
use crate::error::{Error, Result};
use crate::SignalBuffer;

fn zero_mean(x: &[f64]) -> Vec<f64> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| v - mean).collect()
}

/// R(τ) = Σ x̃(t)·x̃(t+τ) / Σ x̃(t)² for τ = 0..=tau_max.
pub fn autocorr_normalized(signal: &SignalBuffer, tau_max: usize) -> Result<Vec<f64>> {
    let n = signal.len();
    if tau_max == 0 || tau_max >= n {
        return Err(Error::param(format!(
            "tau_max must lie in 1..{n}, got {tau_max}"
        )));
    }
    let x = zero_mean(signal.samples());
    let energy: f64 = x.iter().map(|v| v * v).sum();
    if energy == 0.0 {
        return Err(Error::DegenerateSignal);
    }
    // zero padding to >= 2N makes the circular correlation linear
    let size = (2 * n).next_power_of_two();
    let mut spec = real_dft(&x, size);
    spec.iter_mut().for_each(|c| *c = Complex::new(c.norm_sqr(), 0.0));
    inverse_dft(&mut spec);
    let r0 = spec[0].re;
    Ok(spec[..=tau_max].iter().map(|c| c.re / r0).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrTSResult {
    pub score: f64,
    /// Selected lag τ*, samples.
    pub tau_star: usize,
    pub r_at_tau: f64,
    pub tau_max: usize,
    /// First lag with R(τ) <= 0; `None` when R stays positive up to τ_max
    /// and the search fell back to [1, τ_max].
    pub zero_crossing: Option<usize>,
    pub autocorr: Vec<f64>,
}

/// Structural texture score of `signal`.
pub fn strts_score(signal: &SignalBuffer) -> Result<StrTSResult> {
    let n = signal.len();
    let tau_max = ((0.25 * n as f64).round() as usize).max(1);
    if tau_max >= n {
        return Err(Error::SignalTooShort { needed: 2, got: n });
    }
    let autocorr = autocorr_normalized(signal, tau_max)?;
    let zero_crossing = (1..=tau_max).find(|&t| autocorr[t] <= 0.0);
    let start = zero_crossing.unwrap_or(1);
    let (tau_star, r_at_tau) = (start..=tau_max).fold((start, f64::NEG_INFINITY), |best, t| {
        if autocorr[t] > best.1 {
            (t, autocorr[t])
        } else {
            best
        }
    });
    Ok(StrTSResult {
        score: 5.0 * r_at_tau.clamp(0.0, 1.0),
        tau_star,
        r_at_tau,
        tau_max,
        zero_crossing,
        autocorr,
    })
}
