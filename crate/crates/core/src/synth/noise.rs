use rustfft::num_complex::Complex;

use crate::dsp::{inverse_dft, real_dft};
use crate::error::Result;
use crate::model::NoiseModel;
use crate::random::RngHandle;
use crate::SignalBuffer;

/// One rectangular impulse added to the background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse {
    pub index: usize,
    pub width: usize,
    pub amplitude: f64,
}

/// Background noise split into its colored part and impulse list.
#[derive(Debug, Clone)]
pub struct BackgroundNoise {
    pub colored: Vec<f64>,
    pub impulses: Vec<Impulse>,
}

impl BackgroundNoise {
    pub fn total(&self) -> Vec<f64> {
        let mut out = self.colored.clone();
        for imp in &self.impulses {
            let end = (imp.index + imp.width).min(out.len());
            for s in &mut out[imp.index..end] {
                *s += imp.amplitude;
            }
        }
        out
    }
}

const MAX_IMPULSE_WIDTH: usize = 3;

/// Colored Gaussian noise scaled to RMS `level`, plus impulses at a Poisson
/// count with uniform positions, 1-3 sample widths and uniform amplitudes.
pub fn background_noise_parts(
    model: &NoiseModel,
    n: usize,
    sample_rate_hz: u32,
    rng: &mut RngHandle,
) -> Result<BackgroundNoise> {
    model.validate()?;
    let mut colored: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
    if model.spectral_slope != 0.0 && n > 1 {
        shape_spectrum(&mut colored, model.spectral_slope, sample_rate_hz);
    }
    let mean = colored.iter().sum::<f64>() / n.max(1) as f64;
    colored.iter_mut().for_each(|s| *s -= mean);
    let rms = (colored.iter().map(|s| s * s).sum::<f64>() / n.max(1) as f64).sqrt();
    let gain = if rms > 0.0 { model.level / rms } else { 0.0 };
    colored.iter_mut().for_each(|s| *s *= gain);

    let mut impulses = Vec::new();
    if model.impulse_rate_per_s > 0.0 && n > 0 {
        let duration_s = n as f64 / sample_rate_hz as f64;
        let count = rng.poisson(model.impulse_rate_per_s * duration_s);
        let (lo, hi) = model.impulse_amp_range;
        for _ in 0..count {
            impulses.push(Impulse {
                index: rng.int_inclusive(0, n - 1),
                width: rng.int_inclusive(1, MAX_IMPULSE_WIDTH),
                amplitude: rng.uniform(lo, hi),
            });
        }
    }
    Ok(BackgroundNoise { colored, impulses })
}

pub fn gen_background_noise(
    model: &NoiseModel,
    n: usize,
    sample_rate_hz: u32,
    rng: &mut RngHandle,
) -> Result<SignalBuffer> {
    let parts = background_noise_parts(model, n, sample_rate_hz, rng)?;
    SignalBuffer::new(parts.total(), sample_rate_hz)
}

/// Scales bin amplitudes by f^(-slope/2) so power falls as 1/f^slope.
fn shape_spectrum(x: &mut [f64], slope: f64, sample_rate_hz: u32) {
    let n = x.len();
    let mut spec = real_dft(x, n);
    spec[0] = Complex::new(0.0, 0.0);
    for k in 1..=n / 2 {
        let f = k as f64 * sample_rate_hz as f64 / n as f64;
        let g = f.powf(-slope / 2.0);
        spec[k] *= g;
        if k != n - k {
            spec[n - k] *= g;
        }
    }
    inverse_dft(&mut spec);
    for (s, c) in x.iter_mut().zip(&spec) {
        *s = c.re / n as f64;
    }
}
