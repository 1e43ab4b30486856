use ndarray::Array2;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::frame_count;
use crate::error::{Error, Result};
use crate::SignalBuffer;

/// Log-mel front-end settings. Defaults: 1024-sample Hann window, hop 320,
/// 1024 mel bands at 32 kHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrogramConfig {
    pub window_len: usize,
    pub hop: usize,
    pub n_mels: usize,
    pub sample_rate_hz: u32,
    pub log_floor: f64,
}

impl Default for SpectrogramConfig {
    fn default() -> Self {
        Self {
            window_len: 1024,
            hop: 320,
            n_mels: 1024,
            sample_rate_hz: 32_000,
            log_floor: 1e-10,
        }
    }
}

impl SpectrogramConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_len < 2 || self.hop == 0 || self.hop > self.window_len {
            return Err(Error::param(format!(
                "spectrogram needs window >= 2 and 0 < hop <= window, got window {} hop {}",
                self.window_len, self.hop
            )));
        }
        if self.n_mels == 0 || self.sample_rate_hz == 0 || !(self.log_floor > 0.0) {
            return Err(Error::param(
                "spectrogram needs n_mels >= 1, a positive sample rate and a positive log floor",
            ));
        }
        Ok(())
    }

    pub fn n_freqs(&self) -> usize {
        self.window_len / 2 + 1
    }
}

/// Periodic Hann window, w[n] = 0.5 - 0.5·cos(2πn/N).
pub fn hann_window(len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| 0.5 - 0.5 * (std::f64::consts::TAU * n as f64 / len as f64).cos())
        .collect()
}

fn windowed_spectra(
    signal: &SignalBuffer,
    cfg: &SpectrogramConfig,
    mut per_bin: impl FnMut(Complex<f64>) -> f64,
) -> Result<Array2<f64>> {
    cfg.validate()?;
    let n_frames = frame_count(signal.len(), cfg.window_len, cfg.hop);
    if n_frames == 0 {
        return Err(Error::SignalTooShort {
            needed: cfg.window_len,
            got: signal.len(),
        });
    }
    let window = hann_window(cfg.window_len);
    let fft = FftPlanner::new().plan_fft_forward(cfg.window_len);
    let n_freqs = cfg.n_freqs();
    let mut out = Array2::zeros((n_frames, n_freqs));
    let mut buf = vec![Complex::new(0.0, 0.0); cfg.window_len];
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        let frame = &signal.samples()[i * cfg.hop..i * cfg.hop + cfg.window_len];
        for ((b, &x), &w) in buf.iter_mut().zip(frame).zip(&window) {
            *b = Complex::new(x * w, 0.0);
        }
        fft.process(&mut buf);
        for (dst, &c) in row.iter_mut().zip(&buf[..n_freqs]) {
            *dst = per_bin(c);
        }
    }
    Ok(out)
}

/// Magnitude STFT, frames × (window_len/2 + 1), Hann window, no padding.
pub fn stft_magnitude(signal: &SignalBuffer, cfg: &SpectrogramConfig) -> Result<Array2<f64>> {
    windowed_spectra(signal, cfg, |c| c.norm())
}

/// Power STFT |X|², same layout as [`stft_magnitude`].
pub fn power_spectrum_frames(signal: &SignalBuffer, cfg: &SpectrogramConfig) -> Result<Array2<f64>> {
    windowed_spectra(signal, cfg, |c| c.norm_sqr())
}
