use ndarray::Array2;

use super::stft::{power_spectrum_frames, SpectrogramConfig};
use crate::error::{Error, Result};
use crate::SignalBuffer;

/// HTK mel scale.
pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

#[derive(Debug, Clone)]
pub struct MelFilterbank {
    /// n_mels × (window_len/2 + 1), peak-one triangles.
    pub weights: Array2<f64>,
    pub centers_hz: Vec<f64>,
    /// Filters narrower than the FFT bin spacing can miss every bin; with
    /// 1024 bands over 513 bins this is expected at low frequencies.
    pub empty_rows: usize,
}

/// Triangular filters with centres equally spaced in mel from 0 Hz to Nyquist.
pub fn mel_filterbank(cfg: &SpectrogramConfig) -> Result<MelFilterbank> {
    cfg.validate()?;
    let n_freqs = cfg.n_freqs();
    let nyquist = cfg.sample_rate_hz as f64 / 2.0;
    let top = hz_to_mel(nyquist);
    let edges: Vec<f64> = (0..cfg.n_mels + 2)
        .map(|i| mel_to_hz(top * i as f64 / (cfg.n_mels + 1) as f64))
        .collect();
    let bin_hz = cfg.sample_rate_hz as f64 / cfg.window_len as f64;

    let mut weights = Array2::zeros((cfg.n_mels, n_freqs));
    for (m, mut row) in weights.rows_mut().into_iter().enumerate() {
        let (lo, mid, hi) = (edges[m], edges[m + 1], edges[m + 2]);
        for (j, w) in row.iter_mut().enumerate() {
            let f = j as f64 * bin_hz;
            let rise = (f - lo) / (mid - lo);
            let fall = (hi - f) / (hi - mid);
            *w = rise.min(fall).max(0.0);
        }
    }
    let empty_rows = weights
        .rows()
        .into_iter()
        .filter(|r| r.iter().all(|&w| w == 0.0))
        .count();
    Ok(MelFilterbank {
        weights,
        centers_hz: edges[1..=cfg.n_mels].to_vec(),
        empty_rows,
    })
}

#[derive(Debug, Clone)]
pub struct MelSpectrogram {
    /// frames × n_mels, natural-log power.
    pub values: Array2<f64>,
    /// Centre time of each frame.
    pub frame_times_s: Vec<f64>,
    pub empty_filters: usize,
}

/// ln(max(filterbank · |X|², floor)) per frame.
pub fn log_mel(signal: &SignalBuffer, cfg: &SpectrogramConfig) -> Result<MelSpectrogram> {
    cfg.validate()?;
    if signal.sample_rate_hz() != cfg.sample_rate_hz {
        return Err(Error::param(format!(
            "signal is {} Hz but the spectrogram expects {} Hz; resample first",
            signal.sample_rate_hz(),
            cfg.sample_rate_hz
        )));
    }
    let power = power_spectrum_frames(signal, cfg)?;
    let bank = mel_filterbank(cfg)?;
    let floor = cfg.log_floor;
    let values = power.dot(&bank.weights.t()).mapv(|v| v.max(floor).ln());
    let sr = cfg.sample_rate_hz as f64;
    let frame_times_s = (0..values.nrows())
        .map(|i| (i * cfg.hop) as f64 / sr + cfg.window_len as f64 / (2.0 * sr))
        .collect();
    Ok(MelSpectrogram {
        values,
        frame_times_s,
        empty_filters: bank.empty_rows,
    })
}
