//! Framing, spectral analysis, resampling and segmentation.

mod mel;
mod resample;
mod segment;
mod stft;

pub use mel::{hz_to_mel, log_mel, mel_filterbank, mel_to_hz, MelFilterbank, MelSpectrogram};
pub use resample::{resample, KAISER_BETA, TAPS_PER_PHASE};
pub use segment::segment;
pub use stft::{hann_window, power_spectrum_frames, stft_magnitude, SpectrogramConfig};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Number of non-centered frames of `frame_len` samples at `hop` spacing.
pub fn frame_count(len: usize, frame_len: usize, hop: usize) -> usize {
    if frame_len == 0 || hop == 0 || len < frame_len {
        0
    } else {
        (len - frame_len) / hop + 1
    }
}

/// Iterator over non-centered frames; a trailing partial frame is dropped.
pub fn frames(samples: &[f64], frame_len: usize, hop: usize) -> impl Iterator<Item = &[f64]> + '_ {
    (0..frame_count(samples.len(), frame_len, hop)).map(move |i| &samples[i * hop..i * hop + frame_len])
}

/// Full complex DFT of a real sequence.
pub(crate) fn real_dft(samples: &[f64], len: usize) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&s| Complex::new(s, 0.0)).collect();
    buf.resize(len, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf
}

/// Inverse DFT, unnormalized (caller divides by the length).
pub(crate) fn inverse_dft(spectrum: &mut [Complex<f64>]) {
    FftPlanner::new().plan_fft_inverse(spectrum.len()).process(spectrum);
}
