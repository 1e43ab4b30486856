//! Band-limited rational-ratio resampling with a Kaiser-windowed sinc.
//!
//! For a ratio L/M (reduced), output sample n sits at input position
//! n·M/L = base + φ/L. Each of the L phases φ owns a 64-tap kernel spanning
//! input samples base-31 ..= base+32.

use crate::SignalBuffer;

pub const TAPS_PER_PHASE: usize = 64;
/// ~80 dB stopband.
pub const KAISER_BETA: f64 = 8.6;
/// Passband edge as a fraction of the lower Nyquist frequency.
const ROLLOFF: f64 = 0.95;
/// Above this many phases kernels are computed per output sample instead of
/// tabulated.
const MAX_TABLE_PHASES: u64 = 4096;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Zeroth-order modified Bessel function of the first kind.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let (mut term, mut sum, mut k) = (1.0, 1.0, 1.0);
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

struct Kernel {
    cutoff: f64,
    half: f64,
    i0_beta: f64,
}

impl Kernel {
    fn new(cutoff: f64) -> Self {
        Self {
            cutoff,
            half: (TAPS_PER_PHASE / 2) as f64,
            i0_beta: bessel_i0(KAISER_BETA),
        }
    }

    fn at(&self, u: f64) -> f64 {
        let r = u / self.half;
        if r.abs() >= 1.0 {
            return 0.0;
        }
        let x = std::f64::consts::PI * self.cutoff * u;
        let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
        self.cutoff * sinc * bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / self.i0_beta
    }

    /// Taps for fractional offset `frac`, normalized to unit DC gain.
    fn taps(&self, frac: f64) -> [f64; TAPS_PER_PHASE] {
        let mut taps = [0.0; TAPS_PER_PHASE];
        let first = 1 - (TAPS_PER_PHASE as i64) / 2;
        for (t, j) in taps.iter_mut().zip(first..) {
            *t = self.at(frac - j as f64);
        }
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        taps
    }
}

/// Resamples to `target_hz`. Returns an identical copy when the rates match.
pub fn resample(signal: &SignalBuffer, target_hz: u32) -> SignalBuffer {
    let source_hz = signal.sample_rate_hz();
    if target_hz == source_hz || signal.is_empty() {
        return SignalBuffer::new(signal.samples().to_vec(), target_hz.max(1))
            .expect("finite input");
    }
    let g = gcd(source_hz as u64, target_hz as u64);
    let up = target_hz as u64 / g;
    let down = source_hz as u64 / g;
    let kernel = Kernel::new(ROLLOFF * (up as f64 / down as f64).min(1.0));
    let table: Option<Vec<[f64; TAPS_PER_PHASE]>> = (up <= MAX_TABLE_PHASES)
        .then(|| (0..up).map(|p| kernel.taps(p as f64 / up as f64)).collect());

    let x = signal.samples();
    let n_in = x.len() as u64;
    let n_out = (n_in * up).div_ceil(down);
    let first = 1 - (TAPS_PER_PHASE as i64) / 2;
    let out = (0..n_out)
        .map(|n| {
            let pos = n * down;
            let base = (pos / up) as i64;
            let phase = pos % up;
            let owned;
            let taps = match &table {
                Some(t) => &t[phase as usize],
                None => {
                    owned = kernel.taps(phase as f64 / up as f64);
                    &owned
                }
            };
            taps.iter()
                .zip(first..)
                .filter_map(|(&h, j)| {
                    let i = base + j;
                    (0..n_in as i64).contains(&i).then(|| h * x[i as usize])
                })
                .sum()
        })
        .collect();
    SignalBuffer::new(out, target_hz).expect("finite output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::real_dft;
    use std::f64::consts::TAU;

    fn tone(freq: f64, sr: u32, seconds: f64, amp: f64) -> SignalBuffer {
        let n = (seconds * sr as f64) as usize;
        let s = (0..n).map(|i| amp * (TAU * freq * i as f64 / sr as f64).sin()).collect();
        SignalBuffer::new(s, sr).unwrap()
    }

    #[test]
    fn same_rate_is_identity() {
        let x = tone(440.0, 32_000, 0.1, 0.5);
        let y = resample(&x, 32_000);
        assert_eq!(x, y);
    }

    #[test]
    fn tone_peak_survives_48k_to_32k() {
        let y = resample(&tone(1000.0, 48_000, 1.0, 0.5), 32_000);
        assert_eq!(y.len(), 32_000);
        let spec = real_dft(y.samples(), y.len());
        let peak = (0..y.len() / 2)
            .max_by(|&a, &b| spec[a].norm().total_cmp(&spec[b].norm()))
            .unwrap();
        // 1 Hz bins over a one-second buffer
        assert!((peak as f64 - 1000.0).abs() <= 1.0, "peak at bin {peak}");
    }

    #[test]
    fn downsampling_preserves_rms() {
        for (from, to) in [(48_000, 32_000), (44_100, 32_000), (96_000, 32_000)] {
            let x = tone(1000.0, from, 1.0, 0.5);
            let y = resample(&x, to);
            // trim the kernel edges
            let inner = &y.samples()[64..y.len() - 64];
            let rms = (inner.iter().map(|v| v * v).sum::<f64>() / inner.len() as f64).sqrt();
            let expected = 0.5 / 2f64.sqrt();
            assert!((rms / expected - 1.0).abs() < 0.01, "{from}->{to}: {rms}");
        }
    }

    #[test]
    fn upsampling_keeps_length_ratio() {
        let y = resample(&tone(500.0, 16_000, 0.5, 0.5), 32_000);
        assert_eq!(y.len(), 16_000);
        assert_eq!(y.sample_rate_hz(), 32_000);
    }

    #[test]
    fn resampler_is_linear() {
        let a = tone(700.0, 44_100, 0.05, 0.3);
        let b = tone(2300.0, 44_100, 0.05, 0.2);
        let mix: Vec<f64> = a.samples().iter().zip(b.samples()).map(|(x, y)| 2.0 * x - 0.5 * y).collect();
        let mix = SignalBuffer::new(mix, 44_100).unwrap();
        let (ra, rb, rm) = (resample(&a, 32_000), resample(&b, 32_000), resample(&mix, 32_000));
        for ((x, y), m) in ra.samples().iter().zip(rb.samples()).zip(rm.samples()) {
            assert!((2.0 * x - 0.5 * y - m).abs() < 1e-6);
        }
    }

    #[test]
    fn odd_ratio_uses_on_the_fly_kernels() {
        // 32000/44101 does not reduce: 32000 phases
        let y = resample(&tone(1000.0, 44_101, 0.02, 0.5), 32_000);
        assert_eq!(y.len(), ((882u64 * 32_000).div_ceil(44_101)) as usize);
        assert!(y.samples().iter().all(|v| v.abs() < 0.6));
    }
}
