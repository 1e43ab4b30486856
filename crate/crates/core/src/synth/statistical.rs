use std::f64::consts::TAU;

use super::envelope::{cosine_crossfade, n_levels, segment_len_samples};
use super::{finish, noise, ClassConfig, DatasetSpec};
use crate::error::Result;
use crate::model::AmplitudeModel;
use crate::random::{k_texture, k_unchecked, rayleigh_unchecked, RngHandle};
use crate::SignalBuffer;

/// `count` envelope levels, each Rayleigh(σ) with probability p, else K(k, θ).
pub fn mixture_levels(model: &AmplitudeModel, count: usize, rng: &mut RngHandle) -> Result<Vec<f64>> {
    model.validate()?;
    let texture = k_texture(model.k_shape, model.k_scale)?;
    Ok((0..count)
        .map(|_| {
            if rng.bernoulli(model.p_rayleigh) {
                rayleigh_unchecked(model.rayleigh_sigma, rng)
            } else {
                k_unchecked(&texture, rng)
            }
        })
        .collect())
}

/// Adds `env(t)·sin(2πft + φ)` to `out`.
pub(crate) fn add_tone(out: &mut [f64], freq_hz: f64, phase: f64, sample_rate_hz: u32, env: impl Fn(usize) -> f64) {
    let w = TAU * freq_hz / sample_rate_hz as f64;
    for (i, s) in out.iter_mut().enumerate() {
        *s += env(i) * (w * i as f64 + phase).sin();
    }
}

pub(crate) fn add_noise(out: &mut [f64], class: &ClassConfig, sample_rate_hz: u32, rng: &mut RngHandle) -> Result<()> {
    let model = class.noise.realize(rng);
    let bg = noise::background_noise_parts(&model, out.len(), sample_rate_hz, rng)?;
    for (s, b) in out.iter_mut().zip(bg.total()) {
        *s += b;
    }
    Ok(())
}

/// Tones with segment-wise mixture envelopes over colored background noise.
pub fn gen_statistical_sample(class: &ClassConfig, spec: &DatasetSpec, rng: &mut RngHandle) -> Result<SignalBuffer> {
    let n = spec.n_samples();
    let sr = spec.sample_rate_hz;
    let seg = segment_len_samples(spec.envelope_segment_s, sr);
    let mut out = vec![0.0; n];
    for &f in &class.frequencies_hz {
        let phase = rng.uniform(0.0, TAU);
        let levels = mixture_levels(&class.amplitude_model, n_levels(n, seg), rng)?;
        let env = cosine_crossfade(&levels, seg, n);
        add_tone(&mut out, f, phase, sr, |i| env[i]);
    }
    add_noise(&mut out, class, sr, rng)?;
    Ok(finish(out, sr))
}
