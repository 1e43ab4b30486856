use std::f64::consts::TAU;

use super::statistical::{add_noise, add_tone};
use super::{finish, ClassConfig, DatasetSpec};
use crate::error::Result;
use crate::random::RngHandle;
use crate::SignalBuffer;

/// Jittered equal-amplitude harmonic stack under the class envelope shape.
pub fn gen_structural_sample(class: &ClassConfig, spec: &DatasetSpec, rng: &mut RngHandle) -> Result<SignalBuffer> {
    let n = spec.n_samples();
    let sr = spec.sample_rate_hz;
    let freqs = class.harmonic_plan().realize(sr, rng)?;
    let last = (n.max(2) - 1) as f64;
    let env: Vec<f64> = (0..n).map(|i| class.envelope_shape.value(i as f64 / last)).collect();
    let mut out = vec![0.0; n];
    for f in freqs {
        let phase = rng.uniform(0.0, TAU);
        add_tone(&mut out, f, phase, sr, |i| env[i]);
    }
    add_noise(&mut out, class, sr, rng)?;
    Ok(finish(out, sr))
}
