use std::f64::consts::TAU;

use super::envelope::{cosine_crossfade, n_levels, segment_len_samples};
use super::statistical::{add_noise, add_tone, mixture_levels};
use super::{finish, ClassConfig, DatasetSpec, Transition};
use crate::error::Result;
use crate::model::{blend_weight, AmplitudeModel, BlendPlan, ModulationPlan};
use crate::random::RngHandle;
use crate::SignalBuffer;

/// Weight of the Rayleigh envelope at time `t_s`.
///
/// Rayleigh-to-K holds the Rayleigh envelope until the blend centre and then
/// hands over along the Gaussian shoulder; K-to-Rayleigh mirrors this.
/// Without a transition the envelope stays Rayleigh.
pub fn rayleigh_share(t_s: f64, transition: Transition, plan: &BlendPlan) -> f64 {
    match transition {
        Transition::None => 1.0,
        Transition::RayleighToK if t_s <= plan.center_s => 1.0,
        Transition::KToRayleigh if t_s >= plan.center_s => 1.0,
        _ => blend_weight(t_s, plan),
    }
}

/// Four tones whose envelopes move between Rayleigh and K texture, with
/// sinusoidal modulation and colored background noise.
pub fn gen_mixed_sample(class: &ClassConfig, spec: &DatasetSpec, rng: &mut RngHandle) -> Result<SignalBuffer> {
    let n = spec.n_samples();
    let sr = spec.sample_rate_hz;
    let duration = n as f64 / sr as f64;
    let blend = BlendPlan::new(
        class.blend_center_frac.sample(rng) * duration,
        class.blend_width_s.sample(rng),
    )?;
    let modulation = ModulationPlan {
        depth: class.modulation_depth.sample(rng),
        rate_hz: class.modulation_rate_hz.sample(rng),
    };
    modulation.validate()?;
    let scale: Vec<f64> = (0..n)
        .map(|i| modulation.factor(i as f64 / sr as f64))
        .collect();
    let share: Vec<f64> = (0..n)
        .map(|i| rayleigh_share(i as f64 / sr as f64, class.amplitude_transition, &blend))
        .collect();

    let seg = segment_len_samples(spec.envelope_segment_s, sr);
    let count = n_levels(n, seg);
    let rayleigh = AmplitudeModel { p_rayleigh: 1.0, ..class.amplitude_model };
    let k = AmplitudeModel { p_rayleigh: 0.0, ..class.amplitude_model };
    let mut out = vec![0.0; n];
    for &f in &class.frequencies_hz {
        let phase = rng.uniform(0.0, TAU);
        let env_r = cosine_crossfade(&mixture_levels(&rayleigh, count, rng)?, seg, n);
        let env_k = cosine_crossfade(&mixture_levels(&k, count, rng)?, seg, n);
        add_tone(&mut out, f, phase, sr, |i| {
            let alpha = share[i] * env_r[i] + (1.0 - share[i]) * env_k[i];
            alpha * scale[i]
        });
    }
    add_noise(&mut out, class, sr, rng)?;
    Ok(finish(out, sr))
}
