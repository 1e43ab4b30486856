//! Parameter types shared by the generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::RngHandle;

/// Closed interval a parameter is drawn from, once per generated sample.
/// `lo == hi` pins the parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const fn fixed(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(Error::param(format!(
                "{what}: range [{}, {}] is not a finite ordered interval",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn sample(&self, rng: &mut RngHandle) -> f64 {
        rng.uniform(self.lo, self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Envelope amplitude law: Rayleigh(σ) with probability `p_rayleigh`,
/// otherwise K(k, θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeModel {
    pub rayleigh_sigma: f64,
    pub k_shape: f64,
    pub k_scale: f64,
    pub p_rayleigh: f64,
}

impl Default for AmplitudeModel {
    /// Mean powers 2σ² = 0.5 (Rayleigh) and kθ = 0.6 (K).
    fn default() -> Self {
        Self {
            rayleigh_sigma: 0.5,
            k_shape: 1.5,
            k_scale: 0.4,
            p_rayleigh: 0.5,
        }
    }
}

impl AmplitudeModel {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.rayleigh_sigma) || !positive(self.k_shape) || !positive(self.k_scale) {
            return Err(Error::param(
                "amplitude model: sigma, k and theta must be strictly positive",
            ));
        }
        if !(0.0..=1.0).contains(&self.p_rayleigh) {
            return Err(Error::param("amplitude model: p must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Gaussian blend weight centre and width, both in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlendPlan {
    pub center_s: f64,
    pub width_s: f64,
}

impl BlendPlan {
    pub fn new(center_s: f64, width_s: f64) -> Result<Self> {
        if !(width_s > 0.0 && width_s.is_finite() && center_s.is_finite()) {
            return Err(Error::param(format!(
                "blend plan needs finite centre and positive width, got ({center_s}, {width_s})"
            )));
        }
        Ok(Self { center_s, width_s })
    }
}

/// w(t) = exp(-(t - μ)² / 2σ²).
pub fn blend_weight(t_s: f64, plan: &BlendPlan) -> f64 {
    let d = t_s - plan.center_s;
    (-(d * d) / (2.0 * plan.width_s * plan.width_s)).exp()
}

/// Realized sinusoidal modulation: factor 1 + depth·sin(2π·rate·t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationPlan {
    pub depth: f64,
    pub rate_hz: f64,
}

impl ModulationPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.depth >= 0.0 && self.rate_hz > 0.0) {
            return Err(Error::param(format!(
                "modulation needs depth >= 0 and rate > 0, got ({}, {})",
                self.depth, self.rate_hz
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn factor(&self, t_s: f64) -> f64 {
        1.0 + self.depth * (std::f64::consts::TAU * self.rate_hz * t_s).sin()
    }
}

/// Harmonic stack f_k = k·f_c + δ_k with δ_k ~ U[-jitter, +jitter].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicPlan {
    pub base_hz: f64,
    pub jitter_hz: f64,
    pub n_harmonics: usize,
}

impl HarmonicPlan {
    pub fn new(base_hz: f64) -> Self {
        Self {
            base_hz,
            jitter_hz: 50.0,
            n_harmonics: 3,
        }
    }

    /// Checks that the highest possible harmonic stays below Nyquist.
    pub fn validate(&self, sample_rate_hz: u32) -> Result<()> {
        if !(self.base_hz > 0.0 && self.jitter_hz >= 0.0 && self.n_harmonics > 0) {
            return Err(Error::param(
                "harmonics need positive base, non-negative jitter and at least one harmonic",
            ));
        }
        let top = self.n_harmonics as f64 * self.base_hz + self.jitter_hz;
        let nyquist = sample_rate_hz as f64 / 2.0;
        if top >= nyquist {
            return Err(Error::param(format!(
                "harmonic {} of {} Hz (+{} Hz jitter) reaches {top} Hz >= Nyquist {nyquist} Hz",
                self.n_harmonics, self.base_hz, self.jitter_hz
            )));
        }
        Ok(())
    }

    pub fn realize(&self, sample_rate_hz: u32, rng: &mut RngHandle) -> Result<Vec<f64>> {
        self.validate(sample_rate_hz)?;
        Ok((1..=self.n_harmonics)
            .map(|k| k as f64 * self.base_hz + rng.uniform(-self.jitter_hz, self.jitter_hz))
            .collect())
    }
}

/// Realized background noise: colored noise of RMS `level` with power
/// spectrum ∝ 1/f^slope, plus Poisson-timed impulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub level: f64,
    pub impulse_rate_per_s: f64,
    pub impulse_amp_range: (f64, f64),
    pub spectral_slope: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.impulse_amp_range;
        if !(self.level >= 0.0 && self.impulse_rate_per_s >= 0.0 && lo <= hi)
            || !self.spectral_slope.is_finite()
        {
            return Err(Error::param(
                "noise needs level >= 0, impulse rate >= 0 and an ordered amplitude range",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn blend_weight_landmarks() {
        let plan = BlendPlan::new(2.0, 0.75).unwrap();
        assert_eq!(blend_weight(2.0, &plan), 1.0);
        let half = 0.75 * (2.0 * 2f64.ln()).sqrt();
        assert!((blend_weight(2.0 + half, &plan) - 0.5).abs() < 1e-12);
        assert!((blend_weight(2.0 - half, &plan) - 0.5).abs() < 1e-12);
        assert!(blend_weight(2.0 + 10.0 * 0.75, &plan) < 1e-21);
    }

    #[test]
    fn blend_plan_rejects_zero_width() {
        assert!(BlendPlan::new(1.0, 0.0).is_err());
        assert!(BlendPlan::new(1.0, -1.0).is_err());
    }

    proptest! {
        // dyadic offsets keep μ ± δ exact, so the comparison is bitwise
        #[test]
        fn blend_weight_is_symmetric(mu in -4096i32..4096, delta in 0i32..8192, width in 1u32..4096) {
            let plan = BlendPlan::new(mu as f64 / 1024.0, width as f64 / 1024.0).unwrap();
            let d = delta as f64 / 1024.0;
            let up = blend_weight(plan.center_s + d, &plan);
            let down = blend_weight(plan.center_s - d, &plan);
            prop_assert_eq!(up.to_bits(), down.to_bits());
            prop_assert!(up > 0.0 || d > 0.0);
            prop_assert!(up <= 1.0);
        }
    }

    #[test]
    fn harmonics_within_jitter() {
        let plan = HarmonicPlan::new(2200.0);
        let mut rng = RngHandle::new(8);
        for _ in 0..200 {
            let f = plan.realize(32_000, &mut rng).unwrap();
            assert!((2150.0..=2250.0).contains(&f[0]));
            assert!((4350.0..=4450.0).contains(&f[1]));
            assert!((6550.0..=6650.0).contains(&f[2]));
        }
    }

    #[test]
    fn harmonics_reject_aliasing() {
        let plan = HarmonicPlan::new(5320.0);
        assert!(plan.validate(32_000).is_err());
        assert!(HarmonicPlan::new(5300.0).validate(32_000).is_ok());
    }

    #[test]
    fn amplitude_model_validation() {
        assert!(AmplitudeModel::default().validate().is_ok());
        let bad = AmplitudeModel {
            p_rayleigh: 1.5,
            ..AmplitudeModel::default()
        };
        assert!(bad.validate().is_err());
        let bad = AmplitudeModel {
            k_scale: 0.0,
            ..AmplitudeModel::default()
        };
        assert!(bad.validate().is_err());
    }
}
