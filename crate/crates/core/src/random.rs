//! Deterministic random sampling.
//!
//! Every stochastic routine in the crate draws from an explicit [`RngHandle`],
//! a ChaCha8 stream keyed by a 64-bit seed. ChaCha8 output is specified
//! bit-for-bit, so a given seed yields the same samples on every platform.

use rand::distr::{Distribution, Open01};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, Poisson, StandardNormal};

use crate::error::{Error, Result};

/// Seeded ChaCha8 generator. Not meant to be shared between threads; derive
/// one handle per unit of work instead.
#[derive(Debug, Clone)]
pub struct RngHandle {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngHandle {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in `[lo, hi)`; returns `lo` when the interval is empty.
    /// Always consumes exactly one value so fixed and random spans keep the
    /// stream aligned.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u: f64 = self.rng.random();
        if hi > lo {
            lo + (hi - lo) * u
        } else {
            lo
        }
    }

    /// Uniform draw in the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        Open01.sample(&mut self.rng)
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        let u: f64 = self.rng.random();
        u < p
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn poisson(&mut self, mean: f64) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        let d = Poisson::new(mean).expect("positive finite mean");
        let n: f64 = d.sample(&mut self.rng);
        n as u64
    }
}

impl RngCore for RngHandle {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for sample `index` of class `class` under `master`.
///
/// For a fixed master seed the map `(class, index) -> seed` is injective as
/// long as `class < 2^24` and `index < 2^40`: the pair is packed into one
/// word and passed through a bijective mixer.
pub fn derive_seed(master: u64, class: usize, index: usize) -> u64 {
    debug_assert!((class as u64) < (1 << 24) && (index as u64) < (1 << 40));
    let packed = ((class as u64) << 40) | index as u64;
    splitmix64(splitmix64(master).wrapping_add(packed))
}

/// Rayleigh(σ) draw by CDF inversion, density (x/σ²)·exp(-x²/2σ²).
pub fn sample_rayleigh(sigma: f64, rng: &mut RngHandle) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param(format!("rayleigh sigma must be > 0, got {sigma}")));
    }
    Ok(rayleigh_unchecked(sigma, rng))
}

pub(crate) fn rayleigh_unchecked(sigma: f64, rng: &mut RngHandle) -> f64 {
    let u = rng.open01();
    sigma * (-2.0 * u.ln()).sqrt()
}

/// K-distributed amplitude via the compound form: texture z ~ Gamma(k, θ),
/// then speckle x ~ Rayleigh(√(z/2)), so E[x²] = E[z] = kθ.
pub fn sample_k(k_shape: f64, k_scale: f64, rng: &mut RngHandle) -> Result<f64> {
    let gamma = k_texture(k_shape, k_scale)?;
    Ok(k_unchecked(&gamma, rng))
}

pub(crate) fn k_texture(k_shape: f64, k_scale: f64) -> Result<Gamma<f64>> {
    if !(k_shape > 0.0 && k_shape.is_finite() && k_scale > 0.0 && k_scale.is_finite()) {
        return Err(Error::param(format!(
            "K shape and scale must be > 0, got k={k_shape}, theta={k_scale}"
        )));
    }
    Gamma::new(k_shape, k_scale).map_err(|e| Error::param(e.to_string()))
}

pub(crate) fn k_unchecked(texture: &Gamma<f64>, rng: &mut RngHandle) -> f64 {
    // tiny shapes can underflow the texture to exactly zero
    let z = texture.sample(rng).max(f64::MIN_POSITIVE);
    rayleigh_unchecked((z / 2.0).sqrt(), rng)
}
