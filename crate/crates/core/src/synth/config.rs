use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AmplitudeModel, HarmonicPlan, NoiseModel, Span};
use crate::random::RngHandle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    Statistical,
    Structural,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transition {
    None,
    KToRayleigh,
    RayleighToK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulationSpeed {
    Slow,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeShape {
    Triangular,
    ExpDecay,
    Plateau,
    Ramp,
}

macro_rules! str_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(&self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().replace(['-', ' '], "_").as_str() {
                    $($name => Ok($ty::$variant),)+
                    other => Err(Error::param(format!(
                        concat!("unknown ", stringify!($ty), " `{}` (expected one of: ", $($name, " "),+, ")"),
                        other
                    ))),
                }
            }
        }
    };
}

str_enum!(DatasetKind { Statistical => "statistical", Structural => "structural", Mixed => "mixed" });
str_enum!(Transition { None => "none", KToRayleigh => "k_to_rayleigh", RayleighToK => "rayleigh_to_k" });
str_enum!(ModulationSpeed { Slow => "slow", Fast => "fast" });
str_enum!(EnvelopeShape { Triangular => "triangular", ExpDecay => "exp_decay", Plateau => "plateau", Ramp => "ramp" });

impl DatasetKind {
    /// Tones per class: base frequency only for structural stacks.
    pub fn tones_per_class(&self) -> usize {
        match self {
            DatasetKind::Statistical => 3,
            DatasetKind::Structural => 1,
            DatasetKind::Mixed => 4,
        }
    }
}

impl ModulationSpeed {
    /// Slow and fast halves of the 1-3 Hz modulation range.
    pub fn rate_range(&self) -> Span {
        match self {
            ModulationSpeed::Slow => Span::new(1.0, 1.7),
            ModulationSpeed::Fast => Span::new(2.3, 3.0),
        }
    }
}

/// Taper length of the plateau envelope, as a fraction of the clip.
const PLATEAU_TAPER: f64 = 0.1;
/// Decay constant of the exponential envelope over normalized time.
const EXP_DECAY_RATE: f64 = 4.0;

impl EnvelopeShape {
    /// Envelope value at normalized time `u` in [0, 1].
    pub fn value(&self, u: f64) -> f64 {
        match self {
            EnvelopeShape::Triangular => 1.0 - (2.0 * u - 1.0).abs(),
            EnvelopeShape::ExpDecay => (-EXP_DECAY_RATE * u).exp(),
            EnvelopeShape::Plateau => {
                let edge = u.min(1.0 - u);
                if edge >= PLATEAU_TAPER {
                    1.0
                } else {
                    0.5 - 0.5 * (std::f64::consts::PI * edge / PLATEAU_TAPER).cos()
                }
            }
            EnvelopeShape::Ramp => u,
        }
    }

    /// Shapes assigned to classes 1-4 of the structural dataset.
    pub const BY_CLASS: [EnvelopeShape; 4] = [
        EnvelopeShape::Triangular,
        EnvelopeShape::ExpDecay,
        EnvelopeShape::Plateau,
        EnvelopeShape::Ramp,
    ];
}

/// Background noise ranges, realized once per sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// RMS of the colored component.
    pub level: Span,
    pub impulse_rate_per_s: f64,
    pub impulse_amp: Span,
    /// Power spectrum exponent: 0 white, 1 pink.
    pub spectral_slope: f64,
}

impl NoiseSpec {
    /// Colored noise with impulses, for the statistical and mixed datasets.
    pub fn ambient() -> Self {
        Self {
            level: Span::new(0.006, 0.01),
            impulse_rate_per_s: 1.0,
            impulse_amp: Span::new(0.02, 0.06),
            spectral_slope: 1.0,
        }
    }

    /// Faint white Gaussian noise for the structural dataset.
    pub fn faint_white() -> Self {
        Self {
            level: Span::fixed(0.005),
            impulse_rate_per_s: 0.0,
            impulse_amp: Span::new(0.02, 0.06),
            spectral_slope: 0.0,
        }
    }

    pub fn silent() -> Self {
        Self {
            level: Span::fixed(0.0),
            impulse_rate_per_s: 0.0,
            ..Self::ambient()
        }
    }

    pub fn realize(&self, rng: &mut RngHandle) -> NoiseModel {
        NoiseModel {
            level: self.level.sample(rng),
            impulse_rate_per_s: self.impulse_rate_per_s,
            impulse_amp_range: (self.impulse_amp.lo, self.impulse_amp.hi),
            spectral_slope: self.spectral_slope,
        }
    }
}

/// Per-class synthesis parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassConfig {
    pub class_name: String,
    /// Tone frequencies; the structural dataset uses a single base frequency.
    pub frequencies_hz: Vec<f64>,
    pub amplitude_transition: Transition,
    pub modulation_speed: ModulationSpeed,
    pub modulation_depth: Span,
    pub modulation_rate_hz: Span,
    pub envelope_shape: EnvelopeShape,
    pub jitter_hz: f64,
    pub n_harmonics: usize,
    pub noise: NoiseSpec,
    pub amplitude_model: AmplitudeModel,
    /// Blend centre as a fraction of the clip duration.
    pub blend_center_frac: Span,
    pub blend_width_s: Span,
}

impl ClassConfig {
    pub fn new(class_name: impl Into<String>, frequencies_hz: Vec<f64>) -> Self {
        let speed = ModulationSpeed::Slow;
        Self {
            class_name: class_name.into(),
            frequencies_hz,
            amplitude_transition: Transition::None,
            modulation_speed: speed,
            modulation_depth: Span::new(0.1, 0.3),
            modulation_rate_hz: speed.rate_range(),
            envelope_shape: EnvelopeShape::Triangular,
            jitter_hz: 50.0,
            n_harmonics: 3,
            noise: NoiseSpec::ambient(),
            amplitude_model: AmplitudeModel::default(),
            blend_center_frac: Span::new(0.2, 0.8),
            blend_width_s: Span::new(0.5, 1.0),
        }
    }

    pub fn with_speed(mut self, speed: ModulationSpeed) -> Self {
        self.modulation_speed = speed;
        self.modulation_rate_hz = speed.rate_range();
        self
    }

    pub fn harmonic_plan(&self) -> HarmonicPlan {
        HarmonicPlan {
            base_hz: self.frequencies_hz.first().copied().unwrap_or(0.0),
            jitter_hz: self.jitter_hz,
            n_harmonics: self.n_harmonics,
        }
    }

    /// Checks this class against a dataset kind and sample rate; errors name
    /// the offending class and field.
    pub fn validate(&self, kind: DatasetKind, sample_rate_hz: u32) -> Result<()> {
        let key = |field: &str| format!("class[{}].{field}", self.class_name);
        let wrap = |field: &str, e: Error| Error::config(key(field), e.to_string());
        if self.class_name.trim().is_empty() {
            return Err(Error::config("class.name", "class name is empty"));
        }
        let expected = kind.tones_per_class();
        if self.frequencies_hz.len() != expected {
            return Err(Error::config(
                key("frequencies_hz"),
                format!(
                    "{kind} classes need {expected} frequencies, got {}",
                    self.frequencies_hz.len()
                ),
            ));
        }
        let nyquist = sample_rate_hz as f64 / 2.0;
        for &f in &self.frequencies_hz {
            if !(f > 0.0 && f < nyquist) {
                return Err(Error::config(
                    key("frequencies_hz"),
                    format!("{f} Hz is outside (0, {nyquist}) Hz Nyquist range"),
                ));
            }
        }
        if kind == DatasetKind::Structural {
            self.harmonic_plan()
                .validate(sample_rate_hz)
                .map_err(|e| wrap("frequencies_hz", e))?;
        }
        if kind == DatasetKind::Mixed && self.amplitude_transition == Transition::None {
            return Err(Error::config(
                key("transition"),
                "mixed classes need k_to_rayleigh or rayleigh_to_k",
            ));
        }
        self.amplitude_model.validate().map_err(|e| wrap("amplitude", e))?;
        self.modulation_depth.validate("modulation depth").map_err(|e| wrap("modulation_depth", e))?;
        self.modulation_rate_hz.validate("modulation rate").map_err(|e| wrap("modulation_rate_hz", e))?;
        if self.modulation_depth.lo < 0.0 || self.modulation_rate_hz.lo <= 0.0 {
            return Err(Error::config(
                key("modulation_rate_hz"),
                "depth must be >= 0 and rate > 0",
            ));
        }
        self.blend_center_frac.validate("blend centre").map_err(|e| wrap("blend_center_frac", e))?;
        self.blend_width_s.validate("blend width").map_err(|e| wrap("blend_width_s", e))?;
        if self.blend_width_s.lo <= 0.0 {
            return Err(Error::config(key("blend_width_s"), "blend width must be > 0"));
        }
        let n = &self.noise;
        n.level.validate("noise level").map_err(|e| wrap("noise.level", e))?;
        n.impulse_amp.validate("impulse amplitude").map_err(|e| wrap("noise.impulse_amp", e))?;
        if n.level.lo < 0.0 || n.impulse_rate_per_s < 0.0 || !n.impulse_rate_per_s.is_finite() {
            return Err(Error::config(key("noise"), "noise level and impulse rate must be >= 0"));
        }
        if !n.spectral_slope.is_finite() {
            return Err(Error::config(key("noise.spectral_slope"), "slope must be finite"));
        }
        if !(self.jitter_hz >= 0.0) || self.n_harmonics == 0 {
            return Err(Error::config(key("jitter_hz"), "jitter must be >= 0 with >= 1 harmonic"));
        }
        Ok(())
    }
}

/// Whole-dataset plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    pub classes: Vec<ClassConfig>,
    pub samples_per_class: usize,
    pub duration_s: f64,
    pub sample_rate_hz: u32,
    pub master_seed: u64,
    /// Length of the segments envelope levels are drawn for.
    pub envelope_segment_s: f64,
    pub wav_format: crate::store::WavFormat,
}

impl DatasetSpec {
    fn base(kind: DatasetKind, classes: Vec<ClassConfig>) -> Self {
        Self {
            kind,
            classes,
            samples_per_class: 10_000,
            duration_s: 5.0,
            sample_rate_hz: 32_000,
            master_seed: 0,
            envelope_segment_s: 0.001,
            wav_format: crate::store::WavFormat::Float32,
        }
    }

    /// Adjacent classes share two of their three tones.
    pub fn statistical_default() -> Self {
        let sets = [
            [2200.0, 3500.0, 5000.0],
            [3500.0, 5000.0, 6500.0],
            [5000.0, 6500.0, 9000.0],
            [6500.0, 9000.0, 10500.0],
        ];
        let classes = sets
            .iter()
            .enumerate()
            .map(|(i, f)| ClassConfig::new(format!("Vessel {}", i + 1), f.to_vec()))
            .collect();
        Self::base(DatasetKind::Statistical, classes)
    }

    /// Base frequencies rise with the class index; one envelope shape each.
    pub fn structural_default() -> Self {
        let bases = [2500.0, 3500.0, 4800.0, 5200.0];
        let classes = bases
            .iter()
            .zip(EnvelopeShape::BY_CLASS)
            .enumerate()
            .map(|(i, (&f, shape))| ClassConfig {
                envelope_shape: shape,
                noise: NoiseSpec::faint_white(),
                ..ClassConfig::new(format!("Vessel {}", i + 1), vec![f])
            })
            .collect();
        Self::base(DatasetKind::Structural, classes)
    }

    /// The four vessel classes of the mixed-texture dataset.
    pub fn mixed_default() -> Self {
        use ModulationSpeed::{Fast, Slow};
        use Transition::{KToRayleigh, RayleighToK};
        let rows = [
            ([2200.0, 3500.0, 5000.0, 6500.0], KToRayleigh, Slow),
            ([3000.0, 4500.0, 6000.0, 7000.0], RayleighToK, Slow),
            ([9000.0, 10500.0, 12000.0, 13000.0], RayleighToK, Fast),
            ([10000.0, 11500.0, 13000.0, 14000.0], KToRayleigh, Fast),
        ];
        let classes = rows
            .iter()
            .enumerate()
            .map(|(i, (f, transition, speed))| ClassConfig {
                amplitude_transition: *transition,
                ..ClassConfig::new(format!("Vessel {}", i + 1), f.to_vec()).with_speed(*speed)
            })
            .collect();
        Self::base(DatasetKind::Mixed, classes)
    }

    pub fn default_for(kind: DatasetKind) -> Self {
        match kind {
            DatasetKind::Statistical => Self::statistical_default(),
            DatasetKind::Structural => Self::structural_default(),
            DatasetKind::Mixed => Self::mixed_default(),
        }
    }

    pub fn n_samples(&self) -> usize {
        (self.duration_s * self.sample_rate_hz as f64).round() as usize
    }

    pub fn total_samples(&self) -> usize {
        self.classes.len() * self.samples_per_class
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_rate_hz == 0 {
            return Err(Error::config("sample_rate_hz", "must be positive"));
        }
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) || self.n_samples() == 0 {
            return Err(Error::config("duration_s", "must be positive"));
        }
        if self.samples_per_class == 0 {
            return Err(Error::config("samples_per_class", "must be positive"));
        }
        if !(self.envelope_segment_s > 0.0 && self.envelope_segment_s.is_finite()) {
            return Err(Error::config("envelope_segment_s", "must be positive"));
        }
        if self.classes.is_empty() {
            return Err(Error::config("class", "at least one class is required"));
        }
        let mut slugs = HashSet::new();
        for c in &self.classes {
            c.validate(self.kind, self.sample_rate_hz)?;
            if !slugs.insert(super::class_slug(&c.class_name)) {
                return Err(Error::config(
                    format!("class[{}].name", c.class_name),
                    "class names must be unique",
                ));
            }
        }
        Ok(())
    }
}
