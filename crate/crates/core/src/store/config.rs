//! Dataset config files (TOML).
//!
//! ```toml
//! schema_version = 1
//! kind = "mixed"            # statistical | structural | mixed
//! samples_per_class = 10000
//! duration_s = 5.0
//! sample_rate_hz = 32000
//! seed = 0
//! envelope_segment_s = 0.001
//! wav_format = "float32"    # or "pcm16"
//!
//! [[class]]
//! name = "Vessel 1"
//! frequencies_khz = [2.2, 3.5, 5.0, 6.5]   # or frequencies_hz
//! transition = "k_to_rayleigh"
//! modulation = "slow"
//! ```
//!
//! Ranges are written `[lo, hi]`; a bare number pins the value. Keys a class
//! omits come from the built-in class at the same position for the chosen
//! kind (or from the first built-in class beyond that). Without any `[[class]]`
//! table the built-in classes are used. Unknown keys produce warnings.

use std::path::Path;

use toml::{Table, Value};

use super::write_atomic;
use crate::error::{Error, Result};
use crate::model::{AmplitudeModel, Span};
use crate::synth::{ClassConfig, DatasetKind, DatasetSpec};
use crate::CONFIG_SCHEMA_VERSION;

#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub spec: DatasetSpec,
    pub warnings: Vec<String>,
}

pub fn read_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

struct Reader<'a> {
    table: &'a Table,
    prefix: String,
    used: Vec<&'static str>,
}

impl<'a> Reader<'a> {
    fn new(table: &'a Table, prefix: impl Into<String>) -> Self {
        Self { table, prefix: prefix.into(), used: Vec::new() }
    }

    fn key(&self, k: &str) -> String {
        if self.prefix.is_empty() {
            k.to_string()
        } else {
            format!("{}.{k}", self.prefix)
        }
    }

    fn get(&mut self, k: &'static str) -> Option<&'a Value> {
        self.used.push(k);
        self.table.get(k)
    }

    fn mismatch(&self, k: &str, want: &str, got: &Value) -> Error {
        Error::config(self.key(k), format!("expected {want}, found {}", got.type_str()))
    }

    fn float(&mut self, k: &'static str, slot: &mut f64) -> Result<()> {
        if let Some(v) = self.get(k) {
            *slot = as_f64(v).ok_or_else(|| self.mismatch(k, "a number", v))?;
        }
        Ok(())
    }

    fn uint<T: TryFrom<i64>>(&mut self, k: &'static str, slot: &mut T) -> Result<()> {
        if let Some(v) = self.get(k) {
            let i = v.as_integer().ok_or_else(|| self.mismatch(k, "an integer", v))?;
            *slot = T::try_from(i)
                .map_err(|_| Error::config(self.key(k), format!("{i} is out of range")))?;
        }
        Ok(())
    }

    fn parsed<T: std::str::FromStr<Err = Error>>(&mut self, k: &'static str, slot: &mut T) -> Result<()> {
        if let Some(v) = self.get(k) {
            let s = v.as_str().ok_or_else(|| self.mismatch(k, "a string", v))?;
            *slot = s
                .parse()
                .map_err(|e: Error| Error::config(self.key(k), e.to_string()))?;
        }
        Ok(())
    }

    fn span(&mut self, k: &'static str, slot: &mut Span) -> Result<()> {
        if let Some(v) = self.get(k) {
            *slot = match v {
                Value::Array(a) if a.len() == 2 => match (as_f64(&a[0]), as_f64(&a[1])) {
                    (Some(lo), Some(hi)) => Span::new(lo, hi),
                    _ => return Err(self.mismatch(k, "[lo, hi] numbers", v)),
                },
                other => Span::fixed(
                    as_f64(other).ok_or_else(|| self.mismatch(k, "a number or [lo, hi]", other))?,
                ),
            };
            slot.validate(&self.key(k))
                .map_err(|e| Error::config(self.key(k), e.to_string()))?;
        }
        Ok(())
    }

    fn freq_list(&mut self, k: &'static str, scale: f64) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.get(k) else { return Ok(None) };
        let arr = v.as_array().ok_or_else(|| self.mismatch(k, "a list of numbers", v))?;
        arr.iter()
            .map(|x| {
                as_f64(x)
                    // kHz values like 2.2 are not exact in binary; snap to µHz
                    .map(|f| (f * scale * 1e6).round() / 1e6)
                    .ok_or_else(|| self.mismatch(k, "a list of numbers", v))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn sub(&mut self, k: &'static str) -> Result<Option<Reader<'a>>> {
        match self.get(k) {
            None => Ok(None),
            Some(Value::Table(t)) => Ok(Some(Reader::new(t, self.key(k)))),
            Some(v) => Err(self.mismatch(k, "a table", v)),
        }
    }

    fn unknown(&self, warnings: &mut Vec<String>) {
        for k in self.table.keys() {
            if !self.used.contains(&k.as_str()) {
                warnings.push(format!("unknown config key `{}` ignored", self.key(k)));
            }
        }
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn read_amplitude(r: &mut Reader, m: &mut AmplitudeModel, warnings: &mut Vec<String>) -> Result<()> {
    if let Some(mut a) = r.sub("amplitude")? {
        a.float("sigma", &mut m.rayleigh_sigma)?;
        a.float("k", &mut m.k_shape)?;
        a.float("theta", &mut m.k_scale)?;
        a.float("p_rayleigh", &mut m.p_rayleigh)?;
        a.unknown(warnings);
    }
    Ok(())
}

fn read_class(mut r: Reader, base: ClassConfig, warnings: &mut Vec<String>) -> Result<ClassConfig> {
    let mut c = base;
    if let Some(v) = r.get("name") {
        c.class_name = v.as_str().ok_or_else(|| r.mismatch("name", "a string", v))?.to_string();
    }
    r.prefix = format!("class[{}]", c.class_name);
    let khz = r.freq_list("frequencies_khz", 1e3)?;
    let hz = r.freq_list("frequencies_hz", 1.0)?;
    match (khz, hz) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                r.key("frequencies_hz"),
                "give frequencies_khz or frequencies_hz, not both",
            ))
        }
        (Some(f), None) | (None, Some(f)) => c.frequencies_hz = f,
        (None, None) => {}
    }
    r.parsed("transition", &mut c.amplitude_transition)?;
    let mut speed = c.modulation_speed;
    r.parsed("modulation", &mut speed)?;
    if speed != c.modulation_speed {
        c = c.with_speed(speed);
    }
    r.span("modulation_depth", &mut c.modulation_depth)?;
    r.span("modulation_rate_hz", &mut c.modulation_rate_hz)?;
    r.parsed("envelope", &mut c.envelope_shape)?;
    r.float("jitter_hz", &mut c.jitter_hz)?;
    r.uint("n_harmonics", &mut c.n_harmonics)?;
    r.span("blend_center_frac", &mut c.blend_center_frac)?;
    r.span("blend_width_s", &mut c.blend_width_s)?;
    read_amplitude(&mut r, &mut c.amplitude_model, warnings)?;
    if let Some(mut n) = r.sub("noise")? {
        n.span("level", &mut c.noise.level)?;
        n.float("impulse_rate_per_s", &mut c.noise.impulse_rate_per_s)?;
        n.span("impulse_amp", &mut c.noise.impulse_amp)?;
        n.float("spectral_slope", &mut c.noise.spectral_slope)?;
        n.unknown(warnings);
    }
    r.unknown(warnings);
    Ok(c)
}

/// Parses config text, fills defaults and validates the result.
pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("<file>", e.to_string().trim_end().to_string()))?;
    let mut warnings = Vec::new();
    if table.is_empty() {
        warnings.push("config is empty; using built-in mixed dataset defaults".to_string());
    }
    let mut r = Reader::new(&table, "");

    let mut version = CONFIG_SCHEMA_VERSION;
    r.uint("schema_version", &mut version)?;
    if version != CONFIG_SCHEMA_VERSION {
        return Err(Error::config(
            "schema_version",
            format!("unsupported version {version} (this build reads {CONFIG_SCHEMA_VERSION})"),
        ));
    }
    let mut kind = DatasetKind::Mixed;
    if r.table.contains_key("kind") {
        r.parsed("kind", &mut kind)?;
    } else if !table.is_empty() {
        warnings.push("no `kind` given; assuming mixed".to_string());
    }
    let defaults = DatasetSpec::default_for(kind);
    let mut spec = defaults.clone();
    r.uint("samples_per_class", &mut spec.samples_per_class)?;
    r.float("duration_s", &mut spec.duration_s)?;
    r.uint("sample_rate_hz", &mut spec.sample_rate_hz)?;
    r.float("envelope_segment_s", &mut spec.envelope_segment_s)?;
    r.parsed("wav_format", &mut spec.wav_format)?;
    if let Some(v) = r.get("seed") {
        spec.master_seed = match v {
            Value::Integer(i) if *i >= 0 => *i as u64,
            Value::String(s) => s
                .parse()
                .map_err(|_| Error::config("seed", format!("`{s}` is not a u64")))?,
            other => return Err(r.mismatch("seed", "a non-negative integer", other)),
        };
    }

    if let Some(v) = r.get("class") {
        let arr = v
            .as_array()
            .ok_or_else(|| r.mismatch("class", "an array of tables ([[class]])", v))?;
        spec.classes = arr
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let t = entry.as_table().ok_or_else(|| {
                    Error::config(format!("class[{i}]"), "expected a table")
                })?;
                let base = defaults
                    .classes
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| defaults.classes[0].clone());
                let base = ClassConfig { class_name: format!("Vessel {}", i + 1), ..base };
                read_class(Reader::new(t, format!("class[{i}]")), base, &mut warnings)
            })
            .collect::<Result<_>>()?;
    }
    r.unknown(&mut warnings);
    spec.validate()?;
    Ok(LoadedConfig { spec, warnings })
}

fn span_value(s: Span) -> Value {
    Value::Array(vec![Value::Float(s.lo), Value::Float(s.hi)])
}

/// Serializes a spec with every key explicit; `parse_config` reads it back
/// to an equal spec.
pub fn config_to_toml(spec: &DatasetSpec) -> String {
    let mut t = Table::new();
    t.insert("schema_version".into(), Value::Integer(CONFIG_SCHEMA_VERSION as i64));
    t.insert("kind".into(), Value::String(spec.kind.to_string()));
    t.insert("samples_per_class".into(), Value::Integer(spec.samples_per_class as i64));
    t.insert("duration_s".into(), Value::Float(spec.duration_s));
    t.insert("sample_rate_hz".into(), Value::Integer(spec.sample_rate_hz as i64));
    t.insert(
        "seed".into(),
        match i64::try_from(spec.master_seed) {
            Ok(i) => Value::Integer(i),
            Err(_) => Value::String(spec.master_seed.to_string()),
        },
    );
    t.insert("envelope_segment_s".into(), Value::Float(spec.envelope_segment_s));
    t.insert("wav_format".into(), Value::String(spec.wav_format.to_string()));
    let classes = spec
        .classes
        .iter()
        .map(|c| {
            let mut ct = Table::new();
            ct.insert("name".into(), Value::String(c.class_name.clone()));
            ct.insert(
                "frequencies_hz".into(),
                Value::Array(c.frequencies_hz.iter().map(|&f| Value::Float(f)).collect()),
            );
            ct.insert("transition".into(), Value::String(c.amplitude_transition.to_string()));
            ct.insert("modulation".into(), Value::String(c.modulation_speed.to_string()));
            ct.insert("modulation_depth".into(), span_value(c.modulation_depth));
            ct.insert("modulation_rate_hz".into(), span_value(c.modulation_rate_hz));
            ct.insert("envelope".into(), Value::String(c.envelope_shape.to_string()));
            ct.insert("jitter_hz".into(), Value::Float(c.jitter_hz));
            ct.insert("n_harmonics".into(), Value::Integer(c.n_harmonics as i64));
            ct.insert("blend_center_frac".into(), span_value(c.blend_center_frac));
            ct.insert("blend_width_s".into(), span_value(c.blend_width_s));
            let a = &c.amplitude_model;
            let mut at = Table::new();
            at.insert("sigma".into(), Value::Float(a.rayleigh_sigma));
            at.insert("k".into(), Value::Float(a.k_shape));
            at.insert("theta".into(), Value::Float(a.k_scale));
            at.insert("p_rayleigh".into(), Value::Float(a.p_rayleigh));
            ct.insert("amplitude".into(), Value::Table(at));
            let mut nt = Table::new();
            nt.insert("level".into(), span_value(c.noise.level));
            nt.insert("impulse_rate_per_s".into(), Value::Float(c.noise.impulse_rate_per_s));
            nt.insert("impulse_amp".into(), span_value(c.noise.impulse_amp));
            nt.insert("spectral_slope".into(), Value::Float(c.noise.spectral_slope));
            ct.insert("noise".into(), Value::Table(nt));
            Value::Table(ct)
        })
        .collect();
    t.insert("class".into(), Value::Array(classes));
    toml::to_string(&t).expect("config table serializes")
}

pub fn write_config(spec: &DatasetSpec, path: &Path) -> Result<()> {
    write_atomic(path, config_to_toml(spec).as_bytes())
}
