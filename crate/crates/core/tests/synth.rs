mod common;

use std::f64::consts::TAU;

use common::*;
use sonar_texture::dsp::{power_spectrum_frames, SpectrogramConfig};
use sonar_texture::model::{AmplitudeModel, NoiseModel, Span};
use sonar_texture::parallel::run_with_workers;
use sonar_texture::random::RngHandle;
use sonar_texture::synth::*;
use sonar_texture::texture::{autocorr_normalized, strts_score};

fn quiet(mut c: ClassConfig) -> ClassConfig {
    c.noise = NoiseSpec::silent();
    c
}

#[test]
fn statistical_tones_peak_at_class_frequencies() {
    let spec = DatasetSpec::statistical_default();
    let class = &spec.classes[0];
    let sig = gen_statistical_sample(class, &spec, &mut RngHandle::new(11)).unwrap();
    let cfg = SpectrogramConfig::default();
    let p = power_spectrum_frames(&sig, &cfg).unwrap();
    let mean: Vec<f64> = p.columns().into_iter().map(|c| c.sum()).collect();
    let df = 32_000.0 / cfg.window_len as f64;
    let peaks = top_peaks(&mean, 3, 8);
    for (bin, f) in peaks.iter().zip(&class.frequencies_hz) {
        let want = (f / df).round() as i64;
        assert!((*bin as i64 - want).abs() <= 1, "peak bin {bin} vs {want} for {f} Hz");
    }
}

#[test]
fn rayleigh_branch_envelope_passes_ks() {
    // one tone, no noise, all levels Rayleigh; slow segments so the analytic
    // envelope at segment boundaries recovers the drawn level
    let mut spec = DatasetSpec::statistical_default();
    spec.duration_s = 20.0;
    spec.envelope_segment_s = 0.02;
    let mut class = quiet(ClassConfig::new("one", vec![4000.0]));
    class.amplitude_model = AmplitudeModel { p_rayleigh: 1.0, ..AmplitudeModel::default() };
    let sig = gen_statistical_sample(&class, &spec, &mut RngHandle::new(5)).unwrap();
    let env = hilbert_envelope(sig.samples());
    let seg = 640;
    let levels: Vec<f64> = (2..sig.len() / seg - 1).map(|j| env[j * seg]).collect();
    // peak normalization rescales the draws; compare against the fitted scale
    let s2 = levels.iter().map(|x| x * x).sum::<f64>() / (2.0 * levels.len() as f64);
    let d = ks_statistic(levels.clone(), |x| 1.0 - (-x * x / (2.0 * s2)).exp());
    let crit = 1.628 / (levels.len() as f64).sqrt();
    assert!(d < crit, "KS {d} >= {crit} over {} levels", levels.len());

    // the K branch has a heavier tail and must not pass the same test
    class.amplitude_model.p_rayleigh = 0.0;
    class.amplitude_model.k_shape = 0.5;
    let sig = gen_statistical_sample(&class, &spec, &mut RngHandle::new(5)).unwrap();
    let env = hilbert_envelope(sig.samples());
    let levels: Vec<f64> = (2..sig.len() / seg - 1).map(|j| env[j * seg]).collect();
    let s2 = levels.iter().map(|x| x * x).sum::<f64>() / (2.0 * levels.len() as f64);
    let d = ks_statistic(levels, |x| 1.0 - (-x * x / (2.0 * s2)).exp());
    assert!(d > crit, "K envelope passed as Rayleigh: {d}");
}

#[test]
fn same_seed_same_buffer() {
    for kind in [DatasetKind::Statistical, DatasetKind::Structural, DatasetKind::Mixed] {
        let spec = DatasetSpec::default_for(kind);
        let a = gen_sample(&spec, 1, 3).unwrap();
        let b = gen_sample(&spec, 1, 3).unwrap();
        let c = gen_sample(&spec, 1, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let peak = a.peak();
        assert!((0.1..=1.0).contains(&peak), "{peak}");
    }
}

#[test]
fn structural_harmonics_within_jitter() {
    let mut spec = DatasetSpec::structural_default();
    spec.duration_s = 2.0;
    let class = quiet(ClassConfig::new("fc", vec![2200.0]));
    let ranges = [(2150.0, 2250.0), (4350.0, 4450.0), (6550.0, 6650.0)];
    for seed in 0..20 {
        let sig = gen_structural_sample(&class, &spec, &mut RngHandle::new(seed)).unwrap();
        let len = 1 << 17;
        let p = periodogram(sig.samples(), len);
        let df = 32_000.0 / len as f64;
        let peaks = top_peaks(&p, 3, 200);
        for (bin, (lo, hi)) in peaks.iter().zip(ranges) {
            let f = *bin as f64 * df;
            assert!(f >= lo - 1.0 && f <= hi + 1.0, "seed {seed}: {f} not in [{lo}, {hi}]");
        }
    }
}

#[test]
fn triangular_envelope_tracks_template() {
    let spec = DatasetSpec::structural_default();
    let mut class = quiet(ClassConfig::new("tri", vec![2500.0]));
    class.jitter_hz = 0.0;
    class.envelope_shape = EnvelopeShape::Triangular;
    let sig = gen_structural_sample(&class, &spec, &mut RngHandle::new(2)).unwrap();
    let env = moving_average(&hilbert_envelope(sig.samples()), 320);
    let n = sig.len();
    let template: Vec<f64> = (0..n).map(|i| EnvelopeShape::Triangular.value(i as f64 / (n - 1) as f64)).collect();
    let r = pearson(&env, &template);
    assert!(r > 0.95, "{r}");
}

#[test]
fn structural_samples_score_high() {
    let spec = DatasetSpec::structural_default();
    for c in 0..4 {
        for i in 0..5 {
            let s = strts_score(&gen_sample(&spec, c, i).unwrap()).unwrap().score;
            assert!(s >= 4.0, "class {c} sample {i}: {s}");
        }
    }
}

#[test]
fn harmonic_stack_is_periodic_at_base_lag() {
    let spec = DatasetSpec::structural_default();
    let mut class = quiet(ClassConfig::new("fc", vec![2000.0]));
    class.jitter_hz = 0.0;
    class.envelope_shape = EnvelopeShape::Plateau;
    let sig = gen_structural_sample(&class, &spec, &mut RngHandle::new(8)).unwrap();
    let lag = (32_000.0f64 / 2000.0).round() as usize;
    let r = autocorr_normalized(&sig, lag).unwrap();
    assert!(r[lag] > 0.9, "{}", r[lag]);
}

#[test]
fn vessel_three_matches_table() {
    let spec = DatasetSpec::mixed_default();
    let v3 = &spec.classes[2];
    assert_eq!(v3.frequencies_hz, vec![9000.0, 10500.0, 12000.0, 13000.0]);
    assert_eq!(v3.amplitude_transition, Transition::RayleighToK);
    assert_eq!(v3.modulation_speed, ModulationSpeed::Fast);
    let sig = gen_mixed_sample(v3, &spec, &mut RngHandle::new(4)).unwrap();
    let p = periodogram(sig.samples(), 1 << 18);
    let df = 32_000.0 / (1 << 18) as f64;
    let peaks = top_peaks(&p, 4, 2000);
    for (bin, f) in peaks.iter().zip(&v3.frequencies_hz) {
        assert!((*bin as f64 * df - f).abs() < 40.0, "{} vs {f}", *bin as f64 * df);
    }
}

#[test]
fn zero_depth_removes_modulation_exactly() {
    let spec = DatasetSpec::mixed_default();
    let mut a = spec.classes[0].clone();
    a.modulation_depth = Span::fixed(0.0);
    a.modulation_rate_hz = Span::fixed(1.2);
    let mut b = a.clone();
    b.modulation_rate_hz = Span::fixed(2.9);
    // with d = 0 the rate has no effect: the envelope is α(t) alone
    let x = gen_mixed_sample(&a, &spec, &mut RngHandle::new(6)).unwrap();
    let y = gen_mixed_sample(&b, &spec, &mut RngHandle::new(6)).unwrap();
    assert_eq!(x, y);
}

/// Power envelope at 100 Hz, mean removed.
fn power_envelope(x: &[f64]) -> Vec<f64> {
    let blocks: Vec<f64> = x.chunks_exact(320).map(|c| c.iter().map(|v| v * v).sum::<f64>()).collect();
    let m = blocks.iter().sum::<f64>() / blocks.len() as f64;
    blocks.iter().map(|b| b - m).collect()
}

fn envelope_spectrum(x: &[f64]) -> (Vec<f64>, f64) {
    let len = 8192;
    (periodogram(&power_envelope(x), len), 100.0 / len as f64)
}

fn dominant_modulation_hz(x: &[f64]) -> f64 {
    let (p, df) = envelope_spectrum(x);
    let lo = (0.8 / df) as usize;
    let hi = (5.0 / df) as usize;
    let k = (lo..hi).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
    k as f64 * df
}

#[test]
fn fast_class_modulates_faster() {
    let spec = DatasetSpec::mixed_default();
    for seed in 0..6 {
        let slow = gen_mixed_sample(&spec.classes[0], &spec, &mut RngHandle::new(seed)).unwrap();
        let fast = gen_mixed_sample(&spec.classes[2], &spec, &mut RngHandle::new(seed)).unwrap();
        let fs = dominant_modulation_hz(slow.samples());
        let ff = dominant_modulation_hz(fast.samples());
        assert!(ff > fs, "seed {seed}: fast {ff} Hz <= slow {fs} Hz");
        assert!((0.9..=1.8).contains(&fs), "{fs}");
        assert!((2.2..=3.1).contains(&ff), "{ff}");
    }
}

#[test]
fn zero_depth_lowers_envelope_line() {
    let spec = DatasetSpec::mixed_default();
    let mut c = spec.classes[2].clone();
    c.modulation_rate_hz = Span::fixed(2.5);
    c.modulation_depth = Span::fixed(0.3);
    let with = gen_mixed_sample(&c, &spec, &mut RngHandle::new(9)).unwrap();
    c.modulation_depth = Span::fixed(0.0);
    let without = gen_mixed_sample(&c, &spec, &mut RngHandle::new(9)).unwrap();
    let line = |x: &[f64]| {
        let (p, df) = envelope_spectrum(x);
        let k = (2.5 / df).round() as usize;
        let total: f64 = p[1..].iter().sum();
        p[k - 3..=k + 3].iter().sum::<f64>() / total
    };
    let (a, b) = (line(with.samples()), line(without.samples()));
    assert!(a > 10.0 * b, "{a} vs {b}");
}

#[test]
fn background_noise_rms_and_flatness() {
    let model = NoiseModel {
        level: 0.008,
        impulse_rate_per_s: 0.0,
        impulse_amp_range: (0.02, 0.06),
        spectral_slope: 0.0,
    };
    let x = gen_background_noise(&model, 160_000, 32_000, &mut RngHandle::new(1)).unwrap();
    assert!((x.rms() - 0.008).abs() <= 0.008 * 0.05);
    let p = periodogram(x.samples(), 160_000);
    let half = p.len() / 2;
    let ratio = p[1..half].iter().sum::<f64>() / p[half..].iter().sum::<f64>();
    assert!((0.8..=1.25).contains(&ratio), "{ratio}");
}

#[test]
fn impulse_counts_average_rate_times_duration() {
    let model = NoiseModel {
        level: 0.0,
        impulse_rate_per_s: 2.0,
        impulse_amp_range: (0.02, 0.06),
        spectral_slope: 0.0,
    };
    let total: usize = (0..1000)
        .map(|seed| {
            background_noise_parts(&model, 160_000, 32_000, &mut RngHandle::new(seed))
                .unwrap()
                .impulses
                .len()
        })
        .sum();
    let mean = total as f64 / 1000.0;
    assert!((9.0..=11.0).contains(&mean), "{mean}");
}

fn small(kind: DatasetKind) -> DatasetSpec {
    DatasetSpec {
        samples_per_class: 10,
        master_seed: 7,
        ..DatasetSpec::default_for(kind)
    }
}

fn tree_bytes(dir: &std::path::Path, manifest: &sonar_texture::store::Manifest) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = manifest
        .rows()
        .iter()
        .map(|r| std::fs::read(dir.join(&r.path)).unwrap())
        .collect();
    out.push(std::fs::read(dir.join(MANIFEST_NAME)).unwrap());
    out
}

#[test]
fn dataset_files_manifest_and_determinism() {
    let spec = small(DatasetKind::Mixed);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = run_with_workers(Some(1), || generate_dataset(&spec, a.path())).unwrap();
    let mb = run_with_workers(Some(8), || generate_dataset(&spec, b.path())).unwrap();
    assert_eq!(ma.len(), 40);
    assert_eq!(ma, mb);
    let wavs = walk_wavs(a.path());
    assert_eq!(wavs, 40);
    assert_eq!(tree_bytes(a.path(), &ma), tree_bytes(b.path(), &mb));
    let back = sonar_texture::store::read_manifest(&a.path().join(MANIFEST_NAME)).unwrap();
    assert_eq!(back, ma);
    assert_eq!(ma.rows()[0].path, "vessel_1/vessel_1_00000.wav");
    assert_eq!(ma.rows()[10].class_name, "Vessel 2");
    let cfg = sonar_texture::store::read_config(&a.path().join(RESOLVED_CONFIG_NAME)).unwrap();
    assert_eq!(cfg.spec, spec);
}

fn walk_wavs(dir: &std::path::Path) -> usize {
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            n += walk_wavs(&p);
        } else if p.extension().is_some_and(|x| x == "wav") {
            n += 1;
        }
    }
    n
}

#[test]
fn mixed_class_centroids_follow_frequency_order() {
    let spec = small(DatasetKind::Mixed);
    let cfg = SpectrogramConfig::default();
    let df = 32_000.0 / cfg.window_len as f64;
    let centroids: Vec<f64> = (0..4)
        .map(|c| {
            let mut acc = 0.0;
            for i in 0..10 {
                let sig = gen_sample(&spec, c, i).unwrap();
                let p = power_spectrum_frames(&sig, &cfg).unwrap();
                let col: Vec<f64> = p.columns().into_iter().map(|c| c.sum()).collect();
                let num: f64 = col.iter().enumerate().map(|(k, v)| k as f64 * df * v).sum();
                acc += num / col.iter().sum::<f64>();
            }
            acc / 10.0
        })
        .collect();
    assert!(centroids.windows(2).all(|w| w[0] < w[1]), "{centroids:?}");
}

#[test]
fn failed_sample_aborts_without_manifest() {
    let mut spec = small(DatasetKind::Statistical);
    spec.samples_per_class = 2;
    let dir = tempfile::tempdir().unwrap();
    // a path component that is a file makes every write fail
    let blocker = dir.path().join("vessel_1");
    std::fs::write(&blocker, b"x").unwrap();
    match generate_dataset(&spec, dir.path()) {
        Err(e) => assert!(!e.is_validation()),
        Ok(_) => panic!("expected failure"),
    }
    assert!(!dir.path().join(MANIFEST_NAME).exists());
}

#[test]
fn tone_phase_is_uniform_across_seeds() {
    // first drawn value of a structural sample is the first harmonic jitter;
    // the tone itself should not start at a fixed phase
    let spec = DatasetSpec::structural_default();
    let class = quiet(ClassConfig {
        n_harmonics: 1,
        ..ClassConfig::new("one", vec![1000.0])
    });
    let starts: Vec<f64> = (0..200)
        .map(|s| {
            let sig = gen_structural_sample(&class, &spec, &mut RngHandle::new(s)).unwrap();
            let x = sig.samples();
            // phase of the tone from two samples a quarter period apart
            let q = 8usize;
            let m = 16_000;
            (x[m + q]).atan2(x[m]).rem_euclid(TAU)
        })
        .collect();
    let below = starts.iter().filter(|&&p| p < std::f64::consts::PI).count();
    assert!((70..=130).contains(&below), "{below}");
}
