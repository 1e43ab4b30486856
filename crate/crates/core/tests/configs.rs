use std::path::PathBuf;

use sonar_texture::store::read_config;
use sonar_texture::synth::{DatasetKind, DatasetSpec};

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn shipped_configs_equal_builtin_defaults() {
    for (file, kind) in [
        ("mixed_default.toml", DatasetKind::Mixed),
        ("statistical_default.toml", DatasetKind::Statistical),
        ("structural_default.toml", DatasetKind::Structural),
    ] {
        let loaded = read_config(&shipped(file)).unwrap();
        assert!(loaded.warnings.is_empty(), "{file}: {:?}", loaded.warnings);
        assert_eq!(loaded.spec, DatasetSpec::default_for(kind), "{file}");
    }
}

#[test]
fn mixed_default_vessel_one() {
    let spec = read_config(&shipped("mixed_default.toml")).unwrap().spec;
    assert_eq!(spec.classes.len(), 4);
    assert_eq!(spec.classes[0].class_name, "Vessel 1");
    assert_eq!(spec.classes[0].frequencies_hz, vec![2200.0, 3500.0, 5000.0, 6500.0]);
}

#[test]
fn missing_file_is_io_error() {
    let err = read_config(&shipped("nope.toml")).unwrap_err();
    assert!(!err.is_validation());
}
