use std::fs;
use std::path::Path;

use segshield::report::{run_experiment, run_experiment_config, ExperimentConfig};
use segshield::Error;

fn experiments() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/experiments"))
}

#[test]
fn two_device_experiment_writes_all_outputs() {
    let out = tempfile::tempdir().unwrap();
    let report = run_experiment(experiments().join("two-device.json"), out.path()).unwrap();
    for f in ["report.json", "metrics.csv", "overhead.csv"] {
        assert!(out.path().join(f).is_file(), "{f} missing");
    }
    assert!(out.path().join("traces/segmented/bulb.jsonl").is_file());
    let g = &report.groups[0];
    assert!(g.undefended.accuracy > g.segmented.accuracy);
    let written: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(written, serde_json::from_str::<serde_json::Value>(&report.to_json()).unwrap());
}

#[test]
fn zero_probability_leaves_traffic_unchanged() {
    let mut cfg = ExperimentConfig::load(experiments().join("two-device.json")).unwrap();
    cfg.prob_override = Some(0.0);
    cfg.time_overhead = 0.0;
    cfg.cover.enabled = false;
    let out = tempfile::tempdir().unwrap();
    let report = run_experiment_config(&cfg, experiments(), out.path()).unwrap();
    for row in &report.segmentation_overhead {
        assert_eq!(row.w_b, row.d_b, "{}", row.device);
        assert_eq!(row.b, 0.0);
    }
    for dev in ["bulb", "plug"] {
        let a = fs::read(out.path().join(format!("traces/original/{dev}.jsonl"))).unwrap();
        let b = fs::read(out.path().join(format!("traces/segmented/{dev}.jsonl"))).unwrap();
        assert_eq!(a, b, "{dev}");
    }
}

#[test]
fn unknown_preset_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"seed": 1, "devices": [{"name": "toaster", "preset": "toaster"}, {"name": "plug", "preset": "plug"}]}"#).unwrap();
    let err = run_experiment(&path, dir.path().join("out")).unwrap_err();
    assert!(matches!(err, Error::Config(_) | Error::Stage { .. }), "{err}");
}
