//! End-to-end checks of the binary: exit codes, file outputs,
//! reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ris_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ris-sim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn list_presets_names_parameters() {
    let out = ris_sim(&["list-presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fig3"));
    assert!(text.contains("FFT 256"));
    assert!(text.contains("0.3125 ms"));
    assert!(text.contains("table1"));
    assert!(text.contains("(3,7), (5,5), (7,3)"));
    assert!(text.contains("fig25a"));
    assert!(text.contains("Q = 1, 20, and 50"));
}

#[test]
fn unknown_preset_is_usage_error_with_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig99",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown preset"));
    assert!(err.contains("fig3"), "error lists the valid names");
}

#[test]
fn unknown_strategy_is_usage_error_with_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig4",
        "--strategy",
        "warp",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown strategy"));
    assert!(err.contains("align-to-los"));
}

#[test]
fn run_writes_trace_spectrum_metrics_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig2-a",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = read(dir.path(), "trace.csv");
    assert!(trace.starts_with("t_s,re,im,mag,mag_db\n"));
    assert_eq!(trace.lines().count(), 193);
    let spectrum = read(dir.path(), "spectrum.csv");
    assert!(spectrum.starts_with("freq_hz,norm_mag,norm_mag_db\n"));
    assert_eq!(spectrum.lines().count(), 257);
    let metrics: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "metrics.json")).unwrap();
    assert_eq!(metrics["n_s"], 192);
    // Full co-/out-phased swing of the 1000/1000 two-ray layout: the
    // max/min ratio is 2, i.e. 10·log10(2) dB peak to peak.
    let delta = metrics["delta_r_db"].as_f64().unwrap();
    assert!((delta - 3.010299956639812).abs() < 1e-9, "delta_r {delta}");
    let manifest: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["rng"], "chacha8");
    assert_eq!(manifest["runs"][0]["grid"]["sample_count"], 192);
}

#[test]
fn reruns_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = ris_sim(&[
            "run",
            "--preset",
            "fig7",
            "--seed",
            "9",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for name in ["trace.csv", "spectrum.csv", "metrics.json"] {
        assert_eq!(
            read(dir_a.path(), name),
            read(dir_b.path(), name),
            "{name} differs between reruns"
        );
    }
}

#[test]
fn sweep_preset_writes_labelled_subdirectories() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig25a",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for label in ["q1", "q20", "q50", "no-ris"] {
        assert!(dir.path().join(label).join("trace.csv").exists(), "{label}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["runs"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["runs"][2]["hold_samples"], 50);
}

#[test]
fn all_ris_benchmark_has_flat_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig17-allris",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let metrics: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "metrics.json")).unwrap();
    let delta = metrics["delta_r_db"].as_f64().unwrap();
    assert!(delta.abs() <= 1e-10, "delta_r {delta} dB");
}

#[test]
fn search_strategies_write_assignment_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig20",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let log = read(&dir.path().join("m2"), "assignments.csv");
    assert!(log.starts_with("t_s,assignment,est_mag_db\n"));
    assert_eq!(log.lines().count(), 961);
    // 7 RIS against 3 reflectors: three pairs and four aligned per sample.
    let first = log.lines().nth(1).unwrap();
    let assignment = first.split(',').nth(1).unwrap();
    assert_eq!(assignment.matches('>').count(), 7);
    assert_eq!(assignment.matches('*').count(), 4);
}

#[test]
fn fig13_emits_phase_surface() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig13",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let surface = read(dir.path(), "surface.csv");
    assert!(surface.starts_with("t_s,theta_rad,mag,mag_db\n"));
    assert_eq!(surface.lines().count(), 1 + 192 * 512);
    // Global maximum of the surface is the co-phased three-path bound.
    let max_db = surface
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((max_db - (-48.69)).abs() <= 0.02, "surface max {max_db} dB");
}

#[test]
fn scenario_file_runs_with_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{
        "carrier_hz": 3e9,
        "wavelength_m": 0.1,
        "speed_mps": 10.0,
        "d_los_m": 1500.0,
        "interactors": [
            { "kind": "ris", "alpha_rad": 0.0, "d_tilde_m": 2500.0, "psi_rad": 0.0 }
        ]
    }"#;
    let path = dir.path().join("scenario.json");
    fs::write(&path, scenario).unwrap();
    let out = ris_sim(&[
        "run",
        "--scenario",
        path.to_str().unwrap(),
        "--strategy",
        "align-to-los",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("out"), "metrics.json")).unwrap();
    // Aligned single RIS pins the envelope: delta_r collapses to ~0 dB.
    assert!(metrics["delta_r_db"].as_f64().unwrap() < 1e-10);
}

#[test]
fn scenario_with_ris_and_no_strategy_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{
        "carrier_hz": 3e9, "wavelength_m": 0.1, "speed_mps": 10.0,
        "d_los_m": 1500.0,
        "interactors": [{ "kind": "ris", "two_ray": { "d1_m": 500.0 } }]
    }"#;
    let path = dir.path().join("scenario.json");
    fs::write(&path, scenario).unwrap();
    let out = ris_sim(&[
        "run",
        "--scenario",
        path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_geometry_exits_with_numeric_contract_code() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{
        "carrier_hz": 3e9, "wavelength_m": 0.1, "speed_mps": 10.0,
        "d_los_m": 1500.0,
        "interactors": [{ "kind": "plain", "alpha_rad": 0.0, "d_tilde_m": -5.0 }]
    }"#;
    let path = dir.path().join("scenario.json");
    fs::write(&path, scenario).unwrap();
    let out = ris_sim(&[
        "run",
        "--scenario",
        path.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn permutation_cap_exits_with_resource_code() {
    let dir = tempfile::tempdir().unwrap();
    // P(10, 10) = 3 628 800 permutations per sample, over the 10^6 cap.
    let mut interactors = Vec::new();
    for i in 0..10 {
        interactors.push(format!(
            r#"{{ "kind": "ris", "alpha_rad": 0.1, "d_tilde_m": {} }}"#,
            2000 + i
        ));
    }
    for i in 0..10 {
        interactors.push(format!(
            r#"{{ "kind": "plain", "alpha_rad": 0.2, "d_tilde_m": {} }}"#,
            2500 + i
        ));
    }
    let scenario = format!(
        r#"{{ "carrier_hz": 3e9, "wavelength_m": 0.1, "speed_mps": 10.0,
             "d_los_m": 1000.0, "interactors": [{}] }}"#,
        interactors.join(",")
    );
    let path = dir.path().join("scenario.json");
    fs::write(&path, scenario).unwrap();
    let out = ris_sim(&[
        "run",
        "--scenario",
        path.to_str().unwrap(),
        "--strategy",
        "m2",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("3628800"), "reports the count: {err}");
}

#[test]
fn hold_interval_rounding_warns_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ris-sim"))
        .args([
            "run",
            "--preset",
            "fig4",
            "--hold-tr-us",
            "700.0",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("not a multiple"),
        "warning emitted on stderr: {err}"
    );
}

#[test]
fn scenario_json_imperfections_block_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{
        "carrier_hz": 3e9, "wavelength_m": 0.1, "speed_mps": 100.0,
        "d_los_m": 1000.0,
        "interactors": [{ "kind": "ris", "alpha_rad": 0.0, "d_tilde_m": 3000.0, "psi_rad": 0.0 }],
        "imperfections": { "hold_q": 50 }
    }"#;
    let path = dir.path().join("scenario.json");
    fs::write(&path, scenario).unwrap();
    let out = ris_sim(&[
        "run",
        "--scenario",
        path.to_str().unwrap(),
        "--strategy",
        "align-to-los",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("out"), "manifest.json")).unwrap();
    assert_eq!(manifest["runs"][0]["hold_samples"], 50);
    // Held phases reintroduce a fade ripple.
    let metrics: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("out"), "metrics.json")).unwrap();
    assert!(metrics["delta_r_db"].as_f64().unwrap() > 0.01);
}

#[test]
fn realistic_ris_stays_close_to_perfect_ris() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig23",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mag_db = |label: &str| -> Vec<f64> {
        read(&dir.path().join(label), "trace.csv")
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
            .collect()
    };
    for scenario in ["two-ray", "two-reflector"] {
        let perfect = mag_db(&format!("{scenario}-p-ris"));
        let imperfect = mag_db(&format!("{scenario}-i-ris"));
        let worst = perfect
            .iter()
            .zip(&imperfect)
            .map(|(p, i)| (p - i).abs())
            .fold(0.0f64, f64::max);
        assert!(
            worst <= 2.0,
            "{scenario}: imperfect hardware shifts the envelope by {worst} dB"
        );
    }
}

#[test]
fn fft_override_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig3",
        "--fft",
        "512",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let spectrum = read(dir.path(), "spectrum.csv");
    assert_eq!(spectrum.lines().count(), 513);
}

#[test]
fn fft_smaller_than_trace_is_contract_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "run",
        "--preset",
        "fig3",
        "--fft",
        "128",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}
