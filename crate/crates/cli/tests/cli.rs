use std::path::Path;
use std::process::Command;

fn kplus(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_kplus"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    let text = String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr);
    (o.status.code().unwrap_or(-1), text)
}

#[test]
fn cap_measure_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = kplus(&["cap-measure"], dir.path());
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("cap-measure.csv")).unwrap();
    assert!(csv.starts_with("dim,theta,cap_measure\n"));
    assert_eq!(csv.lines().count(), 1 + 5 * 25);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cap-measure.json")).unwrap()).unwrap();
    assert_eq!(json["header"]["kind"], "cap-measure");
    assert_eq!(json["passed"], true);
}

#[test]
fn reruns_are_byte_identical_across_worker_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["kplus", "--samples", "50000", "--seed", "7"];
    assert_eq!(kplus(&[&args[..], &["--workers", "1"]].concat(), a.path()).0, 0);
    assert_eq!(kplus(&[&args[..], &["--workers", "3"]].concat(), b.path()).0, 0);
    for f in ["kplus.csv", "kplus.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn bad_config_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\n  \"dims\": [3],\n  \"thetas\": \"no\"\n}").unwrap();
    let (code, text) = kplus(&["cap-measure", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code, 2);
    assert!(text.contains("bad.json:3:") && text.contains("thetas"), "{text}");
}

#[test]
fn steep_rim_fails_the_gate_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.json");
    std::fs::write(
        &cfg,
        r#"{"name": "steep", "kind": "cgr-check", "params": {"surface": {"scene": "cap", "theta0": 1.0471975511965976, "rings": 8}, "theta0": 1.5707963267948966, "samples": 20000}}"#,
    )
    .unwrap();
    let (code, text) = kplus(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code, 2, "{text}");
}

#[test]
fn half_sphere_check_passes_via_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.json");
    std::fs::write(
        &cfg,
        r#"{"name": "half", "kind": "cgr-check", "seed": 3, "params": {"surface": {"scene": "half_sphere", "rings": 12}, "samples": 100000}}"#,
    )
    .unwrap();
    let (code, text) = kplus(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code, 0, "{text}");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cgr-check.json")).unwrap()).unwrap();
    assert_eq!(json["header"]["name"], "half");
    assert_eq!(json["header"]["seed"], 3);
}

#[test]
fn stability_without_delta_or_table_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = kplus(&["cgr-stability", "--samples", "20000"], dir.path());
    assert_eq!(code, 2, "{text}");
}

#[test]
fn calibration_rejects_a_tiny_budget() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = kplus(&["calibrate", "--samples", "10"], dir.path());
    assert_eq!(code, 2);
    assert!(text.contains("insufficient budget"), "{text}");
}

#[test]
fn profile_csv_has_the_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    std::fs::write(&cfg, r#"{"masses": [0.3, 0.6]}"#).unwrap();
    let (code, text) = kplus(&["profile", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "m,I_H(m),I_candidate(m),I_solver(m),method,wet_length,young_violation"
    );
}

#[test]
fn stability_reads_the_calibrated_table() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = kplus(&["calibrate", "--samples", "20000"], dir.path());
    assert_eq!(code, 0, "{text}");
    let (code, text) = kplus(&["cgr-stability", "--samples", "20000"], dir.path());
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(dir.path().join("cgr-stability.csv")).unwrap();
    assert!(csv.starts_with("scene,kplus,stderr,cap,delta_measured,slab_width"), "{csv}");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cgr-stability.json")).unwrap()).unwrap();
    assert!(json["results"][0]["witness_normal"].is_array() || json["results"][0]["witness_normal"].is_object());
}
