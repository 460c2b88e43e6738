use std::path::PathBuf;
use std::process::{Command, Output};

use ahmass::cli_reporting::validate_report;
use serde_json::Value;

fn config(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name].iter().collect()
}

fn ahmass(args: &[&str], cfg: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahmass"))
        .args(args)
        .arg("--config")
        .arg(cfg)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn every_command_emits_a_schema_valid_report() {
    for cfg in ["zero.toml", "horosphere_cap.toml"] {
        for cmd in ["inspect", "verify", "mass", "penrose", "decay", "map"] {
            let out = ahmass(&[cmd], &config(cfg));
            assert_eq!(out.status.code(), Some(0), "{cmd} on {cfg}");
            let text = String::from_utf8(out.stdout).unwrap();
            validate_report(&text).unwrap_or_else(|e| panic!("{cmd} on {cfg}: {e}"));
            let v: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["config_echo"]["command"], cmd);
        }
    }
}

#[test]
fn zero_slice_verify_residuals_are_tiny() {
    let v = json(&ahmass(&["verify"], &config("zero.toml")));
    for key in ["flux_max", "recipe_max", "gauss_max"] {
        let r = v["results"][key]["value"].as_f64().unwrap();
        assert!(r <= 1e-10, "{key} = {r}");
    }
}

#[test]
fn zero_slice_penrose_makes_no_claim() {
    let out = ahmass(&["penrose"], &config("zero.toml"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hypothesis_flags"]["inequality_asserted"], false);
    assert_eq!(v["results"]["penrose_mass"]["value"].as_f64(), Some(0.0));
}

#[test]
fn cap_penrose_is_asserted() {
    let v = json(&ahmass(&["penrose"], &config("horosphere_cap.toml")));
    assert_eq!(v["hypothesis_flags"]["inequality_asserted"], true);
    assert!(v["results"]["margin_horospherical"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn hypothesis_failures_exit_with_two() {
    let out = ahmass(&["penrose"], &config("cap_energy_violation.toml"));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["hypothesis_flags"]["energy_condition"], false);
    assert_eq!(v["hypothesis_flags"]["inequality_asserted"], false);

    let out = ahmass(&["decay"], &config("decay.toml"));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["hypothesis_flags"]["admissible"], false);
}

#[test]
fn fast_decay_is_admissible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[family]\nkind = \"decay_perturbation\"\nn = 3\ntau = 4.0\n");
    let out = ahmass(&["decay"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let tau = json(&out)["results"]["tau_hat"]["value"].as_f64().unwrap();
    assert!((tau - 4.0).abs() < 0.1, "tau_hat = {tau}");
}

#[test]
fn csv_output_has_a_header() {
    let out = ahmass(&["mass", "--format", "csv"], &config("horosphere_cap.toml"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,m_phi,gap_estimate"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let to_file = ahmass(&["map", "--out", path.to_str().unwrap()], &config("zero.toml"));
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let stdout = ahmass(&["map"], &config("zero.toml")).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn seed_flag_overrides_the_config() {
    let v = json(&ahmass(&["inspect", "--seed", "42"], &config("zero.toml")));
    assert_eq!(v["config_echo"]["seed"], 42);
}

#[test]
fn timings_only_with_flag() {
    let without = json(&ahmass(&["map"], &config("zero.toml")));
    assert!(without["timings"].as_object().is_none_or(|t| t.is_empty()));
    let with = json(&ahmass(&["map", "--timings"], &config("zero.toml")));
    assert!(!with["timings"].as_object().unwrap().is_empty());
}

#[test]
fn bad_configs_fail_with_a_json_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[family]\nkind = \"zero\"\nn = 3\nbogus = 1\n");
    let out = ahmass(&["mass"], &cfg);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "ConfigError");

    let cfg = write_config(&dir, "[family]\nkind = \"zero\"\nn = 7\n");
    assert_eq!(ahmass(&["mass"], &cfg).status.code(), Some(1));

    let out = ahmass(&["mass"], &dir.path().join("missing.toml"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_ahmass"))
        .args(["mass", "--format", "xml", "--config"])
        .arg(config("zero.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
