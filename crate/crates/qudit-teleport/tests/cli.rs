//! Binary-level tests of the command-line contract: exit codes, report
//! contents, and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qudit-teleport"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().unwrap()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process terminated by signal")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn report(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qudit-teleport-cli-{}-{name}", std::process::id()))
}

fn without_elapsed(text: &str) -> String {
    text.lines()
        .filter(|line| !line.trim_start().starts_with("\"elapsed_ms\":"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn rejects_s_level_below_two() {
    let output = run(&["run", "--s-level", "1", "--state", "random"]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("s-level must be ≥ 2"));

    let output = run(&["verify", "--s-level", "0"]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("s-level must be ≥ 2"));
}

#[test]
fn rejects_inverted_sweep_range() {
    let output = run(&["sweep", "--s-min", "5", "--s-max", "3"]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("--s-min 5 exceeds --s-max 3"));
}

#[test]
fn rejects_unknown_flags_and_subcommands() {
    assert_eq!(exit_code(&run(&["warp", "--s-level", "2"])), 2);
    assert_eq!(
        exit_code(&run(&["run", "--s-level", "2", "--warp", "9"])),
        2
    );
    assert_eq!(
        exit_code(&run(&["run", "--s-level", "2", "--outcomes", "most"])),
        2
    );
    assert_eq!(exit_code(&run(&["run"])), 2);
    assert_eq!(exit_code(&run(&["run", "--s-level", "two"])), 2);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exit_code(&run(&["--help"])), 0);
    assert_eq!(exit_code(&run(&["--version"])), 0);
    assert_eq!(exit_code(&run(&["run", "--help"])), 0);
}

#[test]
fn bennett_state_file_teleports_exactly() {
    let psi = temp_path("psi.json");
    std::fs::write(&psi, r#"{"amplitudes": [[1, 0], [0, 0]]}"#).unwrap();
    let output = run(&[
        "run",
        "--s-level",
        "2",
        "--state",
        psi.to_str().unwrap(),
        "--outcomes",
        "exhaustive",
    ]);
    let _ = std::fs::remove_file(&psi);
    assert_eq!(exit_code(&output), 0);
    let report = report(&output);
    let outcomes = report["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 4);
    for outcome in outcomes {
        assert_eq!(outcome["fidelity"].as_f64().unwrap(), 1.0);
        assert!((outcome["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    }
    // No randomness consumed: file state, exhaustive outcomes.
    assert!(report["seed"].is_null());
    assert_eq!(report["qubit_count"].as_u64(), Some(1));
}

#[test]
fn qutrit_run_reports_twelve_uniform_outcomes() {
    let output = run(&[
        "run",
        "--s-level",
        "3",
        "--state",
        "random",
        "--seed",
        "42",
        "--outcomes",
        "exhaustive",
        "--mode",
        "decomposed",
    ]);
    assert_eq!(exit_code(&output), 0);
    let report = report(&output);
    assert_eq!(report["mode"].as_str(), Some("decomposed"));
    assert_eq!(report["seed"].as_u64(), Some(42));
    let outcomes = report["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 12);
    for outcome in outcomes {
        assert!((outcome["probability"].as_f64().unwrap() - 1.0 / 12.0).abs() <= 1e-12);
    }
    assert!(report["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    assert!(report["min_fidelity"].as_f64().unwrap() <= report["mean_fidelity"].as_f64().unwrap());
}

#[test]
fn forced_outcome_produces_one_transcript() {
    let output = run(&[
        "run",
        "--s-level",
        "3",
        "--state",
        "random",
        "--seed",
        "5",
        "--outcomes",
        "forced:2,3",
    ]);
    assert_eq!(exit_code(&output), 0);
    let report = report(&output);
    let outcomes = report["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 1);
    assert_eq!(outcomes[0]["j"].as_u64(), Some(2));
    assert_eq!(outcomes[0]["n"].as_u64(), Some(3));

    let output = run(&[
        "run",
        "--s-level",
        "3",
        "--state",
        "random",
        "--outcomes",
        "forced:3,0",
    ]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn unnormalized_state_file_needs_the_normalize_key() {
    let psi = temp_path("unnormalized.json");
    std::fs::write(&psi, r#"{"amplitudes": [[0.6, 0], [0.7, 0]]}"#).unwrap();
    let rejected = run(&["run", "--s-level", "2", "--state", psi.to_str().unwrap()]);
    assert_eq!(exit_code(&rejected), 2);
    assert!(stderr(&rejected).contains("norm"));

    std::fs::write(
        &psi,
        r#"{"amplitudes": [[0.6, 0], [0.7, 0]], "normalize": true}"#,
    )
    .unwrap();
    let accepted = run(&["run", "--s-level", "2", "--state", psi.to_str().unwrap()]);
    let _ = std::fs::remove_file(&psi);
    assert_eq!(exit_code(&accepted), 0);
}

#[test]
fn state_file_length_must_match_s_level() {
    let psi = temp_path("wrong-arity.json");
    std::fs::write(&psi, r#"{"amplitudes": [[1, 0], [0, 0], [0, 0]]}"#).unwrap();
    let output = run(&["run", "--s-level", "2", "--state", psi.to_str().unwrap()]);
    let _ = std::fs::remove_file(&psi);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn missing_state_file_is_invalid_input() {
    let output = run(&["run", "--s-level", "2", "--state", "/nonexistent/psi.json"]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn run_reports_are_deterministic_modulo_timing() {
    let args = [
        "run",
        "--s-level",
        "4",
        "--state",
        "random",
        "--seed",
        "11",
        "--outcomes",
        "sample:64",
        "--mode",
        "decomposed",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    let a = without_elapsed(&String::from_utf8_lossy(&first.stdout));
    let b = without_elapsed(&String::from_utf8_lossy(&second.stdout));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    // The sampled trials really consume the seed.
    let report: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["outcomes"].as_array().unwrap().len(), 64);
    assert_eq!(report["seed"].as_u64(), Some(11));
}

#[test]
fn output_flag_writes_the_report_file() {
    let out = temp_path("run-report.json");
    let output = run(&[
        "run",
        "--s-level",
        "2",
        "--state",
        "random",
        "--seed",
        "3",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    assert!(output.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let _ = std::fs::remove_file(&out);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["schema_version"].as_str(), Some("1"));
    assert_eq!(report["s_level"].as_u64(), Some(2));
}

#[test]
fn verify_passes_and_records_the_decomposition_deviation() {
    let output = run(&["verify", "--s-level", "4", "--trials", "32", "--seed", "7"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(report(&output)["passed"].as_bool(), Some(true));

    let output = run(&["verify", "--s-level", "8", "--dense-cap", "1024"]);
    assert_eq!(exit_code(&output), 0);
    let verify_report = report(&output);
    let checks = verify_report["checks"].as_array().unwrap();
    let decomposition = checks
        .iter()
        .find(|c| c["name"] == "u-ac-decomposed-matches-equation")
        .expect("decomposition check present");
    assert_eq!(decomposition["skipped"].as_bool(), Some(false));
    assert!(decomposition["worst_deviation"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn verify_skips_dense_checks_above_the_cap() {
    let output = run(&[
        "verify",
        "--s-level",
        "4",
        "--trials",
        "4",
        "--dense-cap",
        "2",
    ]);
    assert_eq!(exit_code(&output), 0);
    let report = report(&output);
    let checks = report["checks"].as_array().unwrap();
    let dense = checks
        .iter()
        .find(|c| c["name"] == "u-ac-unitarity")
        .unwrap();
    assert_eq!(dense["skipped"].as_bool(), Some(true));
    let protocol = checks
        .iter()
        .find(|c| c["name"] == "teleportation-fidelity-direct")
        .unwrap();
    assert_eq!(protocol["skipped"].as_bool(), Some(false));
}

#[test]
fn sweep_covers_the_range_at_minimal_qubit_count() {
    let out = temp_path("sweep-report.json");
    let output = run(&[
        "sweep",
        "--s-min",
        "2",
        "--s-max",
        "16",
        "--trials",
        "16",
        "--seed",
        "1",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let _ = std::fs::remove_file(&out);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["passed"].as_bool(), Some(true));
    let entries = report["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 15);
    for entry in entries {
        let s = entry["s_level"].as_u64().unwrap() as f64;
        let expected_qubits = (s.log2().ceil() as u64).max(1);
        assert_eq!(entry["qubit_count"].as_u64(), Some(expected_qubits));
        assert_eq!(entry["passed"].as_bool(), Some(true));
        assert_eq!(entry["verify_passed"].as_bool(), Some(true));
        assert!(entry["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
        assert!(entry["max_probability_deviation"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn sweep_reports_are_deterministic_modulo_timing() {
    let args = [
        "sweep", "--s-min", "2", "--s-max", "5", "--trials", "4", "--seed", "9",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(
        without_elapsed(&String::from_utf8_lossy(&first.stdout)),
        without_elapsed(&String::from_utf8_lossy(&second.stdout))
    );
}

#[test]
fn qubits_flag_pads_the_register() {
    let output = run(&[
        "run",
        "--s-level",
        "2",
        "--qubits",
        "2",
        "--state",
        "random",
        "--seed",
        "1",
    ]);
    assert_eq!(exit_code(&output), 0);
    let report = report(&output);
    assert_eq!(report["qubit_count"].as_u64(), Some(2));
    assert_eq!(report["n_dim"].as_u64(), Some(4));
    // 2 EPR pairs give S·N = 8 outcomes.
    assert_eq!(report["outcomes"].as_array().unwrap().len(), 8);

    let too_small = run(&[
        "run",
        "--s-level",
        "5",
        "--qubits",
        "2",
        "--state",
        "random",
    ]);
    assert_eq!(exit_code(&too_small), 2);
}

fn is_canonical_float(text: &str) -> bool {
    // One digit, a dot, sixteen digits, then an exponent.
    let Some((mantissa, exponent)) = text.split_once('e') else {
        return false;
    };
    let digits = mantissa.strip_prefix('-').unwrap_or(mantissa);
    let Some((head, tail)) = digits.split_once('.') else {
        return false;
    };
    head.len() == 1
        && head.chars().all(|c| c.is_ascii_digit())
        && tail.len() == 16
        && tail.chars().all(|c| c.is_ascii_digit())
        && exponent
            .strip_prefix('-')
            .unwrap_or(exponent)
            .chars()
            .all(|c| c.is_ascii_digit())
}

#[test]
fn reports_format_every_float_canonically() {
    let output = run(&[
        "run",
        "--s-level",
        "3",
        "--state",
        "random",
        "--seed",
        "2",
        "--outcomes",
        "forced:0,0",
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = String::from_utf8_lossy(&output.stdout).into_owned();
    let mut float_lines = 0;
    for line in text.lines() {
        let value = line.trim().trim_end_matches(',');
        let value = value.rsplit(": ").next().unwrap_or(value);
        if value.contains('.') && value.contains('e') {
            assert!(is_canonical_float(value), "line {line:?}");
            float_lines += 1;
        }
    }
    // input amplitudes (3 pairs), probability, fidelity, the two aggregate
    // fidelities and elapsed_ms all carry floats.
    assert!(
        float_lines >= 11,
        "only {float_lines} float lines in {text}"
    );
}

fn assert_path_untouched(path: &Path) {
    assert!(!path.exists());
}

#[test]
fn failed_parse_writes_no_report_file() {
    let out = temp_path("never-written.json");
    let output = run(&[
        "run",
        "--s-level",
        "1",
        "--state",
        "random",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    assert_path_untouched(&out);
}
