//! CLI behavior: flag handling, output formats, exit codes, determinism.

use std::path::PathBuf;
use std::process::Command;

use zeeman_cavity_cli::config::{resolve, CommonArgs, Overrides, Protocol};
use zeeman_cavity_cli::run::execute;
use zeeman_cavity_cli::main_with_args;

fn test_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zcav_cli_{}_{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zeeman-cavity"))
}

#[test]
fn evolve_at_zero_time_returns_input() {
    let dir = test_dir("evolve0");
    let out = dir.join("evolve.json");
    let code = main_with_args([
        "zeeman-cavity",
        "evolve",
        "--t",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["gt"].as_f64().unwrap(), 0.0);
    let components = rows[0]["components"].as_array().unwrap();
    let initial: Vec<_> = components
        .iter()
        .filter(|c| c["label"].as_str().unwrap() == "|0>(+1,-1)")
        .collect();
    assert_eq!(initial.len(), 1);
    assert!((initial[0]["prob"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    for c in components {
        if c["label"].as_str().unwrap() != "|0>(+1,-1)" {
            assert!(c["prob"].as_f64().unwrap() < 1e-24);
        }
    }
}

#[test]
fn evolve_csv_header_and_row_count() {
    let dir = test_dir("evolve_csv");
    let out = dir.join("evolve.csv");
    let code = main_with_args([
        "zeeman-cavity",
        "evolve",
        "--t-start",
        "0",
        "--t-stop",
        "2",
        "--steps",
        "3",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config="));
    assert_eq!(lines.next().unwrap(), "gt,basis_label,re,im,prob");
    // 3 time points x 6 sector components.
    assert_eq!(lines.count(), 18);
}

#[test]
fn verify_csv_header_and_exit() {
    let dir = test_dir("verify");
    let out = dir.join("verify.csv");
    let code = main_with_args([
        "zeeman-cavity",
        "verify",
        "--steps",
        "11",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "gt,max_abs_err_eq8,max_abs_err_eq14");
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn config_file_with_flag_override() {
    let dir = test_dir("config");
    let config_path = dir.join("run.json");
    std::fs::write(
        &config_path,
        r#"{"protocol": "epr", "params": {"g": 2.0}, "n_period": 2, "format": "json"}"#,
    )
    .unwrap();
    let out = dir.join("epr.json");
    let code = main_with_args([
        "zeeman-cavity",
        "epr",
        "--config",
        config_path.to_str().unwrap(),
        "--n-period",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["config"]["params"]["g"].as_f64().unwrap(), 2.0); // from file
    assert_eq!(doc["config"]["n_period"].as_u64().unwrap(), 1); // flag wins
}

#[test]
fn exit_code_config_error() {
    assert_eq!(main_with_args(["zeeman-cavity", "epr", "--g", "-3"]), 2);
    assert_eq!(main_with_args(["zeeman-cavity", "epr", "--n-period", "0"]), 2);
    assert_eq!(
        main_with_args(["zeeman-cavity", "transfer", "--c1", "1", "--c2", "1"]),
        2
    );
    // Off-resonant parameters are rejected by the protocols that assume
    // resonance.
    assert_eq!(main_with_args(["zeeman-cavity", "epr", "--omega", "2.0"]), 2);
}

#[test]
fn negative_flag_values_are_accepted() {
    let dir = test_dir("neg");
    let out = dir.join("neg.json");
    // Negative alpha, negative branch coefficient, negative grid start.
    assert_eq!(
        main_with_args([
            "zeeman-cavity",
            "epr",
            "--alpha",
            "-0.001",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(
        main_with_args([
            "zeeman-cavity",
            "transfer",
            "--c1",
            "-0.6",
            "--c2",
            "0,-0.8",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(
        main_with_args([
            "zeeman-cavity",
            "evolve",
            "--t-start",
            "-1",
            "--t-stop",
            "1",
            "--steps",
            "3",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
}

#[test]
fn exit_code_unknown_subcommand() {
    let status = bin().arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn exit_code_categories() {
    use zeeman_cavity_cli::CliError;
    assert_eq!(CliError::Config(String::new()).exit_code(), 2);
    assert_eq!(CliError::Tolerance(String::new()).exit_code(), 3);
    assert_eq!(CliError::Io(String::new()).exit_code(), 4);
}

#[test]
fn exit_code_io_error() {
    let dir = test_dir("io");
    // Writing to a directory path fails.
    let code = main_with_args([
        "zeeman-cavity",
        "epr",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 4);
}

#[test]
fn help_exits_zero() {
    assert_eq!(main_with_args(["zeeman-cavity", "--help"]), 0);
}

#[test]
fn parallel_output_matches_serial() {
    let common = CommonArgs {
        format: Some(zeeman_cavity_cli::config::OutputFormat::Csv),
        ..CommonArgs::default()
    };
    let mut overrides = Overrides::from_common(common);
    overrides.time = Some((Some(0.0), Some(5.0), Some(101)));
    let serial = resolve(Protocol::Verify, overrides).unwrap();
    let mut parallel = serial.clone();
    parallel.parallel = true;
    let a = execute(&serial).unwrap();
    let b = execute(&parallel).unwrap();
    // The embedded config comment differs in the `parallel` field; the data
    // rows must not.
    let tail = |s: &str| s.lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(tail(&a), tail(&b));
}

#[test]
fn execute_is_deterministic_per_config() {
    let mut overrides = Overrides::from_common(CommonArgs::default());
    overrides.cycles = Some(5);
    overrides.drift_rate = Some(0.01);
    overrides.gamma = Some(0.02);
    overrides.common.seed = Some(1234);
    let config = resolve(Protocol::Feedback, overrides).unwrap();
    let a = execute(&config).unwrap();
    let b = execute(&config).unwrap();
    assert_eq!(a, b);
}

#[test]
fn feedback_csv_is_one_row_per_cycle() {
    let dir = test_dir("fb_csv");
    let out = dir.join("fb.csv");
    let code = main_with_args([
        "zeeman-cavity",
        "feedback",
        "--cycles",
        "4",
        "--drift-rate",
        "0.01",
        "--seed",
        "9",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("cycle,g_true,"));
    assert_eq!(lines.len(), 2 + 4);
}

#[test]
fn every_output_embeds_resolved_config() {
    let dir = test_dir("audit");
    for (cmd, extra) in [
        ("epr", vec![]),
        ("exchange", vec![]),
        ("transfer", vec![]),
        ("feedback", vec!["--cycles", "2"]),
    ] {
        let out = dir.join(format!("{cmd}.json"));
        let mut args = vec![
            "zeeman-cavity",
            cmd,
            "--seed",
            "5",
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend(extra);
        assert_eq!(main_with_args(args), 0, "{cmd} failed");
        let doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(doc["config"]["seed"].as_u64().unwrap(), 5, "{cmd} lost the seed");
        assert_eq!(doc["config"]["protocol"].as_str().unwrap(), cmd);
        assert_eq!(doc["schema_version"].as_u64().unwrap(), 1);
    }
}

#[test]
fn exchange_report_figures() {
    let dir = test_dir("exchange");
    let out = dir.join("exchange.json");
    assert_eq!(
        main_with_args(["zeeman-cavity", "exchange", "--out", out.to_str().unwrap()]),
        0
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let figures = doc["report"]["figures_of_merit"].as_array().unwrap();
    for entry in figures {
        let name = entry[0].as_str().unwrap();
        let value = entry[1].as_f64().unwrap();
        if name.contains("fidelity") {
            assert!((value - 1.0).abs() < 1e-10, "{name} = {value}");
        }
    }
}
