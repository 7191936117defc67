//! End-to-end tests of the binary: flags, file formats, determinism,
//! exit-status contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_morse-wigner"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("morse-wigner-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn spectrum_row_count_matches_levels() {
    let out = run(&["spectrum", "--lambda", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 10);
    assert!(text.contains("# num-levels: 10"));

    let out1 = run(&["spectrum", "--lambda", "1"]);
    let text1 = stdout(&out1);
    let rows1: Vec<&str> = text1.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows1.len(), 1);
    // E_0 = 0.375 at λ = 1
    assert!(rows1[0].starts_with("0,"));
    let e0: f64 = rows1[0].split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(e0, 0.375);
}

#[test]
fn invalid_lambda_exits_2() {
    let out = run(&["spectrum", "--lambda", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["wdf", "--lambda", "-3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_2() {
    let out = run(&["spectrum", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn potential_landmarks() {
    let out = run(&[
        "potential",
        "--lambda",
        "10",
        "--q-min",
        "0",
        "--q-max",
        "100",
        "--resolution",
        "101",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
        .collect();
    // V(0) = 0 and V(Q → ∞) → λ/2
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][1], 0.0);
    let last = rows.last().unwrap();
    assert!((last[1] - 5.0).abs() < 1e-10, "V(100) = {}", last[1]);
    // V at Q = 1 for λ = 10 against independent arithmetic
    let q1 = rows.iter().find(|r| (r[0] - 1.0).abs() < 1e-12).unwrap();
    let direct = 5.0 * (1.0 - (-1.0 / 10.0f64.sqrt()).exp()).powi(2);
    assert!((q1[1] - direct).abs() < 1e-14);
}

#[test]
fn wdf_reruns_are_byte_identical() {
    let args = [
        "wdf",
        "--lambda",
        "1",
        "--resolution",
        "48",
        "--q-min",
        "-2",
        "--q-max",
        "4",
        "--p-min",
        "-3",
        "--p-max",
        "3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // and independent of the worker count
    let c = bin()
        .args(args)
        .env("MORSE_WIGNER_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn json_format_is_wellformed() {
    let out = run(&["spectrum", "--lambda", "4", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("{\n"));
    assert!(text.contains("\"meta\""));
    assert!(text.contains("\"data\""));
    assert!(text.contains("\"columns\": [\"n\", \"eps_n\", \"E_n\"]"));
    // crude balance check on braces and brackets
    assert_eq!(
        text.matches('{').count(),
        text.matches('}').count(),
        "unbalanced braces"
    );
    assert_eq!(text.matches('[').count(), text.matches(']').count());
}

#[test]
fn gnuplot_matrix_has_grid_shape() {
    let out = run(&[
        "wdf",
        "--lambda",
        "1",
        "--resolution",
        "40",
        "--gnuplot",
        "--q-min",
        "-2",
        "--q-max",
        "4",
        "--p-min",
        "-3",
        "--p-max",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let data_rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data_rows.len(), 40);
    assert_eq!(data_rows[0].split_whitespace().count(), 40);
}

#[test]
fn config_file_precedence() {
    let cfg = tmp_path("precedence.conf");
    std::fs::write(&cfg, "lambda = 4\nresolution = 64\nformat = json\n").unwrap();
    // file value used when no flag is given
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert!(stdout(&out).contains("\"num-levels\": \"4\""));
    // flag beats file
    let out = run(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "2",
        "--format",
        "csv",
    ]);
    assert!(stdout(&out).contains("# num-levels: 2"));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn malformed_config_file_exits_2() {
    let cfg = tmp_path("broken.conf");
    std::fs::write(&cfg, "lambda four\n").unwrap();
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn wdf_reports_the_shallow_negative_minimum() {
    let out = run(&["wdf", "--lambda", "4", "--resolution", "160"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let min_line = text.lines().find(|l| l.starts_with("# min: ")).unwrap();
    let min: f64 = min_line.trim_start_matches("# min: ").parse().unwrap();
    assert!(
        (-3e-4..=-1e-5).contains(&min),
        "lambda=4 min = {min:e}, expected order -1e-4"
    );
}

#[test]
fn full_verify_covers_all_lambdas_in_one_run() {
    // no --lambda: the built-in λ = 1, 2, 4, 10 list applies to every check
    let out = run(&["verify", "--resolution", "128"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    for check in [
        "normalization",
        "marginal",
        "symmetry",
        "orbit-constancy",
        "jacobian",
    ] {
        for lambda in ["1", "2", "4", "10"] {
            let needle = format!("verify {check} lambda={lambda}: PASS");
            assert!(text.contains(&needle), "missing `{needle}`");
        }
    }
    assert!(text.contains("verify oracle lambda=-: PASS"));
    assert!(text.contains("all checks passed"));
}

#[test]
fn sdf_reports_the_anomalous_maximum() {
    let out = run(&[
        "sdf",
        "--lambda",
        "1",
        "--resolution",
        "64",
        "--profile-points",
        "120",
        "--quad-points",
        "128",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let max_line = text.lines().find(|l| l.starts_with("# max: ")).unwrap();
    let max: f64 = max_line.trim_start_matches("# max: ").parse().unwrap();
    assert!((max - 0.179).abs() < 0.003, "max rho_c = {max}");
}

#[test]
fn compare_emits_metrics_and_marks_absent_levels() {
    let out = run(&[
        "compare",
        "--lambda",
        "2",
        "--resolution",
        "72",
        "--profile-points",
        "100",
        "--quad-points",
        "64",
        "--levels",
        "0.9,0.1,0.05",
    ]);
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = stdout(&out);
    let absent: Vec<&str> = text.lines().filter(|l| l.starts_with("absent,")).collect();
    let metric: Vec<&str> = text.lines().filter(|l| l.starts_with("metric,")).collect();
    assert_eq!(absent.len(), 1, "level 0.9 exceeds both grids");
    assert_eq!(metric.len(), 2);
    assert!(text.lines().any(|l| l.starts_with("vertex,")));
}

#[test]
fn verify_subset_passes_and_forced_failure_exits_1() {
    let out = run(&["verify", "--lambda", "2", "--checks", "symmetry,jacobian"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verify symmetry lambda=2: PASS"));
    assert!(text.contains("verify jacobian lambda=2: PASS"));
    assert!(text.contains("all checks passed"));

    // an absurd injected tolerance must make normalization fail controlledly
    let out = run(&[
        "verify",
        "--lambda",
        "1",
        "--resolution",
        "80",
        "--checks",
        "normalization",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));

    let out = run(&["verify", "--checks", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_round_trip() {
    let path = tmp_path("grid.csv");
    let out = run(&[
        "wdf",
        "--lambda",
        "1",
        "--resolution",
        "40",
        "--q-min",
        "-2",
        "--q-max",
        "4",
        "--p-min",
        "-3",
        "--p-max",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# command: wdf"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 40 * 40);
    // values round-trip through the printed representation
    let first = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap();
    let parsed: f64 = first.parse().unwrap();
    assert_eq!(format!("{parsed:.16e}"), first);
    std::fs::remove_file(&path).ok();
}
