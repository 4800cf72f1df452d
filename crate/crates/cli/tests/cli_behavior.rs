//! End-to-end behaviour of the `regpart` binary: exit codes, output
//! formats, determinism, round-trips, and the suite exit-code contract.

use std::process::{Command, Output};

use regpart_cli::suites::{run_suite, SuiteOptions};
use regpart_core::numerics::Precision;

fn regpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regpart"))
        .args(args)
        .env_remove("REGPART_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.to_string())
        .collect()
}

#[test]
fn exact_emits_inclusive_range() {
    let out = regpart(&["exact", "--N", "0..10", "--t", "1"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 12); // header + 11 rows
    assert_eq!(lines[0], "N,t,count");
    assert_eq!(lines[6], "5,1,3");
}

#[test]
fn exact_stabilized_cell() {
    let out = regpart(&["exact", "--N", "5", "--t", "100"]);
    assert!(out.status.success());
    assert_eq!(stdout_lines(&out)[1], "5,100,7");
}

#[test]
fn empty_range_is_usage_error() {
    let out = regpart(&["exact", "--N", "5..3", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty range"));
}

#[test]
fn jsonl_rows_are_self_describing() {
    let out = regpart(&["exact", "--N", "0..3", "--t", "1", "--format", "jsonl"]);
    assert!(out.status.success());
    for line in stdout_lines(&out) {
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert!(v.get("N").is_some() && v.get("t").is_some() && v.get("count").is_some());
    }
    let out = regpart(&["estimate", "--N", "900", "--t", "4", "--format", "jsonl"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_lines(&out)[0]).unwrap();
    assert!(v["notes"].as_str().unwrap().contains("excluded"));
    assert_eq!(v["regime"], "I");
    assert_eq!(v["contained"], true);
}

#[test]
fn identical_configs_are_byte_identical() {
    let dir = std::env::temp_dir();
    let f1 = dir.join("regpart_det_1.csv");
    let f2 = dir.join("regpart_det_2.csv");
    for f in [&f1, &f2] {
        let out = regpart(&[
            "validate",
            "--suite",
            "eta-bracket",
            "--out",
            f.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let b1 = std::fs::read(&f1).unwrap();
    let b2 = std::fs::read(&f2).unwrap();
    assert!(!b1.is_empty());
    assert_eq!(b1, b2);
    let _ = std::fs::remove_file(f1);
    let _ = std::fs::remove_file(f2);
}

#[test]
fn csv_reals_round_trip_at_25_digits() {
    let out = regpart(&["saddle", "--N", "1000", "--t", "4..5"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    let header: Vec<&str> = lines[0].split(',').collect();
    let p = Precision::default();
    for line in &lines[1..] {
        for (name, cell) in header.iter().zip(line.split(',')) {
            if !name.starts_with("log_") && !["L", "y", "residual"].contains(name) {
                continue;
            }
            if cell.is_empty() {
                continue;
            }
            let value = cell.strip_prefix("neg:").unwrap_or(cell);
            let parsed = p.parse(value).unwrap();
            let formatted = if parsed.is_infinite() {
                (if parsed.is_sign_negative() {
                    "-inf"
                } else {
                    "inf"
                })
                .to_string()
            } else {
                format!("{parsed:.25e}")
            };
            assert_eq!(formatted, value, "column {name} does not round-trip");
        }
    }
}

#[test]
fn precision_env_and_flag() {
    let run_with_env = |bits: &str| {
        Command::new(env!("CARGO_BIN_EXE_regpart"))
            .args(["regime", "--N", "1000", "--t", "4"])
            .env("REGPART_PRECISION_BITS", bits)
            .output()
            .unwrap()
    };
    assert_eq!(run_with_env("63").status.code(), Some(2));
    assert!(run_with_env("128").status.success());
    // Flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_regpart"))
        .args([
            "regime",
            "--N",
            "1000",
            "--t",
            "4",
            "--precision-bits",
            "64",
        ])
        .env("REGPART_PRECISION_BITS", "63")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn validate_single_quadrature_cell() {
    let out = regpart(&[
        "validate", "--suite", "prop21", "--inv-y", "1000", "--t", "4",
    ]);
    assert!(out.status.success(), "expected exit 0");
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("prop21,"));
    assert!(lines[1].ends_with(",true"));
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = regpart(&["validate", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sabotaged_mu2_sign_fails_the_suite() {
    // Negative control: flipping the combination's sign must break the
    // bracket checks.
    let opts = SuiteOptions {
        mu2_sign_flip: true,
        ..SuiteOptions::default()
    };
    let records = run_suite(Precision::default(), "mu-lemmas", &opts).unwrap();
    let combo_failures = records
        .iter()
        .filter(|r| r.cell.starts_with("combo") && !r.pass)
        .count();
    assert!(combo_failures > 0, "sign flip must produce failures");
}

#[test]
fn zeros_branches_and_range_errors() {
    let out = regpart(&["zeros", "--N", "10000", "--t", "6"]);
    assert!(out.status.success());
    let row = &stdout_lines(&out)[1];
    assert!(row.starts_with("10000,6,i,"), "row: {row}");

    let out = regpart(&["zeros", "--N", "10000", "--t", "2000"]);
    let row = &stdout_lines(&out)[1];
    assert!(row.starts_with("10000,2000,iii,"), "row: {row}");

    let out = regpart(&["zeros", "--N", "99", "--t", "10"]);
    assert!(out.status.success());
    let row = &stdout_lines(&out)[1];
    assert!(row.contains("range error"), "row: {row}");
}

#[test]
fn saddle_row_matches_reference_root() {
    let out = regpart(&["saddle", "--N", "1000", "--t", "4", "--tol", "1e-12"]);
    assert!(out.status.success());
    let row = &stdout_lines(&out)[1];
    let y = row.split(',').nth(3).unwrap();
    // tol 1e-12 resolves the root to ~12 digits
    assert!(y.starts_with("5.77302162680"), "root column: {y}");
    let hyp = row.split(',').nth(8).unwrap();
    assert_eq!(hyp, "false");
}

#[test]
fn regime_rows_cross_the_boundary() {
    let out = regpart(&["regime", "--N", "10000", "--t", "488..490"]);
    let lines = stdout_lines(&out);
    assert!(lines[1].starts_with("10000,488,I,"));
    assert!(lines[2].starts_with("10000,489,III,"));
    assert!(lines[3].starts_with("10000,490,III,"));
}

#[test]
fn estimate_with_raised_budget_contains_large_cell() {
    let out = regpart(&[
        "estimate",
        "--N",
        "10000",
        "--t",
        "4",
        "--exact-budget",
        "10000",
    ]);
    assert!(out.status.success());
    let row = &stdout_lines(&out)[1];
    assert!(row.starts_with("10000,4,I,two_sided,"), "row: {row}");
    let contained = row.split(',').nth(8).unwrap();
    assert_eq!(contained, "true", "row: {row}");
}

#[test]
fn estimate_tags_large_t_cells() {
    // t + 1 = 500 > sqrt(24 * 10^4) ~ 489.9
    let out = regpart(&["estimate", "--N", "10000", "--t", "499"]);
    assert!(out.status.success());
    let row = &stdout_lines(&out)[1];
    assert!(row.starts_with("10000,499,III,"), "row: {row}");
}

#[test]
fn full_default_validate_passes() {
    let out = regpart(&["validate"]);
    assert!(
        out.status.success(),
        "full validate run must exit 0; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let lines = stdout_lines(&out);
    assert!(lines.len() > 3000, "expected full record stream");
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn suites_run_at_non_default_precision() {
    let out = regpart(&[
        "validate",
        "--suite",
        "eta-bracket",
        "--precision-bits",
        "128",
    ]);
    assert!(out.status.success());
    let out = regpart(&["validate", "--suite", "mu-lemmas", "--precision-bits", "96"]);
    assert!(out.status.success());
}

#[test]
fn io_errors_carry_path_context() {
    let out = regpart(&[
        "exact",
        "--N",
        "1",
        "--t",
        "1",
        "--out",
        "/nonexistent-dir/table.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/table.csv"));
}
