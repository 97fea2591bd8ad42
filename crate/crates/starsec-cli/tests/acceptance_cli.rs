//! Determinism and plumbing checks of the command-line front end: exit
//! codes for invalid configurations, byte-identical output for identical
//! seeds, and the documented CSV schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_starsec")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("starsec-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should launch")
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .map(|l| l.split(',').map(|c| c.trim().to_string()).collect())
        .collect()
}

#[test]
fn criterion_9_determinism_identical_seed_identical_bytes() {
    let dir = tmp_dir("det");
    let out_a = dir.join("a.csv");
    let out_b = dir.join("b.csv");
    for out in [&out_a, &out_b] {
        let o = run(&[
            "--seed",
            "12345",
            "--trials",
            "2000",
            "--out",
            out.to_str().unwrap(),
            "sop-curve",
            "--axis",
            "rho-b-db",
            "--range",
            "66:74:3",
            "--methods",
            "analytic,monte-carlo",
        ]);
        assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b, "identical seeds must give byte-identical CSV output");
    println!("[PASS] criterion 9: identical seed -> byte-identical CSV ({} bytes)", a.len());

    // a different seed must actually change the Monte Carlo column
    let out_c = dir.join("c.csv");
    let o = run(&[
        "--seed",
        "54321",
        "--trials",
        "2000",
        "--out",
        out_c.to_str().unwrap(),
        "sop-curve",
        "--axis",
        "rho-b-db",
        "--range",
        "66:74:3",
        "--methods",
        "analytic,monte-carlo",
    ]);
    assert!(o.status.success());
    let c = std::fs::read(&out_c).unwrap();
    assert_ne!(a, c, "different seeds should perturb the Monte Carlo columns");
}

#[test]
fn criterion_9_validation_exit_codes() {
    // power allocation violating a_s + a_w = 1
    let o = run(&[
        "--set",
        "power.a_s=0.4",
        "validate",
    ]);
    assert_eq!(o.status.code(), Some(2), "a_s + a_w != 1 must exit 2");
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(
        msg.contains("a_s + a_w"),
        "diagnostic should name the violated invariant, got: {msg}"
    );

    // path loss exponent at the convergence boundary
    let o = run(&["--set", "geometry.alpha=2.0", "validate"]);
    assert_eq!(o.status.code(), Some(2), "alpha <= 2 must exit 2");
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("alpha"), "diagnostic should name alpha, got: {msg}");

    println!("[PASS] criterion 9: invalid configs rejected with exit code 2");
}

#[test]
fn sop_curve_schema() {
    let dir = tmp_dir("schema");
    let out = dir.join("curve.csv");
    let o = run(&[
        "--seed",
        "7",
        "--trials",
        "1000",
        "--out",
        out.to_str().unwrap(),
        "sop-curve",
        "--axis",
        "rho-b-db",
        "--range",
        "60:120:13",
        "--methods",
        "analytic,monte-carlo",
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 14, "header plus 13 sweep rows");
    let header = &rows[0];
    for col in [
        "rho_b_db",
        "sop_s_analytic",
        "sop_w_analytic",
        "sop_pair_analytic",
        "sop_s_mc",
        "sop_w_mc",
        "sop_pair_mc",
        "sop_s_mc_ci",
        "sop_w_mc_ci",
        "sop_pair_mc_ci",
    ] {
        assert!(header.contains(&col.to_string()), "missing column {col}");
    }
    // every cell is finite or the NA sentinel
    for row in &rows[1..] {
        for cell in row {
            assert!(
                cell == "NA" || cell.parse::<f64>().map(f64::is_finite).unwrap_or(false),
                "non-finite cell '{cell}'"
            );
        }
    }
    // the JSON sidecar holds the resolved config and seed
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["seed"], 7);
    assert_eq!(sidecar["config"]["power"]["rho_b_db"], 80.0);
    assert_eq!(sidecar["axis"]["name"], "rho_b_db");
}

#[test]
fn sweep_mode_param_flags_interior_optimum() {
    let dir = tmp_dir("sweep");
    let out = dir.join("sweep.csv");
    let o = run(&[
        "--out",
        out.to_str().unwrap(),
        "sweep-mode-param",
        "--range",
        "0:1:19",
        "--metric",
        "sop-pair",
        "--methods",
        "analytic",
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 20);
    let header = &rows[0];
    let opt_col = header.iter().position(|c| c == "optimal").unwrap();
    let val_col = header.iter().position(|c| c == "sop_pair_analytic").unwrap();
    let flagged: Vec<usize> = rows[1..]
        .iter()
        .enumerate()
        .filter(|(_, r)| r[opt_col] == "1")
        .map(|(i, _)| i)
        .collect();
    assert_eq!(flagged.len(), 1, "exactly one row carries the optimum flag");
    let idx = flagged[0];
    assert!(idx > 0 && idx < 18, "optimum must be interior, got row {idx}");
    // endpoints are fully degenerate
    assert_eq!(rows[1][val_col], "1");
    assert_eq!(rows[19][val_col], "1");
    let best: f64 = rows[1 + idx][val_col].parse().unwrap();
    assert!(best < 1.0);
    println!("[PASS] sweep flags interior optimum at row {idx} (pair SOP {best:.3e})");
}

#[test]
fn validate_command_runs() {
    let o = run(&["--trials", "2000", "--seed", "3", "validate"]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    for needle in ["sop_s", "asc_pair", "monte-carlo"] {
        assert!(text.contains(needle), "validate output missing {needle}: {text}");
    }
}

#[test]
fn config_file_round_trip() {
    let dir = tmp_dir("cfg");
    let cfg_path = dir.join("custom.toml");
    std::fs::write(
        &cfg_path,
        r#"
[power]
rho_b_db = 75.0

[star_ris]
protocol = "es"
param_s = 0.6
"#,
    )
    .unwrap();
    let out = dir.join("v.csv");
    let o = run(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "--trials",
        "1000",
        "--out",
        out.to_str().unwrap(),
        "validate",
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["config"]["power"]["rho_b_db"], 75.0);
    assert_eq!(sidecar["config"]["star_ris"]["protocol"], "es");
    // unknown keys are rejected as configuration errors
    std::fs::write(&cfg_path, "[power]\nrho_b = 75.0\n").unwrap();
    let o = run(&["--config", cfg_path.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
}
