//! End-to-end tests of the `resist` binary: JSON outputs, exit codes,
//! config files, environment seeding and file exports.

use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicU32, Ordering};

use serde_json::Value;

use std::f64::consts::{LN_2, PI};

fn run_env(args: &[&str], envs: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_resist"));
    cmd.args(args);
    cmd.env_remove("RESIST_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

fn run(args: &[&str]) -> (String, String, i32) {
    run_env(args, &[])
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout.trim()).expect("stdout is JSON")
}

static COUNTER: AtomicU32 = AtomicU32::new(0);

fn temp_path(name: &str) -> PathBuf {
    let n = COUNTER.fetch_add(1, Ordering::SeqCst);
    std::env::temp_dir().join(format!(
        "resist-cli-test-{}-{n}-{name}",
        std::process::id()
    ))
}

fn report_value(out: &Value, method: &str) -> f64 {
    out["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["method"] == method)
        .unwrap_or_else(|| panic!("no {method} report in {out}"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn resistance_loxodrome_reports_all_methods() {
    let (stdout, _, code) = run(&[
        "resistance",
        "--metric",
        "plane",
        "--profile",
        "loxodrome",
        "--from",
        "1,0",
        "--to",
        "2,0.5",
    ]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    let k = LN_2 / 0.5;
    let exact = 0.5 / (1.0 + k * k);
    for method in ["graph", "transformed", "parametric", "closed_form"] {
        let v = report_value(&out, method);
        assert!((v - exact).abs() < 1e-8, "{method}: {v} vs {exact}");
    }
}

#[test]
fn resistance_parallel_is_angular_amplitude() {
    let (stdout, _, code) = run(&[
        "resistance",
        "--metric",
        "plane",
        "--profile",
        "parallel",
        "--u",
        "2",
        "--v-range",
        "0,1",
    ]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    assert!((report_value(&out, "graph") - 1.0).abs() < 1e-10);
}

#[test]
fn resistance_tangent_circle_at_quarter_turn() {
    let (stdout, _, code) = run(&[
        "resistance",
        "--profile",
        "tangent-circle",
        "--v0",
        "0.7853981634",
    ]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    assert!((report_value(&out, "closed_form") - 1.0).abs() < 1e-9);
    assert!((report_value(&out, "graph") - 1.0).abs() < 1e-7);
}

#[test]
fn resistance_meridian_is_zero() {
    let (stdout, _, code) = run(&[
        "resistance",
        "--metric",
        "hyperbolic",
        "--profile",
        "meridian",
        "--v",
        "0.3",
        "--u-range",
        "0.5,1.5",
    ]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    assert!(report_value(&out, "parametric").abs() < 1e-12);
}

#[test]
fn classify_reproduces_figure_case() {
    let (stdout, _, code) = run(&[
        "classify",
        "--metric",
        "plane",
        "--from",
        "1,0",
        "--to",
        "2,2pi/3",
    ]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    assert_eq!(out["kind"], "truncated");
    assert!((out["V"].as_f64().unwrap() - LN_2).abs() < 1e-9);
    let want = 2.0 * PI / 3.0 - 0.5 * LN_2;
    assert!((out["optimal_value"].as_f64().unwrap() - want).abs() < 1e-9);
    assert!((out["lower_bound"].as_f64().unwrap() - want).abs() < 1e-9);
    assert_eq!(out["k"].as_f64(), Some(1.0));
}

#[test]
fn truncate_confirms_junction_numerically() {
    let (stdout, _, code) = run(&[
        "truncate",
        "--metric",
        "plane",
        "--from",
        "1,0",
        "--to",
        "2,2pi/3",
    ]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    assert!((out["numeric_V"].as_f64().unwrap() - LN_2).abs() < 1e-7);
    assert!((out["second_derivative"].as_f64().unwrap() - 1.0 / (2.0 * LN_2)).abs() < 1e-12);
}

#[test]
fn oracle_approaches_lower_bound() {
    let (stdout, _, code) = run(&["oracle", "--delta-v", "1", "--l", "0.5"]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    let value = out["value"].as_f64().unwrap();
    assert!((value - 0.75).abs() < 0.01);
    assert!(out["gap"].as_f64().unwrap() >= -1e-9);
    assert_eq!(out["n_cells"], 128);
}

#[test]
fn simulate_is_seed_deterministic() {
    let args = [
        "simulate",
        "--metric",
        "plane",
        "--profile",
        "truncated",
        "--from",
        "1,0",
        "--to",
        "2,2pi/3",
        "--vc",
        "0.693147",
        "--n",
        "20000",
        "--seed",
        "9",
    ];
    let (a, _, code_a) = run(&args);
    let (b, _, code_b) = run(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(a, b);
    let out = json(&a);
    assert_eq!(out["seed"], 9);
    assert_eq!(out["rng"], "pcg64");
}

#[test]
fn simulate_honors_env_seed() {
    let args = [
        "simulate",
        "--metric",
        "plane",
        "--profile",
        "parallel",
        "--u",
        "2",
        "--v-range",
        "0,1",
        "--n",
        "1000",
    ];
    let (stdout, _, code) = run_env(&args, &[("RESIST_SEED", "42")]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    assert_eq!(out["seed"], 42);
    // full transfer on a parallel: exact amplitude, zero spread
    assert_eq!(out["estimate"].as_f64(), Some(1.0));
    assert_eq!(out["std_error"].as_f64(), Some(0.0));
}

#[test]
fn simulate_writes_impact_csv() {
    let path = temp_path("impacts.csv");
    let (stdout, _, code) = run(&[
        "simulate",
        "--metric",
        "plane",
        "--profile",
        "loxodrome",
        "--from",
        "1,0",
        "--to",
        "2,1",
        "--n",
        "100",
        "--seed",
        "1",
        "--impacts-csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    json(&stdout);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "v,transfer");
    assert_eq!(lines.len(), 101);
    std::fs::remove_file(&path).ok();
}

#[test]
fn diagnose_emits_csv() {
    let (stdout, _, code) = run(&[
        "diagnose",
        "--metric",
        "sphere",
        "--profile",
        "loxodrome",
        "--from",
        "0,0",
        "--to",
        "0.5,1",
        "--samples",
        "10",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "v,el_residual,C,legendre_margin");
    assert_eq!(lines.len(), 11);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4);
        let residual: f64 = cols[1].parse().unwrap();
        assert!(residual.abs() < 1e-9);
    }
}

#[test]
fn oscillate_matches_closed_form() {
    let (stdout, _, code) = run(&[
        "oscillate",
        "--metric",
        "plane",
        "--u0",
        "1",
        "--u1",
        "2",
        "--m-list",
        "1,3,5",
    ]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    for item in out["results"].as_array().unwrap() {
        let m = item["m"].as_u64().unwrap() as f64;
        let want = PI / (2.0 * (1.0 + m * m * LN_2 * LN_2).sqrt());
        assert!((item["resistance"].as_f64().unwrap() - want).abs() < 1e-6);
    }
}

#[test]
fn export_draws_loxodrome_families_on_all_space_forms() {
    // the hyperbolic phi-budget from u = 0.05 is about 3.7, so its steepest
    // loxodrome runs out of surface beyond v ~ 3.7; keep that sweep shorter
    for (metric, from, v_range) in [
        ("sphere", "0.05,0", "0,4pi"),
        ("plane", "1,0", "0,4pi"),
        ("hyperbolic", "0.05,0", "0,pi"),
    ] {
        let svg_path = temp_path(&format!("{metric}.svg"));
        let csv_path = temp_path(&format!("{metric}.csv"));
        let (stdout, stderr, code) = run(&[
            "export",
            "--metric",
            metric,
            "--from",
            from,
            "--v-range",
            v_range,
            "--ks",
            "0.2,0.5,1",
            "--svg",
            svg_path.to_str().unwrap(),
            "--csv",
            csv_path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{metric}: {stderr}");
        let out = json(&stdout);
        assert_eq!(out["curves"], 3);
        let svg = std::fs::read_to_string(&svg_path).unwrap();
        assert!(svg.starts_with("<svg xmlns="));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert_eq!(svg.matches("</polyline>").count(), 3);
        for k in ["k0.2", "k0.5", "k1"] {
            let path = csv_path
                .to_str()
                .unwrap()
                .replace(".csv", &format!("-{k}.csv"));
            let text = std::fs::read_to_string(&path).unwrap();
            assert!(text.starts_with("v,u,uprime\n"), "{metric} {k}");
            std::fs::remove_file(&path).ok();
        }
        std::fs::remove_file(&svg_path).ok();
    }
}

#[test]
fn export_single_profile_keeps_breakpoint_rows() {
    let csv_path = temp_path("trunc.csv");
    let (_, _, code) = run(&[
        "export",
        "--metric",
        "plane",
        "--profile",
        "truncated",
        "--from",
        "1,0",
        "--to",
        "2,2pi/3",
        "--vc",
        "0.6931471805599453",
        "--samples",
        "8",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv_path).unwrap();
    // 8 samples per piece, two pieces: the junction appears once per side
    assert_eq!(text.lines().count(), 17);
    let junction_rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("6.93147180560e-1"))
        .collect();
    assert_eq!(junction_rows.len(), 2);
    std::fs::remove_file(&csv_path).ok();
}

#[test]
fn config_file_drives_a_run_and_flags_override() {
    let cfg_path = temp_path("cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{"metric":"plane","profile":"parallel","u":"2","v_range":"0,1","n":500,"seed":3}"#,
    )
    .unwrap();
    let (stdout, _, code) = run(&["simulate", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let out = json(&stdout);
    assert_eq!(out["seed"], 3);
    assert_eq!(out["n"], 500);
    // explicit flag beats the file value
    let (stdout, _, code) = run(&[
        "simulate",
        "--config",
        cfg_path.to_str().unwrap(),
        "--seed",
        "8",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["seed"], 8);
    std::fs::remove_file(&cfg_path).ok();
}

#[test]
fn help_lists_flags_for_every_subcommand() {
    for sub in [
        "resistance",
        "classify",
        "truncate",
        "oracle",
        "simulate",
        "diagnose",
        "oscillate",
        "export",
    ] {
        let (stdout, _, code) = run(&[sub, "--help"]);
        assert_eq!(code, 0, "{sub} --help");
        assert!(stdout.contains("--config"), "{sub} help misses --config");
        assert!(stdout.contains("--help"), "{sub} help misses --help");
    }
}

#[test]
fn unknown_flags_are_errors() {
    let (_, stderr, code) = run(&["resistance", "--bogus-flag", "1"]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["kind"], "config");
}

#[test]
fn config_errors_exit_two_with_json() {
    let (_, stderr, code) = run(&[
        "resistance",
        "--metric",
        "torus",
        "--profile",
        "parallel",
        "--u",
        "1",
        "--v-range",
        "0,1",
    ]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["kind"], "config");
    // missing required parameter
    let (_, stderr, code) = run(&["classify", "--metric", "plane", "--from", "1,0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--to"));
}

#[test]
fn custom_metric_from_warp_table_matches_plane() {
    // sampled f(u) = u: linear interpolation reproduces the plane exactly
    let table = temp_path("warp.csv");
    let mut text = String::from("u,f\n");
    for i in 0..=30 {
        let u = 0.5 + 0.1 * i as f64;
        text.push_str(&format!("{u},{u}\n"));
    }
    std::fs::write(&table, text).unwrap();
    let (stdout, stderr, code) = run(&[
        "classify",
        "--metric",
        "custom",
        "--warp-table",
        table.to_str().unwrap(),
        "--from",
        "1,0",
        "--to",
        "2,2pi/3",
    ]);
    assert_eq!(code, 0, "{stderr}");
    let out = json(&stdout);
    assert_eq!(out["kind"], "truncated");
    assert!((out["V"].as_f64().unwrap() - LN_2).abs() < 1e-9);
    // a malformed table is a config error
    std::fs::write(&table, "u,f\n2,1\n1,1\n").unwrap();
    let (_, stderr, code) = run(&[
        "classify",
        "--metric",
        "custom",
        "--warp-table",
        table.to_str().unwrap(),
        "--from",
        "1,0",
        "--to",
        "2,1",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("increasing"));
    std::fs::remove_file(&table).ok();
}

#[test]
fn simulate_rejects_meridians_as_config_error() {
    let (_, stderr, code) = run(&[
        "simulate",
        "--metric",
        "plane",
        "--profile",
        "meridian",
        "--v",
        "0",
        "--u-range",
        "1,2",
    ]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["kind"], "config");
}

#[test]
fn numeric_failures_exit_three() {
    // the segment dips: not monotone, so the simulation refuses it
    let (_, stderr, code) = run(&[
        "simulate",
        "--profile",
        "segment",
        "--from",
        "1,0",
        "--to",
        "2,pi/2",
        "--n",
        "100",
    ]);
    assert_eq!(code, 3);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["kind"], "numeric");
}
