use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("idcyl-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn idcyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idcyl"))
        .args(args)
        .output()
        .unwrap()
}

fn run_config(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    idcyl(&args)
}

fn verdict(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a JSON verdict ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn error_record(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"].clone()
}

#[test]
fn check_on_gaussian_passes_all_four_conditions() {
    let dir = workdir("check");
    let cfg = write_config(&dir, "c.json", r#"{"gallery": {"name": "gaussian"}}"#);
    let out = run_config("check", &cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("check.json")).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["passed"] == true));
}

#[test]
fn drift_only_poisson_fails_on_witness_grid_with_eigenvector() {
    let dir = workdir("witness");
    let cfg = write_config(
        &dir,
        "w.json",
        r#"{"gallery": {"name": "poisson_noncontinuous"},
            "definiteness": {"kernel": "drift_kappa", "mode": "schoenberg", "point_sets": "witness", "divisors": [1]}}"#,
    );
    let out = run_config("definiteness", &cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("definiteness.json")).unwrap())
            .unwrap();
    let r = &report["reports"][0]["report"];
    assert_eq!(r["verdict"], "not_definite");
    assert_eq!(r["witness"].as_array().unwrap().len(), 3);
    assert!(r["witness_form"].as_f64().unwrap() < 0.0);
}

#[test]
fn full_poisson_exponent_passes_schoenberg() {
    let dir = workdir("poisson-kappa");
    let cfg = write_config(
        &dir,
        "p.json",
        r#"{"gallery": {"name": "poisson_noncontinuous"}}"#,
    );
    let out = run_config("definiteness", &cfg, &dir, &["--seed", "5"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn gaussian_sample_within_clt_bound() {
    let dir = workdir("sample");
    let cfg = write_config(
        &dir,
        "s.json",
        r#"{"gallery": {"name": "gaussian"}, "sample": {"functional": [0.3, -0.2, 0.25, 0.1], "n": 100000}, "seed": 11}"#,
    );
    let out = run_config("sample", &cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = verdict(&out);
    let bound = 3.0 / (1e5f64).sqrt();
    assert!(v["max_deviation"].as_f64().unwrap() <= bound);
    assert_eq!(v["ks"]["oracle"]["law"], "normal");
    let table = std::fs::read_to_string(dir.join("sample.csv")).unwrap();
    assert_eq!(table.lines().count(), 22);
}

#[test]
fn dnu_table_reproduces_single_atom_value() {
    let dir = workdir("dnu");
    let cfg = write_config(
        &dir,
        "d.json",
        r#"{"dnu": {
              "measure": {"kind": "atoms", "atoms": [[[0.5, 0.0], 1.0]]},
              "space": {"dim": 2, "norm": "l2"},
              "truncation": "indicator",
              "points": [[3.0, 0.0], [1.0, 0.0]]}}"#,
    );
    let out = run_config("dnu", &cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_to_string(dir.join("dnu.csv")).unwrap();
    let totals: Vec<f64> = table
        .lines()
        .filter(|l| l.contains(",total,"))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(totals, vec![-1.5, 0.0]);
}

#[test]
fn dyadic_continuity_of_dnu_entry() {
    let dir = workdir("continuity");
    let cfg = write_config(
        &dir,
        "k.json",
        r#"{"gallery": {"name": "dnu_atoms"},
            "continuity": {"sequence": {"step": "dyadic", "len": 20},
                           "trend": {"threshold": 1e-5, "threshold_at": 20},
                           "require": "regular_continuity"}}"#,
    );
    let out = run_config("continuity", &cfg, &dir, &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let table = std::fs::read_to_string(dir.join("continuity.csv")).unwrap();
    assert_eq!(
        table.lines().next().unwrap(),
        "n,drift_gap,quadratic_gap,combined_bl,levy_bl"
    );
    assert_eq!(table.lines().count(), 21);
    let verdict: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["radon_extendability"], "untested");
}

#[test]
fn reports_are_bit_identical_for_identical_configs() {
    let dir = workdir("identical");
    let cfg = write_config(
        &dir,
        "r.json",
        r#"{"gallery": {"name": "dnu_rays"},
            "sample": {"functional": [0.4, 0.1, -0.3, 0.2], "n": 20000, "jump_cutoff": 0.05},
            "continuity": {"sequence": {"len": 16}},
            "seed": 3}"#,
    );
    for command in ["cf", "project", "sample", "dnu", "continuity", "check"] {
        let (a, b) = (
            dir.join(format!("{command}-a")),
            dir.join(format!("{command}-b")),
        );
        run_config(command, &cfg, &a, &[]);
        run_config(command, &cfg, &b, &[]);
        let ext = if command == "check" { "json" } else { "csv" };
        let fa = std::fs::read(a.join(format!("{command}.{ext}"))).unwrap();
        let fb = std::fs::read(b.join(format!("{command}.{ext}"))).unwrap();
        assert!(!fa.is_empty());
        assert_eq!(fa, fb, "{command} reports differ");
    }
}

#[test]
fn seed_flag_overrides_config() {
    let dir = workdir("seed");
    let cfg = write_config(
        &dir,
        "c.json",
        r#"{"gallery": {"name": "gaussian"}, "seed": 1}"#,
    );
    run_config("cf", &cfg, &dir.join("one"), &[]);
    run_config("cf", &cfg, &dir.join("flag"), &["--seed", "1"]);
    run_config("cf", &cfg, &dir.join("other"), &["--seed", "2"]);
    let read = |d: &str| std::fs::read(dir.join(d).join("cf.csv")).unwrap();
    assert_eq!(read("one"), read("flag"));
    assert_ne!(read("one"), read("other"));
}

#[test]
fn gallery_build_round_trips_as_characteristics() {
    let dir = workdir("roundtrip");
    let out = idcyl(&[
        "gallery",
        "build",
        "second_moment_drift",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let built: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("gallery_second_moment_drift.json")).unwrap(),
    )
    .unwrap();
    assert!(built["verification"]
        .as_array()
        .unwrap()
        .iter()
        .all(|o| o["expected"] == o["observed"]));
    let inline =
        serde_json::json!({ "characteristics": built["entry"]["characteristics"], "seed": 4 });
    let by_value = write_config(&dir, "v.json", &inline.to_string());
    let by_name = write_config(
        &dir,
        "n.json",
        r#"{"gallery": {"name": "second_moment_drift"}, "seed": 4}"#,
    );
    run_config("cf", &by_value, &dir.join("value"), &[]);
    run_config("cf", &by_name, &dir.join("name"), &[]);
    assert_eq!(
        std::fs::read(dir.join("value/cf.csv")).unwrap(),
        std::fs::read(dir.join("name/cf.csv")).unwrap()
    );
}

#[test]
fn gallery_list_names_every_entry() {
    let dir = workdir("list");
    let out = idcyl(&["gallery", "list", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_to_string(dir.join("gallery_list.csv")).unwrap();
    for name in idcyl_core::gallery::NAMES {
        assert!(
            table.lines().any(|l| l.starts_with(&format!("{name},"))),
            "{name} missing"
        );
    }
}

#[test]
fn config_errors_exit_2_with_json_record() {
    let dir = workdir("errors");
    let cases = [
        (
            "unknown-field.json",
            r#"{"gallery": {"name": "gaussian"}, "bogus": 1}"#,
        ),
        ("no-source.json", r#"{}"#),
        (
            "both-sources.json",
            r#"{"gallery": {"name": "gaussian"}, "characteristics": {"space": {"dim": 1, "norm": "l2"}, "truncation": "ramp", "p": {"kind": "zero"}, "q": {"matrix": [[1.0]]}, "nu": {"kind": "zero"}}}"#,
        ),
        (
            "bad-dims.json",
            r#"{"gallery": {"name": "gaussian"}, "cf": {"points": [[1.0, 2.0]]}}"#,
        ),
        ("bad-json.json", r#"{"gallery": "#),
        (
            "bad-q.json",
            r#"{"characteristics": {"space": {"dim": 2, "norm": "l2"}, "truncation": "ramp", "p": {"kind": "zero"}, "q": {"matrix": [[1.0]]}, "nu": {"kind": "zero"}}}"#,
        ),
    ];
    for (name, body) in cases {
        let cfg = write_config(&dir, name, body);
        let out = run_config("cf", &cfg, &dir, &[]);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let record = error_record(&out);
        assert_eq!(record["exit_code"], 2, "{name}");
        assert!(record["message"].as_str().unwrap().len() > 5);
    }
    let out = idcyl(&["check"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["kind"], "config");
    let out = idcyl(&["not-a-command"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["kind"], "usage");
    let out = run_config(
        "check",
        &write_config(&dir, "ok.json", r#"{"gallery": {"name": "gaussian"}}"#),
        &dir,
        &["--tol", "-1"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_definiteness_mode_is_a_config_error() {
    let dir = workdir("mode");
    let cfg = write_config(
        &dir,
        "m.json",
        r#"{"gallery": {"name": "gaussian"}, "definiteness": {"kernel": "cf", "mode": "schoenberg"}}"#,
    );
    let out = run_config("definiteness", &cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn root_kernel_is_positive_definite_for_gallery_entry() {
    let dir = workdir("root");
    let cfg = write_config(
        &dir,
        "r.json",
        r#"{"gallery": {"name": "poisson_noncontinuous"},
            "definiteness": {"kernel": "root", "mode": "positive", "k": 3, "point_sets": {"random": {"sets": 2, "size": 6}}}}"#,
    );
    let out = run_config("definiteness", &cfg, &dir, &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn projection_table_cross_checks() {
    let dir = workdir("project");
    let cfg = write_config(
        &dir,
        "p.json",
        r#"{"gallery": {"name": "poisson_noncontinuous"}, "project": {"points": {"random": 5}}}"#,
    );
    let out = run_config("project", &cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(verdict(&out)["max_residual"].as_f64().unwrap() <= 1e-10);
    let mut rdr = csv::Reader::from_path(dir.join("project.csv")).unwrap();
    assert_eq!(rdr.records().count(), 5);
}
