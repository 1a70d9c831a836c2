// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn qbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbm"))
        .args(args)
        .env_remove("QBM_THREADS")
        .output()
        .expect("qbm runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = qbm(args);
    assert!(
        out.status.success(),
        "qbm {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Every numeric field of `expected` matches `got` to 1e-15 relative.
fn assert_json_close(got: &Value, expected: &Value) {
    for (key, want) in expected.as_object().unwrap() {
        let have = &got[key];
        match (have.as_f64(), want.as_f64()) {
            (Some(a), Some(b)) => {
                assert!((a - b).abs() <= 1e-15 * b.abs().max(1.0), "{key}: {a} vs {b}")
            }
            _ => assert_eq!(have, want, "{key}"),
        }
    }
}

/// Columns of a CSV as raw fields, keyed by header.
fn csv_columns(path: &Path) -> Vec<(String, Vec<String>)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let mut cols: Vec<(String, Vec<String>)> = header.into_iter().map(|h| (h, Vec::new())).collect();
    for line in lines {
        for (col, field) in cols.iter_mut().zip(line.split(',')) {
            col.1.push(field.to_string());
        }
    }
    cols
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    csv_columns(path)
        .into_iter()
        .find(|(h, _)| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
        .1
        .iter()
        .map(|v| v.parse().unwrap())
        .collect()
}

fn write_params(dir: &Path, name: &str, r: f64, kt: f64) -> PathBuf {
    let p = dir.join(name);
    fs::write(
        &p,
        format!(r#"{{"mass": 1.0, "friction": {r}, "hbar": 1.0, "kBT": {kt}}}"#),
    )
    .unwrap();
    p
}

#[test]
fn flux_unit_square_loop() {
    let got = ok_json(&["flux", "--path1", s(&fixture("unit_square_loop.csv"))]);
    assert_json_close(&got, &read_json(&fixture("expected/flux_unit_square_loop.json")));
}

#[test]
fn flux_two_paths_with_hbar_two_pi() {
    let got = ok_json(&[
        "flux",
        "--path1",
        s(&fixture("square_lower.csv")),
        "--path2",
        s(&fixture("square_upper.csv")),
        "--params",
        s(&fixture("params_hbar_2pi.json")),
    ]);
    assert_json_close(&got, &read_json(&fixture("expected/flux_square_hbar_2pi.json")));
    assert!((got["phase"].as_f64().unwrap() + 1.0 / (2.0 * PI)).abs() < 1e-15);
}

#[test]
fn flux_identical_paths_vanish() {
    let p = s(&fixture("square_lower.csv")).to_string();
    let got = ok_json(&["flux", "--path1", &p, "--path2", &p]);
    assert_eq!(got["sigma"].as_f64(), Some(0.0));
    assert_eq!(got["n"].as_i64(), Some(0));
}

#[test]
fn flux_endpoint_mismatch_is_config_error() {
    let out = qbm(&[
        "flux",
        "--path1",
        s(&fixture("square_lower.csv")),
        "--path2",
        s(&fixture("mismatched.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("first and last vertices"));
}

#[test]
fn regime_examples() {
    let got = ok_json(&["regime", "--params", s(&fixture("params_crossover.json"))]);
    assert_json_close(&got, &read_json(&fixture("expected/regime_crossover.json")));

    let dir = TempDir::new().unwrap();
    let cold = write_params(dir.path(), "cold.json", 1.0, 0.0);
    assert_eq!(ok_json(&["regime", "--params", s(&cold)])["regime"], "Quantum");
    let hot = write_params(dir.path(), "hot.json", 1.0, 500.0);
    let got = ok_json(&["regime", "--params", s(&hot)]);
    assert_eq!(got["regime"], "Classical");
    assert_eq!(got["ratio"].as_f64(), Some(1000.0));
}

#[test]
fn regime_without_friction_exits_2() {
    let out = qbm(&["regime", "--params", s(&fixture("params_frictionless.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("friction"));
}

fn compare(a_b: &str) -> Value {
    let dir = TempDir::new().unwrap();
    ok_json(&[
        "pattern",
        "--geometry",
        s(&fixture("geometry.json")),
        "--compare",
        a_b,
        "--out",
        s(dir.path()),
    ])
}

#[test]
fn pattern_farfield_agrees_with_derived_closed_form() {
    let got = compare("farfield,closed-derived");
    assert!(got["max_rel_dev"].as_f64().unwrap() < 1e-10, "{got}");
}

// The printed closed form carries 4× the peak and twice the envelope
// frequency of the far-field integral; the comparison reports that gap.
#[test]
fn pattern_printed_closed_form_differs_from_farfield() {
    let got = compare("farfield,closed");
    let dev = got["max_rel_dev"].as_f64().unwrap();
    assert!((dev - 0.75).abs() < 1e-3, "{got}");
}

#[test]
fn pattern_compare_needs_two_methods() {
    let dir = TempDir::new().unwrap();
    let out = qbm(&[
        "pattern",
        "--geometry",
        s(&fixture("geometry.json")),
        "--compare",
        "farfield",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pattern_closed_form_zeros_at_half_integer_multiples() {
    let dir = TempDir::new().unwrap();
    ok_json(&[
        "pattern",
        "--geometry",
        s(&fixture("geometry.json")),
        "--method",
        "closed",
        "--out",
        s(dir.path()),
    ]);
    let csv = dir.path().join("pattern.csv");
    let k = column(&csv, "K")[0];
    let kx: Vec<f64> = column(&csv, "x").iter().map(|x| k * x).collect();
    let p = column(&csv, "P");
    let step = kx[1] - kx[0];
    assert_eq!(kx.len(), 1024);
    assert!((kx[0] + 6.0 * PI).abs() < 1e-12 && (kx[1023] - 6.0 * PI).abs() < 1e-12);
    for m in -6..6 {
        let target = (m as f64 + 0.5) * PI;
        let (imin, _) = kx
            .iter()
            .zip(&p)
            .enumerate()
            .filter(|(_, (x, _))| (**x - target).abs() < 0.25 * PI)
            .min_by(|a, b| a.1 .1.total_cmp(b.1 .1))
            .unwrap();
        assert!(
            (kx[imin] - target).abs() <= step,
            "zero near {target}: found {}",
            kx[imin]
        );
    }
}

#[test]
fn pattern_damped_rescaled_without_friction_matches_farfield() {
    let dir = TempDir::new().unwrap();
    let params = s(&fixture("params_frictionless.json")).to_string();
    let geom = s(&fixture("geometry.json")).to_string();
    for (method, sub) in [("damped-rescaled", "a"), ("farfield", "b")] {
        let out = dir.path().join(sub);
        ok_json(&[
            "pattern",
            "--geometry",
            &geom,
            "--params",
            &params,
            "--method",
            method,
            "--out",
            s(&out),
        ]);
    }
    let a = csv_columns(&dir.path().join("a/pattern.csv"));
    let b = csv_columns(&dir.path().join("b/pattern.csv"));
    for (ca, cb) in a.iter().zip(&b) {
        if ca.0 != "method" {
            assert_eq!(ca, cb, "column {}", ca.0);
        }
    }
}

#[test]
fn pattern_csv_schema() {
    let dir = TempDir::new().unwrap();
    ok_json(&[
        "pattern",
        "--geometry",
        s(&fixture("geometry.json")),
        "--method",
        "exact",
        "--samples",
        "11",
        "--out",
        s(dir.path()),
    ]);
    let text = fs::read_to_string(dir.path().join("pattern.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,P,method,t,K,beta,gamma"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[2], "ExactFresnel");
    // 17 significant digits round-trip.
    let x: f64 = row[0].parse().unwrap();
    assert_eq!(format!("{x:.16e}"), row[0]);
    assert_eq!(text.lines().count(), 12);
}

fn evolve(config: &str, dir: &Path) -> Output {
    qbm(&["evolve", "--config", s(&fixture(config)), "--out", s(dir)])
}

#[test]
fn evolve_trace_follows_exponential_decay() {
    let dir = TempDir::new().unwrap();
    let out = evolve("evolve_packet.json", dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = dir.path().join("trace.csv");
    let re = column(&trace, "re_trace");
    let predicted = column(&trace, "predicted");
    let t = column(&trace, "t");
    assert_eq!(t.len(), 5);
    for ((a, b), t) in re.iter().zip(&predicted).zip(&t) {
        assert!((a - b).abs() < 1e-3 * b, "{a} vs {b}");
        assert!((b - (-0.5 * t).exp()).abs() < 1e-12);
    }
    let snap = dir.path().join("snapshot_000100.csv");
    assert_eq!(
        fs::read_to_string(&snap).unwrap().lines().next(),
        Some("x_plus,x_minus,re,im")
    );
    assert_eq!(column(&snap, "re").len(), 64 * 64);
}

#[test]
fn evolve_trace_constant_without_friction() {
    let dir = TempDir::new().unwrap();
    assert!(evolve("evolve_frictionless.json", dir.path()).status.success());
    for v in column(&dir.path().join("trace.csv"), "re_trace") {
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }
}

#[test]
fn evolve_malformed_json_reports_position() {
    let dir = TempDir::new().unwrap();
    let out = evolve("malformed.json", dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3 column"), "{err}");
}

#[test]
fn evolve_unstable_step_exits_4() {
    let dir = TempDir::new().unwrap();
    let out = evolve("evolve_unstable.json", dir.path());
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"));
}

fn langevin(extra: &[&str], dir: &Path) -> Value {
    let mut args = vec!["langevin", "--out", s(dir)];
    args.extend_from_slice(extra);
    ok_json(&args)
}

#[test]
fn langevin_defaults_recover_einstein() {
    let dir = TempDir::new().unwrap();
    let got = langevin(&[], dir.path());
    let z = got["z_score"].as_f64().unwrap();
    assert!(z.abs() < 3.0, "{got}");
    assert_eq!(got["D_einstein"].as_f64(), Some(1.0));
    assert_eq!(got["n_trajectories"].as_u64(), Some(10_000));
    let written = read_json(&dir.path().join("diffusion.json"));
    assert_eq!(written, got);
    assert_eq!(
        fs::read_to_string(dir.path().join("msd.csv"))
            .unwrap()
            .lines()
            .next(),
        Some("t,msd,stderr")
    );
}

#[test]
fn langevin_zero_temperature_has_no_diffusion() {
    let dir = TempDir::new().unwrap();
    let params = write_params(dir.path(), "cold.json", 1.0, 0.0);
    let got = langevin(
        &["--params", s(&params), "--ensembles", "200"],
        &dir.path().join("run"),
    );
    assert_eq!(got["D_hat"].as_f64(), Some(0.0));
}

#[test]
fn langevin_is_deterministic_across_runs_and_threads() {
    let dir = TempDir::new().unwrap();
    let args = ["--ensembles", "500", "--seed", "11"];
    langevin(&args, &dir.path().join("a"));
    langevin(&args, &dir.path().join("b"));
    let mut with_threads = vec!["--threads", "3"];
    with_threads.extend_from_slice(&args);
    langevin(&with_threads, &dir.path().join("c"));
    let env_run = Command::new(env!("CARGO_BIN_EXE_qbm"))
        .args(["langevin", "--out", s(&dir.path().join("d"))])
        .args(args)
        .env("QBM_THREADS", "1")
        .output()
        .unwrap();
    assert!(env_run.status.success());
    let reference = fs::read(dir.path().join("a/msd.csv")).unwrap();
    for sub in ["b", "c", "d"] {
        assert_eq!(
            fs::read(dir.path().join(sub).join("msd.csv")).unwrap(),
            reference,
            "run {sub}"
        );
    }
}

#[test]
fn langevin_step_too_large_exits_4() {
    let dir = TempDir::new().unwrap();
    let out = qbm(&["langevin", "--dt", "0.5", "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn manifest_replay_reproduces_outputs() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    ok_json(&[
        "pattern",
        "--geometry",
        s(&fixture("geometry.json")),
        "--method",
        "exact",
        "--samples",
        "64",
        "--out",
        s(&first),
    ]);
    let manifest = read_json(&first.join("manifest.json"));
    assert_eq!(manifest["subcommand"], "pattern");
    assert_eq!(manifest["outputs"], serde_json::json!(["pattern.csv"]));
    assert_eq!(manifest["config"]["t"].as_f64(), Some(10.0));
    assert!(manifest["duration_s"].as_f64().unwrap() >= 0.0);

    let second = dir.path().join("second");
    ok_json(&[
        "replay",
        "--manifest",
        s(&first.join("manifest.json")),
        "--out",
        s(&second),
    ]);
    assert_eq!(
        fs::read(first.join("pattern.csv")).unwrap(),
        fs::read(second.join("pattern.csv")).unwrap()
    );

    let lang = dir.path().join("lang");
    langevin(&["--ensembles", "100", "--seed", "5"], &lang);
    let manifest = read_json(&lang.join("manifest.json"));
    assert_eq!(manifest["seed"].as_u64(), Some(5));
    let again = dir.path().join("lang_again");
    ok_json(&[
        "replay",
        "--manifest",
        s(&lang.join("manifest.json")),
        "--out",
        s(&again),
    ]);
    assert_eq!(
        fs::read(lang.join("msd.csv")).unwrap(),
        fs::read(again.join("msd.csv")).unwrap()
    );
}

#[test]
fn writes_stay_inside_out_directory() {
    let cwd = TempDir::new().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_qbm"))
        .current_dir(cwd.path())
        .args([
            "evolve",
            "--config",
            s(&fixture("evolve_frictionless.json")),
            "--out",
            "run",
        ])
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let entries: Vec<_> = fs::read_dir(cwd.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(entries, vec![std::ffi::OsString::from("run")]);
    let mut files: Vec<_> = fs::read_dir(cwd.path().join("run"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    let manifest = read_json(&cwd.path().join("run/manifest.json"));
    let mut listed: Vec<String> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    listed.push("manifest.json".into());
    listed.sort();
    assert_eq!(files, listed);
}

#[test]
fn help_lists_units_for_every_subcommand() {
    for sub in ["pattern", "evolve", "langevin", "flux", "regime", "replay"] {
        let out = qbm(&[sub, "--help"]);
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("Units:"), "{sub}");
        assert!(text.contains("--threads"), "{sub}");
    }
    let text = String::from_utf8_lossy(&qbm(&["langevin", "--help"]).stdout).to_string();
    for flag in ["--dt", "--steps", "--ensembles", "--seed", "--x0", "--v0"] {
        assert!(text.contains(flag), "{flag}");
    }
    assert!(text.contains("[time]") && text.contains("[length]"));
}
