//! End-to-end tests of the `loewner` binary: exit codes, output formats,
//! byte-level determinism of scenario runs, and the quadruple round trip.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loewner"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("loewner-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn sensitivity_prints_table2_row() {
    let out = run(&["sensitivity", "--system", "example1", "--setting", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("2.860e+00"), "kappa(C_mu,pi): {text}");
    assert!(text.contains("3.619e+01"), "kappa(C_lambda,pi)");
    assert!(text.contains("2.202e+02"), "rho_1");
    assert!(text.contains("5.609e-01"), "rho_2");
    assert!(text.contains("4.348e+02"), "bound_1");
    assert!(text.contains("2.278e+02"), "bound_2");
}

#[test]
fn build_single_point_quadruple() {
    let out = run(&[
        "build",
        "--system",
        "example1",
        "--mu",
        "1",
        "--lambda",
        "0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["l"]["rows"], 1);
    assert_eq!(json["l"]["cols"], 1);
    // H(1) = 0.5/3.1 + 0.5/1.1, H(0) = 0.5/2.1 + 0.5/0.1; L = (v - w)/(1 - 0).
    let v = 0.5 / 3.1 + 0.5 / 1.1;
    let w = 0.5 / 2.1 + 0.5 / 0.1;
    let got = json["l"]["entries"][0][0].as_f64().unwrap();
    assert!((got - (v - w)).abs() < 1e-12);
}

#[test]
fn build_roundtrip_bitwise_through_file() {
    let dir = tmp_dir("roundtrip");
    let path = dir.join("quad.json");
    let out = run(&[
        "build",
        "--system",
        "example42",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let parsed: loewner_pencil::scenario::QuadrupleJson = serde_json::from_str(&text).unwrap();
    let quad = parsed.to_quadruple().unwrap();
    // Rebuild in-process and compare entrywise bitwise.
    let pr = loewner_pencil::catalog::five_pole_system();
    let (mu, lambda) = loewner_pencil::catalog::five_pole_distinct_points();
    let sys = loewner_pencil::systems::SystemModel::PoleResidue(pr);
    let data =
        loewner_pencil::loewner::TangentialDataSet::sample_siso(&sys, mu, lambda).unwrap();
    let reference = loewner_pencil::loewner::build_loewner(&data).unwrap();
    assert!(quad.l == reference.l && quad.ls == reference.ls);
    assert!(quad.w == reference.w && quad.v == reference.v);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["build", "--system", "example1", "--mu", "1+fooi", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2), "malformed complex literal");
    let out = run(&["build", "--system", "example1"]);
    assert_eq!(out.status.code(), Some(2), "missing points");
    let out = bin().arg("definitely-not-a-subcommand").output().unwrap();
    assert_eq!(out.status.code(), Some(2), "clap usage error");
}

#[test]
fn validation_errors_exit_3() {
    let out = run(&["sensitivity", "--system", "example1", "--setting", "7"]);
    assert_eq!(out.status.code(), Some(3), "unknown setting");
    let dir = tmp_dir("badscenario");
    let path = dir.join("bad.json");
    fs::write(&path, "{\"analyses\": []}").unwrap();
    let out = run(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "schema violation");
    fs::remove_dir_all(dir).ok();
}

#[test]
fn numerical_failures_exit_4() {
    // Coincident interpolation point and pole.
    let out = run(&[
        "sensitivity",
        "--system",
        "example1",
        "--mu",
        "-2.1",
        "--lambda",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(4), "point on a pole: {}", stdout(&out));
}

#[test]
fn scenario_run_is_byte_deterministic() {
    let dir_a = tmp_dir("det-a");
    let dir_b = tmp_dir("det-b");
    for dir in [&dir_a, &dir_b] {
        let out = run(&[
            "scenario",
            "run",
            "example1_setting1",
            "--out-dir",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stdout(&out));
    }
    let names: Vec<String> = {
        let mut v: Vec<String> = fs::read_dir(&dir_a)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        v.sort();
        v
    };
    assert!(names.contains(&"index.json".to_string()));
    for name in &names {
        let a = fs::read(dir_a.join(name)).unwrap();
        let b = fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "artifact {name} differs between identical runs");
    }
    fs::remove_dir_all(dir_a).ok();
    fs::remove_dir_all(dir_b).ok();
}

#[test]
fn montecarlo_scenario_deterministic_with_seed() {
    // Small seeded run through the scenario machinery twice.
    let scenario = r#"{
        "name": "mc-det",
        "system": {"builtin": {"name": "example1"}},
        "points": {"mu": [[0.0,1.0],[0.0,-1.0]], "lambda": [[0.0,0.0],[1.0,0.0]]},
        "analyses": ["montecarlo"],
        "noise": {"sigma": 0.001, "trials": 50, "seed": 7},
        "output": {"directory": "unused"}
    }"#;
    let dir = tmp_dir("mc");
    let path = dir.join("mc.json");
    fs::write(&path, scenario).unwrap();
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    for out_dir in [&out_a, &out_b] {
        let out = run(&[
            "scenario",
            "run",
            path.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stdout(&out));
    }
    let a = fs::read(out_a.join("montecarlo_scatter.csv")).unwrap();
    let b = fs::read(out_b.join("montecarlo_scatter.csv")).unwrap();
    assert_eq!(a, b, "seeded Monte Carlo must be byte-identical");
    fs::remove_dir_all(dir).ok();
}

#[test]
fn bounds_emits_decay_csvs() {
    let dir = tmp_dir("bounds");
    let out = run(&[
        "bounds",
        "--example",
        "2",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    for name in ["svdecay_cauchy.csv", "svdecay_loewner.csv"] {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "index,sigma_actual,sigma_bound");
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            let actual: f64 = cells[1].parse().unwrap();
            let bound: f64 = cells[2].parse().unwrap();
            assert!(actual <= bound * (1.0 + 1e-12), "{name}: {line}");
        }
    }
    fs::remove_dir_all(dir).ok();
}

#[test]
fn bounds_interlaced_setting_reports_overlap() {
    let dir = tmp_dir("bounds-overlap");
    let out = run(&[
        "bounds",
        "--example",
        "2",
        "--setting",
        "1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "interlaced intervals overlap");
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("overlap"), "{err}");
    fs::remove_dir_all(dir).ok();
}

#[test]
fn scenario_list_names_all_bundled() {
    let out = run(&["scenario", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in [
        "example1_setting1",
        "example1_setting2",
        "example1_setting3",
        "example1_setting4",
        "example1_distance",
        "example42",
        "example43",
        "example2_setting1",
        "example2_setting2",
        "example2_montecarlo",
        "example2_svbounds",
    ] {
        assert!(text.lines().any(|l| l == name), "missing bundled scenario {name}");
    }
}

#[test]
fn hermite_scenario_runs() {
    let dir = tmp_dir("hermite");
    let out = run(&[
        "scenario",
        "run",
        "example43",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(Path::new(&dir.join("n_mu_prime.csv")).exists(), "derivative block emitted");
    fs::remove_dir_all(dir).ok();
}

#[test]
fn system_from_json_file() {
    let dir = tmp_dir("sysfile");
    let path = dir.join("sys.json");
    fs::write(
        &path,
        r#"{"pole_residue": {"poles": [[-1.0, 0.0]], "residues": [[1.0, 0.0]]}}"#,
    )
    .unwrap();
    let out = run(&[
        "build",
        "--system",
        path.to_str().unwrap(),
        "--mu",
        "1",
        "--lambda",
        "0",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // H(s) = 1/(s+1): L = (0.5 - 1)/(1 - 0) = -0.5.
    assert!((json["l"]["entries"][0][0].as_f64().unwrap() + 0.5).abs() < 1e-15);
    fs::remove_dir_all(dir).ok();
}
