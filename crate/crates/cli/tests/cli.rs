use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use groupoidal::groupoid::FiniteGroupoid;
use groupoidal::io::groupoid_to_json;
use serde_json::Value;
use tempfile::TempDir;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupoidal"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("GROUPOIDAL_OUT")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn axioms_on_builtins() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["axioms", "--pair", "4"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["checks"].as_array().unwrap().len(), 9);
    assert_eq!(r["results"]["classification"]["label"], "principal transitive");
    assert!(dir.path().join("axioms.json").exists());

    let out = run_in(dir.path(), &["axioms", "--group", "Z4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["classification"]["label"], "nonprincipal transitive");

    let out = run_in(dir.path(), &["axioms", "--group", "Z2", "--units", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["order"], 18);
}

#[test]
fn broken_file_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let broken = FiniteGroupoid::pair(3).unwrap().with_composition(1, 4, Some(0)).unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, groupoid_to_json(&broken)).unwrap();
    let out = run_in(dir.path(), &["axioms", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("axiom d failed"), "{stderr}");
    let r = report(&out);
    assert_eq!(r["passed"], false);
    let d = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "axiom d").unwrap();
    assert_eq!(d["passed"], false);
    assert_eq!(d["witness"].as_array().unwrap().len(), 3);
    assert!(r["results"].get("classification").is_none());
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["axioms", "--group", "Q8"],
        vec!["axioms", "--file", "/no/such/file.json"],
        vec!["axioms"],
        vec!["axioms", "--pair", "2", "--group", "Z2"],
        vec!["tomo", "photon", "--z", "1+x"],
        vec!["tomo", "spin", "--j", "0.3"],
        vec!["equiv", "prop1", "--n", "0"],
        vec!["tomo", "photon", "--z", "1", "--reconstruct"],
        vec!["--threads", "0", "axioms", "--pair", "2"],
    ] {
        let out = run_in(dir.path(), &args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let path = dir.path().join("garbage.json");
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(code(&run_in(dir.path(), &["axioms", "--file", path.to_str().unwrap()])), 2);
}

#[test]
fn equivalence_campaigns() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["equiv", "prop1", "--n", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["max_dev"], 0.0);

    let out = run_in(dir.path(), &["equiv", "genconv", "--units", "2", "--isotropy", "Z2"]);
    assert_eq!(code(&out), 0);
    let n = &report(&out)["results"]["normalization"];
    assert_eq!(n["closed_form"], 3);
    assert_eq!(n["trace"], 4);

    let out = run_in(dir.path(), &["equiv", "coherent", "--grid", "5", "--spacing", "0.5"]);
    assert_eq!(code(&out), 0);
    assert!(report(&out)["results"]["gap"].as_f64().unwrap() > 0.01);
}

#[test]
fn spin_tomograms_are_stochastic() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["tomo", "spin", "--j", "1", "--state", "mixed", "--samples", "100", "--reconstruct"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&dir.path().join("spin_tomograms.csv"));
    assert_eq!(rows[0], ["j", "alpha", "beta", "gamma", "m", "probability"]);
    assert_eq!(rows.len(), 1 + 300);
    for chunk in rows[1..].chunks(3) {
        let sum: f64 = chunk.iter().map(|r| r[5].parse::<f64>().unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
    let rec: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("spin_reconstruction.json")).unwrap()).unwrap();
    assert!(rec["frobenius_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn vacuum_photon_column_is_poisson() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["tomo", "photon", "--state", "vac", "--z", "1+0i"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&dir.path().join("photon_tomogram.csv"));
    assert_eq!(rows[0], ["re_z", "im_z", "n", "P"]);
    let mut fact = 1.0;
    for (n, row) in rows[1..].iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        let p: f64 = row[3].parse().unwrap();
        assert!((p - (-1.0f64).exp() / fact).abs() < 1e-8, "n = {n}");
    }
}

#[test]
fn photon_reconstruction_report() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["tomo", "photon", "--Nt", "12", "--radius", "3", "--spacing", "0.3", "--reconstruct"]);
    assert_eq!(code(&out), 0);
    let rec: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("photon_reconstruction.json")).unwrap()).unwrap();
    for key in ["scheme", "grid", "N_t", "frobenius_error", "trace_error", "seed"] {
        assert!(rec.get(key).is_some(), "{key}");
    }
    assert_eq!(rec["scheme"], "photon");
}

#[test]
fn symplectic_reconstruction_of_vacuum() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["tomo", "symplectic", "--state", "vac", "--Nt", "32", "--L", "6", "--step", "0.1", "--reconstruct"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(r["results"]["reconstruction"]["frobenius_error"].as_f64().unwrap() < 1e-3);
    assert_eq!(r["results"]["reconstruction"]["N_t"], 32);
    assert_eq!(r["results"]["reconstruction"]["grid"]["side"], 121);
}

#[test]
fn small_lattice_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["tomo", "symplectic", "--Nt", "12", "--L", "2", "--step", "0.2", "--reconstruct"]);
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("use L >="), "{stderr}");
    assert!(dir.path().join("tomo-symplectic.json").exists());

    let out = run_in(dir.path(), &["roundtrip", "--L", "3", "--points", "200"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("half-width of at least"));

    assert_eq!(code(&run_in(dir.path(), &["kernel", "--pair", "5"])), 3);
}

#[test]
fn kernel_and_roundtrip_exports() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["kernel", "--pair", "2"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&dir.path().join("kernel.csv"));
    assert_eq!(rows.len(), 1 + 64);
    let ones = rows[1..].iter().filter(|r| r[3] == "1" || r[3] == "1.0").count();
    assert_eq!(ones, 8);

    let out = run_in(dir.path(), &["kernel", "--group", "Z2", "--units", "2"]);
    assert_eq!(code(&out), 0);

    let out = run_in(dir.path(), &["roundtrip", "--csv"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(r["results"]["round_trip"].as_f64().unwrap() < 1e-6);
    assert_eq!(csv_rows(&dir.path().join("position_symbol.csv")).len(), 1 + 512 * 512);
}

#[test]
fn environment_overrides_output_directory() {
    let flag = TempDir::new().unwrap();
    let env = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_groupoidal"))
        .args(["axioms", "--pair", "2", "--out"])
        .arg(flag.path())
        .env("GROUPOIDAL_OUT", env.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(env.path().join("axioms.json").exists());
    assert!(!flag.path().join("axioms.json").exists());
}

#[test]
fn seeded_runs_reproduce() {
    let csv = |seed: &str| {
        let dir = TempDir::new().unwrap();
        let out = run_in(dir.path(), &["--seed", seed, "--threads", "1", "tomo", "spin", "--j", "1.5", "--samples", "20"]);
        assert_eq!(code(&out), 0);
        assert_eq!(report(&out)["threads"], 1);
        fs::read_to_string(dir.path().join("spin_tomograms.csv")).unwrap()
    };
    assert_eq!(csv("7"), csv("7"));
    assert_ne!(csv("7"), csv("8"));
}
