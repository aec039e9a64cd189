use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ffspin::cli::{execute, geometry_file, Command as Cmd, Format, RunConfig};
use ffspin::cluster::{ClusterGeometry, Geometry};
use ffspin::error::Result;
use ffspin::operators::{golden_reg_matrix, Operator, RegWeights};
use ffspin::verify::VerifyOptions;
use serde_json::Value;

fn ffspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffspin")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    ffspin(args).status.code().unwrap()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--out", p]);
    let out = ffspin(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    fs::read(&path).unwrap()
}

fn csv_rows(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(bytes);
    let head = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    (head, rows)
}

fn json_rows(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let v: Value = serde_json::from_slice(bytes).unwrap();
    let head = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect();
    let rows = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    (head, rows)
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["evolve", "--geometry", "star", "--steps", "2000", "--stride", "100"];
    let a = run_to(dir.path(), "a.csv", &args);
    let b = run_to(dir.path(), "b.csv", &args);
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["spectrum", "drive", "evolve"] {
        let base = [cmd, "--geometry", "chain4", "--steps", "2000", "--stride", "250"];
        let csv = csv_rows(&run_to(dir.path(), "x.csv", &base));
        let mut j = base.to_vec();
        j.extend(["--format", "json"]);
        let json = json_rows(&run_to(dir.path(), "x.json", &j));
        assert_eq!(csv.0, json.0, "{cmd}");
        assert_eq!(csv.1.len(), 9);
        for (a, b) in csv.1.iter().zip(&json.1) {
            let bits = |r: &Vec<f64>| r.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(a), bits(b), "{cmd}");
        }
    }
}

#[test]
fn config_file_layering() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "geometry = pyramid\nsteps = 1000\nstride = 500\nformat = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (head, rows) = json_rows(&run_to(dir.path(), "a.json", &["drive", "--config", c]));
    assert_eq!(head, ["t", "v", "vW1", "vQ", "degenerate"]);
    assert_eq!(rows.len(), 3);
    let (_, rows) = json_rows(&run_to(
        dir.path(),
        "b.json",
        &["drive", "--config", c, "--stride", "250"],
    ));
    assert_eq!(rows.len(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["spectrum", "--steps", "1000", "--stride", "100"]), 0);
    assert_eq!(code(&["spectrum", "--geometry", "ring"]), 1);
    assert_eq!(code(&["spectrum", "--steps", "1000", "--stride", "300"]), 1);
    assert_eq!(code(&["spectrum", "--tff", "0"]), 1);
    assert_eq!(code(&["spectrum", "--out", "/nonexistent/dir/x.csv"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&["spectrum", "--config", cfg.to_str().unwrap()]), 1);
    let slow = [
        "evolve",
        "--geometry",
        "pyramid",
        "--vbar",
        "1",
        "--tff",
        "100",
        "--steps",
        "1000",
        "--stride",
        "100",
    ];
    let out = ffspin(&slow);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("more steps"));
}

#[test]
fn verify_passes_and_reports() {
    let out = ffspin(&["verify", "--geometry", "chain4", "--steps", "10000", "--stride", "1000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["golden", "closed_form", "rank", "normalization", "fidelity"]);
    assert_eq!(v["checks"][2]["value"], 5.0);
}

fn sign_flipped(g: &ClusterGeometry, w: &RegWeights) -> Result<Operator> {
    let mut m = golden_reg_matrix(g, w)?;
    m.0[(5, 0)] = -m.0[(5, 0)];
    Ok(m)
}

#[test]
fn verify_catches_mutated_table() {
    let config = RunConfig {
        geometry: Geometry::Square,
        steps: 2000,
        stride: 1000,
        ..RunConfig::default()
    };
    let opts = VerifyOptions {
        golden: sign_flipped,
        ..VerifyOptions::default()
    };
    let mut out = Vec::new();
    assert!(!execute(Cmd::Verify, &config, &opts, &mut out).unwrap());
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["checks"][0]["name"], "golden");
    assert_eq!(v["checks"][0]["pass"], false);
}

#[test]
fn all_geometries_fan_out() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("out");
    let out = ffspin(&[
        "spectrum",
        "--all-geometries",
        "--steps",
        "1000",
        "--stride",
        "500",
        "--out",
        d.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for g in Geometry::ALL {
        let path = geometry_file(&d, Cmd::Spectrum, g, Format::Csv);
        let (head, rows) = csv_rows(&fs::read(&path).unwrap());
        assert_eq!(head.len(), 2 + g.cluster().dim(), "{g}");
        assert_eq!(rows.len(), 3);
    }
    assert_eq!(code(&["spectrum", "--all-geometries"]), 1);
}
