use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn afm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn wavefunction(args: &[&str]) -> Vec<(f64, f64)> {
    let out = afm(&[&["wavefunction"], args].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,psi"));
    lines
        .map(|l| {
            let (r, psi) = l.split_once(',').unwrap();
            (r.parse().unwrap(), psi.parse().unwrap())
        })
        .collect()
}

fn max_gap(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.1 - y.1).abs()).fold(0.0, f64::max)
}

fn peak(a: &[(f64, f64)]) -> f64 {
    a.iter().map(|x| x.1.abs()).fold(0.0, f64::max)
}

#[test]
fn solve_reports_closed_forms() {
    let out = afm(&["solve", "linear", "quadratic", "0", "0"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["energy"].as_f64().unwrap() - 2.476_445).abs() < 1e-6);
    assert_eq!(v["bound"], "upper");

    let v = json(&afm(&["solve", "log", "coulomb", "0", "0"]));
    let want = (1.0 - 2f64.ln()) / 2.0;
    assert!((v["energy"].as_f64().unwrap() - want).abs() < 1e-12);
}

#[test]
fn missing_state_exits_with_reason() {
    let out = afm(&["solve", "exp", "coulomb", "1", "0", "--k", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "no-bound-state");
    assert_eq!(v["reason"], "state-not-allowed");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(afm(&["solve", "exp", "coulomb", "0", "0"]).status.code(), Some(64));
    assert_eq!(afm(&["bogus"]).status.code(), Some(64));
    assert_eq!(afm(&["solve", "linear", "quadratic", "0"]).status.code(), Some(64));
    assert_eq!(afm(&[]).status.code(), Some(64));
    assert_eq!(afm(&["--help"]).status.code(), Some(0));
}

#[test]
fn units_text() {
    let out = afm(&["--help-units"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p²/2m + a r"));
}

#[test]
fn tables_are_deterministic() {
    let first = afm(&["table", "obs-ho", "csv"]);
    let second = afm(&["table", "obs-ho", "--format", "csv"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.starts_with("row,column,computed,published,diff,tolerance,status\n"));
    let row: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("r,n=0,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(row[3], "0.976");
    assert!(row[4].parse::<f64>().unwrap() <= 0.0005, "{row:?}");
}

#[test]
fn table_values_and_json() {
    let text = String::from_utf8(afm(&["table", "log-results", "csv"]).stdout).unwrap();
    assert!(text.contains("\nl=0 n=0 Hy,R(E),0.4369,0.437,"), "{text}");

    let v = json(&afm(&["table", "eckart", "--format", "json"]));
    let cells: Vec<f64> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["row"] == "HO;0")
        .map(|r| r["computed"].as_f64().unwrap())
        .collect();
    for (got, want) in cells.iter().zip([0.997, 0.995, 0.265]) {
        assert!((got - want).abs() <= 0.003, "{got} vs {want}");
    }
}

#[test]
fn strict_flags_misses() {
    assert_eq!(afm(&["table", "eckart", "--strict"]).status.code(), Some(0));
    // one published exponential cell is outside its band
    assert_eq!(afm(&["table", "exp-results", "--strict"]).status.code(), Some(1));
}

#[test]
fn wavefunctions_are_normalized() {
    for (aux, family) in [
        ("exact", "linear"),
        ("quadratic", "linear"),
        ("coulomb", "log"),
        ("exact", "log"),
    ] {
        let points = wavefunction(&[family, aux, "1", "0", "--samples", "2000"]);
        let dr = points[1].0 - points[0].0;
        let norm: f64 = points.iter().map(|(r, psi)| 4.0 * PI * psi * psi * r * r * dr).sum();
        assert!((norm - 1.0).abs() < 1e-3, "{family} {aux}: {norm}");
    }
}

#[test]
fn figure_shapes() {
    let grid = ["--r-max", "10", "--samples", "500"];
    let state = |aux: &str, n: &str| wavefunction(&[&["linear", aux, n, "0"], &grid[..]].concat());
    let exact0 = state("exact", "0");
    // |ψ(0)|² ratio 0.921 alone puts 1 - √0.921 ≈ 4% of the peak at the origin
    let gap = max_gap(&exact0, &state("quadratic", "0"));
    assert!(gap < 0.045 * peak(&exact0), "{gap}");
    let coulomb_gap = max_gap(&exact0, &state("coulomb", "0"));
    assert!(gap < 0.15 * coulomb_gap, "{gap} {coulomb_gap}");
    let exact1 = state("exact", "1");
    let gap = max_gap(&exact1, &state("coulomb", "1"));
    assert!(gap > 0.05 * peak(&exact1), "{gap}");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("afm-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("oracle.json");
    let out = afm(&["oracle", "linear", "0", "0", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["energy"].as_f64().unwrap() - 2.338_107_410).abs() < 1e-7);
    std::fs::remove_dir_all(dir).unwrap();
}
