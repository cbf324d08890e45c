//! End-to-end runs of the `pvmeta` binary.

use std::collections::BTreeMap;
use std::process::{Command, Output};

fn pvmeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvmeta")).args(args).output().unwrap()
}

struct Csv {
    meta: BTreeMap<String, String>,
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut meta = BTreeMap::new();
        let mut lines = text.lines().peekable();
        while let Some(l) = lines.next_if(|l| l.starts_with('#')) {
            let (k, v) = l[2..].split_once('=').unwrap();
            meta.insert(k.to_string(), v.to_string());
        }
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines
            .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
            .collect();
        Csv { meta, header, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self
            .header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i]).collect()
    }
}

fn ok(args: &[&str]) -> Csv {
    let out = pvmeta(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Csv::parse(&String::from_utf8(out.stdout).unwrap())
}

fn fails_with(args: &[&str], code: i32) -> serde_json::Value {
    let out = pvmeta(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    serde_json::from_str(err.trim()).unwrap()
}

#[test]
fn uniform_density() {
    let t = ok(&["pdf", "--pm", "0.5", "--n", "limit", "--grid", "0.01:0.99:99"]);
    assert_eq!(t.rows.len(), 99);
    assert!(t.col("pdf_pm_0.5").iter().all(|v| (v - 1.0).abs() <= 1e-12));
}

#[test]
fn density_family_ordering() {
    let t = ok(&["pdf", "--pm", "0.05,0.15,0.25", "--n", "limit"]);
    let p = t.col("p");
    let (a, b, c) = (t.col("pdf_pm_0.05"), t.col("pdf_pm_0.15"), t.col("pdf_pm_0.25"));
    let i = p.iter().position(|&x| (x - 0.01).abs() < 1e-12).unwrap();
    assert!(a[i] > b[i] && b[i] > c[i]);
    // The curves cross: at the right end the order is reversed.
    let last = p.len() - 1;
    assert!(a[last] < b[last] && b[last] < c[last]);
}

#[test]
fn median_preserved() {
    let t = ok(&["cdf", "--pm", "0.15", "--n", "20", "--grid", "0.15:0.15:1"]);
    assert!((t.col("cdf_pm_0.15")[0] - 0.5).abs() <= 1e-8);
    assert_eq!(t.meta["n"], "20");
}

#[test]
fn hacking_curves() {
    let t = ok(&["hack", "--pm", "0.5", "--n", "limit", "--mmax", "4"]);
    for (got, want) in t.col("expected_min").iter().zip([0.5, 1.0 / 3.0, 0.25, 0.2]) {
        assert!((got - want).abs() < 1e-9);
    }
    let t = ok(&["hack", "--pm", "0.15", "--n", "20", "--m", "20"]);
    let e = t.col("expected_min");
    assert!((e[0] - 0.22).abs() <= 0.02);
    assert!(e.iter().any(|&v| v < 0.02));
}

#[test]
fn hacking_curve_with_monte_carlo() {
    let t = ok(&[
        "hack", "--pm", "0.15", "--n", "20", "--mmax", "20", "--mc", "--draws", "1000000", "--seed", "42",
    ]);
    let (e, mc, se) = (t.col("expected_min"), t.col("mc_mean"), t.col("mc_std_error"));
    for i in 0..e.len() {
        assert!(
            (e[i] - mc[i]).abs() < 3.0 * se[i],
            "m={}: {} vs {} ± {}",
            i + 1,
            e[i],
            mc[i],
            se[i]
        );
    }
    assert_eq!(t.meta["mc_seed"], "42");
}

#[test]
fn stats_examples() {
    let t = ok(&["stats", "--pm", "0.5", "--n", "limit"]);
    assert!((t.col("p_s")[0] - 0.5).abs() < 1e-9);
    assert!((t.col("std")[0] - 0.2887).abs() < 1e-4);
    assert!((t.col("std")[0] - 12f64.sqrt().recip()).abs() < 1e-6);

    let t = ok(&["stats", "--mean", "0.05", "--n", "limit"]);
    assert!((t.col("q75")[0] - 0.05).abs() <= 0.005);
    assert_eq!(t.meta["p_M_solved"], "true");

    let t = ok(&["stats", "--pm", "0.15", "--n", "20"]);
    assert!((t.col("p_s")[0] - 0.22).abs() <= 0.02);

    fails_with(&["stats", "--pm", "0.1", "--mean", "0.2"], 2);
}

#[test]
fn claims_sweep_table() {
    let t = ok(&["stats", "--sweep-n", "default"]);
    assert_eq!(t.rows.len(), 9);
    assert!(t.col("n").last().unwrap().is_infinite());
    let frac = t.col("fraction_below_0.05_at_mean_0.05");
    assert!((frac.last().unwrap() - 0.752).abs() < 0.005);
    let t = ok(&["stats", "--sweep-n", "5,limit"]);
    assert_eq!(t.col("n")[0], 5.0);
}

#[test]
fn power_examples() {
    let t = ok(&["power", "--ps", "0.8", "--n", "10"]);
    assert!(t.col("density").iter().all(|v| v.is_finite()));
    assert!(t.meta["integral"].parse::<f64>().unwrap().is_finite());

    let err = fails_with(&["power", "--ps", "0.3", "--n", "10"], 2);
    assert!(err["message"].as_str().unwrap().contains("γ3"));

    let t = ok(&["power", "--ps", "0.8", "--n", "10", "--grid", "0.499:0.501:3"]);
    let d = t.col("density");
    assert!(d[0].is_finite() && d[1].is_nan() && d[2].is_finite());
    assert_eq!(t.meta["undefined_count"], "1");
}

#[test]
fn monte_carlo_check() {
    let t = ok(&[
        "mc-check", "--pm", "0.15", "--n", "20", "--draws", "200000", "--seed", "9", "--bins", "50",
    ]);
    assert_eq!(t.rows.len(), 50);
    let ks: f64 = t.meta["ks_distance"].parse().unwrap();
    assert!(ks < 0.005, "{ks}");
    let t = ok(&[
        "mc-check", "--mean", "0.11", "--n", "20", "--m", "3", "--draws", "100000",
    ]);
    let mean: f64 = t.meta["mc_mean"].parse().unwrap();
    let want: f64 = t.meta["analytic_mean"].parse().unwrap();
    let se: f64 = t.meta["mc_std_error"].parse().unwrap();
    assert!((mean - want).abs() < 4.0 * se);
}

#[test]
fn json_output_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = pvmeta(&[
        "pdf",
        "--pm",
        "0.2",
        "--n",
        "7",
        "--grid",
        "0.1:0.9:9",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["columns"][1], "pdf_pm_0.2");
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    assert_eq!(
        v["metadata"]["regenerate"],
        "pvmeta pdf --pm 0.2 --n 7 --grid 0.1:0.9:9"
    );
}

#[test]
fn exit_codes() {
    fails_with(&["pdf", "--pm", "1.5"], 2);
    fails_with(&["pdf", "--pm", "0.1", "--grid", "0.9:0.1:5"], 2);
    fails_with(&["pdf", "--pm", "0.1", "--n", "seven"], 2);
    fails_with(&["pdf", "--pm", "0.5", "--n", "10"], 2);
    fails_with(&["frobnicate"], 2);
    let err = fails_with(&["stats", "--pm", "0.01", "--n", "3", "--quad-tol", "1e-300"], 3);
    assert_eq!(err["error"], "no_convergence");
    assert!(pvmeta(&["--help"]).status.success());
}

#[test]
fn regenerate_line_reproduces_output() {
    let first = pvmeta(&[
        "cdf",
        "--pm",
        "0.05,0.3",
        "--n",
        "12",
        "--grid",
        "0.01:0.5:7",
        "--quad-tol",
        "1e-9",
    ]);
    let text = String::from_utf8(first.stdout).unwrap();
    let table = Csv::parse(&text);
    let cmd: Vec<&str> = table.meta["regenerate"].split(' ').skip(1).collect();
    let again = pvmeta(&cmd);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn figures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = pvmeta(&["figures", "--out", d.path().to_str().unwrap(), "--seed", "7"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
    let read = |f: &str| Csv::parse(&std::fs::read_to_string(a.path().join(f)).unwrap());

    let fig1 = read("fig1.csv");
    assert_eq!(fig1.rows.len(), 20);
    assert!(fig1.col("expected_min").windows(2).all(|w| w[1] < w[0]));

    let fig2 = read("fig2.csv");
    assert_eq!(
        fig2.header,
        ["p", "pdf_n_5", "pdf_n_10", "pdf_n_30", "pdf_n_100", "pdf_n_limit"]
    );

    let fig3 = read("fig3.csv");
    let ks: f64 = fig3.meta["ks_distance"].parse().unwrap();
    assert!(ks < 0.002, "{ks}");
    let solved: f64 = fig3.meta["p_M"].parse().unwrap();
    assert!(solved > 0.0 && solved < 0.11);

    let fig4 = read("fig4.csv");
    assert!(fig4.col("pdf_pm_0.5_n_limit").iter().all(|&v| v == 1.0));
    assert!(fig4.header.iter().any(|h| h.contains("half_plus_1_over_1000")));
}
