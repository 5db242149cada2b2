use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn fracdim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.cfg"), "# demo S\nschedule = recurrence k0=5\na1 = 1/2\na2 = 1/4\n").unwrap();
    fs::write(dir.path().join("t.cfg"), "schedule = recurrence k0=5\na1 = 1/4\na2 = 1/3\n").unwrap();
    fs::create_dir(dir.path().join("nested")).unwrap();
    fs::write(dir.path().join("nested/p.cfg"), "factor = ../s.cfg\nfactor = ../t.cfg\n").unwrap();
    dir
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn density_csv_covers_every_k() {
    let dir = workspace();
    let out = fracdim(dir.path(), &["density", "--spec", "s.cfg", "--k-max", "25200", "--out", "d.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,count,density_num,density_den,density_float");
    assert_eq!(lines.len(), 25201);
    assert_eq!(lines[35], "35,10,2,7,0.285714285714");
    assert_eq!(lines[120], "120,53,53,120,0.441666666667");
    assert_eq!(lines[600], "600,173,173,600,0.288333333333");
}

#[test]
fn output_is_deterministic() {
    let dir = workspace();
    for args in [
        &["checkpoints", "--spec", "s.cfg", "--n", "12"][..],
        &["dims", "--product", "nested/p.cfg", "--n", "40", "--k-max", "500"][..],
        &["crosscheck", "--product", "nested/p.cfg", "--level", "45", "--seed", "3", "--count", "300"][..],
        &["remark1", "--n", "30"][..],
    ] {
        let a = fracdim(dir.path(), args);
        let b = fracdim(dir.path(), args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn crosscheck_full_enumeration() {
    let dir = workspace();
    let out = fracdim(dir.path(), &["crosscheck", "--product", "nested/p.cfg", "--level", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(csv.lines().count(), 22);
    assert_eq!(csv.lines().last().unwrap(), "20,1024,10,true");
    assert!(stderr(&out).contains("1024 points"));
}

#[test]
fn sampling_fallback_is_announced() {
    let dir = workspace();
    let out = fracdim(
        dir.path(),
        &["sample", "--spec", "s.cfg", "--level", "60", "--cap", "1000", "--seed", "9", "--count", "5"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("sampling 5 points with seed 9"));
    let csv = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(csv.lines().next(), Some("x1"));
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.lines().skip(1).all(|l| l.ends_with("/2^60")));
}

#[test]
fn remark1_report_passes() {
    let dir = workspace();
    let out = fracdim(dir.path(), &["remark1", "--n", "60", "--out", "r.txt"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("r.txt")).unwrap();
    assert!(text.contains("7/12 > 1/2 = 2 dim_H E holds"));
    assert!(text.contains("status: PASS"));

    let shallow = fracdim(dir.path(), &["remark1", "--n", "4"]);
    assert_eq!(shallow.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&shallow.stdout).contains("inconclusive at this depth"));
}

#[test]
fn theorem_instances() {
    let dir = workspace();
    let ok = fracdim(
        dir.path(),
        &["theorem", "--which", "1", "--alpha", "6/5", "--beta", "1/2", "--gamma", "1", "--lambda", "2"],
    );
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("d = 3"));

    let degenerate = fracdim(
        dir.path(),
        &["theorem", "--which", "2", "--alpha", "1/5", "--beta", "3/10", "--gamma", "3/5", "--lambda", "1/2"],
    );
    assert_eq!(degenerate.status.code(), Some(2));
    assert!(stderr(&degenerate).contains("degenerate lambda"));

    let violated = fracdim(
        dir.path(),
        &["theorem", "--which", "1", "--alpha", "1/5", "--beta", "1/2", "--gamma", "1/3", "--lambda", "1"],
    );
    assert_eq!(violated.status.code(), Some(2));
    assert!(stderr(&violated).contains("beta <= gamma"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = workspace();
    fs::write(dir.path().join("bad.cfg"), "a1 = 1/2\n\na2 = one quarter\n").unwrap();
    let out = fracdim(dir.path(), &["density", "--spec", "bad.cfg", "--k-max", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.cfg:3"), "{}", stderr(&out));

    fs::write(dir.path().join("gap.cfg"), "schedule = explicit 5,6,7,8\na1 = 1/2\na2 = 1/2\n").unwrap();
    let out = fracdim(dir.path(), &["checkpoints", "--spec", "gap.cfg", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fracdim(dir.path(), &["density", "--spec", "missing.cfg", "--k-max", "10"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fracdim(dir.path(), &["dims", "--spec", "s.cfg", "--product", "nested/p.cfg"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fracdim(dir.path(), &["crosscheck", "--spec", "s.cfg", "--level", "300", "--cap", "10", "--count", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
