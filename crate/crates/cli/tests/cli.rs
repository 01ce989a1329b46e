use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semigroup-ergodic"))
        .args(args)
        .current_dir(dir)
        .env_remove("SEMIGROUP_ERGODIC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn factor_prints_factors_and_omega() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["factor", "--instance", "poly:p=2,k=1", "x^2+x"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x * (x+1), Omega=2\n");
    let o = run(&["factor", "x^4+x^2"], dir.path());
    assert_eq!(stdout(&o), "x^2 * (x+1)^2, Omega=4\n");
}

#[test]
fn counts_with_enumeration_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["counts", "--instance", "poly:p=2,k=1", "--nmax", "12", "--oracle", "enumerate", "--out", "o"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("n,k,count\n0,0,1\n1,0,0\n1,1,2\n"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("o/counts_oracle.json")).unwrap()).unwrap();
    assert_eq!(report["matched"], true);
}

#[test]
fn corrupted_table_exits_two_naming_invariant() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["counts", "--nmax", "6", "--out", "o"], dir.path()).status.success());
    let path = dir.path().join("o/counts.json");
    let mut table: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    table["total"][4][2] = serde_json::json!("999");
    fs::write(dir.path().join("bad.json"), table.to_string()).unwrap();
    let o = run(&["counts", "--check", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("row sum"), "{err}");
    let o = run(&["counts", "--check", "o/counts.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn density_csv_columns_and_limit() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["density", "--m", "3", "--r", "0", "--ngrid", "25,50,100"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,empirical,limit,abs_error"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r[2], "0.333333333333333");
        assert_eq!(r[7], "1/3");
        let (emp, err): (f64, f64) = (r[1].parse().unwrap(), r[3].parse().unwrap());
        assert!(((emp - 1.0 / 3.0).abs() - err).abs() < 1e-14);
    }
    let last: f64 = rows[2][3].parse().unwrap();
    assert!(last < 0.0025);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["no-such-command"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["density"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["density", "--m", "3", "--r", "5"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["density", "--m", "3", "--ngrid", "20,10"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["factor", "--instance", "graph:k4", "x"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn outputs_are_deterministic_and_hash_ignores_key_order() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.cfg"), "command = weyl\nalpha = sqrt2-1\nngrid = 10,20\n").unwrap();
    fs::write(dir.path().join("b.cfg"), "ngrid = 10,20\nalpha = sqrt2-1\ncommand = weyl\n").unwrap();
    assert!(run(&["--config", "a.cfg", "--out", "a", "--plot-data"], dir.path()).status.success());
    let mut o = Command::new(env!("CARGO_BIN_EXE_semigroup-ergodic"));
    o.args(["--config", "b.cfg", "--out", "b"]).current_dir(dir.path()).env("SEMIGROUP_ERGODIC_THREADS", "2");
    assert!(o.output().unwrap().status.success());
    let read = |p: &str| fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a/weyl.csv"), read("b/weyl.csv"));
    assert_eq!(read("a/weyl.json"), read("b/weyl.json"));
    let manifest = |p: &str| -> serde_json::Value { serde_json::from_slice(&read(p)).unwrap() };
    assert_eq!(manifest("a/manifest.json")["config_hash"], manifest("b/manifest.json")["config_hash"]);
    let plot = String::from_utf8(read("a/weyl.plot.dat")).unwrap();
    assert_eq!(plot.lines().count(), 2);
    assert!(plot.starts_with("10 "));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.cfg"), "m = 3\nr = 1\nngrid = 10\n").unwrap();
    let from_cfg = stdout(&run(&["density", "--config", "d.cfg"], dir.path()));
    let overridden = stdout(&run(&["density", "--config", "d.cfg", "--r", "2"], dir.path()));
    let direct = stdout(&run(&["density", "--m", "3", "--r", "2", "--ngrid", "10"], dir.path()));
    assert_ne!(from_cfg, overridden);
    assert_eq!(overridden, direct);
    fs::write(dir.path().join("bad.cfg"), "colour = red\n").unwrap();
    assert_eq!(run(&["density", "--m", "3", "--config", "bad.cfg"], dir.path()).status.code(), Some(1));
}

#[test]
fn construct_b_small_and_literal() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["construct-b", "--instance", "synthetic:q=2,pi=gauss", "--s", "3", "--t", "2", "--verify-n", "10"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "degree,b1,b2\n4,2,2\n5,1,1\n7,2,2\n8,1,1\n");
    let o = run(&["construct-b", "--instance", "synthetic:q=2,pi=gauss"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("s = 442"));
}

#[test]
fn keyprop_and_graph_pi() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["keyprop", "--ngrid", "10,11"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains(",true,") && l.ends_with(",11/25")));
    let o = run(&["graph-pi", "--instance", "graph:k4", "--nmax", "4"], dir.path());
    assert_eq!(stdout(&o), "n,trace,pi\n1,0,0\n2,0,0\n3,24,8\n4,24,6\n");
}

#[test]
fn statistics_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["weyl", "--ngrid", "10,20"],
        vec!["erdos-kac", "--ngrid", "10,20"],
        vec!["br-average", "--system", "finite:m=3", "--observable", "indicator:r=0", "--ngrid", "5,10"],
        vec!["loyd-average", "--ngrid", "10,20"],
        vec!["shift-test", "--a", "rotation:alpha=sqrt2-1", "--ngrid", "10,20"],
        vec!["pnt-check", "--nmax", "10"],
        vec!["primes", "--degree", "4"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).lines().count() >= 3, "{args:?}");
    }
}
