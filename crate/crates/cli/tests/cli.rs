use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn laacoex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laacoex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(line: &str, k: usize) -> f64 {
    line.split(',').nth(k).unwrap().parse().unwrap()
}

#[test]
fn solve_no_lbt_row() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "t2.cfg", "scenario = table2\nlambda_laa = 25\n");
    let o = laacoex(&["solve", &cfg]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scenario,lambda_laa,lambda_wifi,p_block_laa,p_block_wifi,residual,iterations"
    );
    assert!(
        lines[1].starts_with("table2,25,5,0.254817,0.745183,"),
        "{}",
        lines[1]
    );
    // the reference analytic pair is 0.250425/0.745041; this chain sits
    // 0.0044 and 0.0001 away from it
    assert!((field(lines[1], 3) - 0.250425).abs() < 5e-3);
    assert!((field(lines[1], 4) - 0.745041).abs() < 5e-4);
    assert!(!text.contains('\r'));
}

#[test]
fn solve_without_laa_traffic() {
    let dir = TempDir::new().unwrap();
    for text in ["lambda_laa = 0\n", "scenario = table2\nlambda_laa = 0\n"] {
        let cfg = write(&dir, "zero.cfg", text);
        let o = laacoex(&["solve", &cfg]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        let row = out.lines().nth(1).unwrap();
        assert_eq!(field(row, 4), 0.0);
    }
}

#[test]
fn methods_agree_and_dump_pi() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "t1.cfg", "lambda_laa = 50\n");
    let pi_path = dir.path().join("pi.csv");
    let direct = laacoex(&["solve", &cfg, "--dump-pi", pi_path.to_str().unwrap()]);
    let iter = laacoex(&["solve", &cfg, "--method", "iterative"]);
    assert!(direct.status.success() && iter.status.success());
    let (d, i) = (stdout(&direct), stdout(&iter));
    let (d, i) = (d.lines().nth(1).unwrap(), i.lines().nth(1).unwrap());
    for k in [3, 4] {
        assert!((field(d, k) - field(i, k)).abs() < 1e-8);
    }
    assert_eq!(field(d, 6), 0.0);
    assert!(field(i, 6) > 0.0);

    let pi = std::fs::read_to_string(&pi_path).unwrap();
    let mut lines = pi.lines();
    assert_eq!(lines.next(), Some("w,x,y,z,pi"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 27);
    let total: f64 = rows.iter().map(|r| field(r, 4)).sum();
    assert!((total - 1.0).abs() < 1e-4);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let strict = write(&dir, "strict.cfg", "threshold_mode = strict\n");
    assert_eq!(laacoex(&["solve", &strict]).status.code(), Some(3));

    let unknown = write(&dir, "unknown.cfg", "lambda = 3\n");
    assert_eq!(laacoex(&["solve", &unknown]).status.code(), Some(2));
    let negative = write(&dir, "neg.cfg", "mu_laa = -1\n");
    assert_eq!(laacoex(&["solve", &negative]).status.code(), Some(2));
    assert_eq!(
        laacoex(&["solve", "/nonexistent/run.cfg"]).status.code(),
        Some(2)
    );

    let zero = write(&dir, "zero.cfg", "sessions = 0\n");
    assert_eq!(laacoex(&["simulate", &zero]).status.code(), Some(2));
    let ok = write(&dir, "ok.cfg", "sessions = 1000\n");
    assert_eq!(
        laacoex(&["simulate", &ok, "--sessions", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(laacoex(&["sweep", "--q-from", "1"]).status.code(), Some(2));
    assert_eq!(
        laacoex(&["validate", "--table", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn simulate_is_reproducible_and_overridable() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "t2.cfg",
        "scenario = table2\nsessions = 50000\nseed = 4\n",
    );
    let a = laacoex(&["simulate", &cfg]);
    let b = laacoex(&["simulate", &cfg]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = laacoex(&["simulate", &cfg, "--seed", "5"]);
    assert_ne!(a.stdout, c.stdout);

    let out = stdout(&laacoex(&[
        "simulate",
        &cfg,
        "--replications",
        "4",
        "--sessions",
        "20000",
    ]));
    let row = out.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(&cols[..6], ["table2", "25", "5", "20000", "4", "4"]);
    assert!(field(row, 7) > 0.0, "replications give a CI: {row}");
}

#[test]
fn simulate_close_to_reference_simulation() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "t2.cfg",
        "scenario = table2\nreplications = 10\nsessions = 100000\n",
    );
    let out = stdout(&laacoex(&["simulate", &cfg]));
    let row = out.lines().nth(1).unwrap();
    let (p, ci) = (field(row, 6), field(row, 7));
    // reference simulation 0.255031, reference analytic 0.250425
    assert!((p - 0.255031).abs() <= 3.0 * ci, "{p} ± {ci}");
}

#[test]
fn simulate_reports_undefined_stream() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "z.cfg",
        "scenario = table2\nlambda_laa = 0\nsessions = 1000\n",
    );
    let out = stdout(&laacoex(&["simulate", &cfg]));
    let row = out.lines().nth(1).unwrap();
    assert_eq!(row.split(',').nth(6), Some("NA"));
}

#[test]
fn validate_one_table() {
    let o = laacoex(&["validate", "--table", "2", "--sessions", "20000"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(out.lines().skip(1).all(|l| l.starts_with("table2,")));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("table2 analytic vs reference"));
    assert!(!err.contains("interpretation report"));
    // the always-ON analytic band is missed by this chain
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_both_tables_emits_report() {
    let o = laacoex(&["validate", "--sessions", "20000"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 11);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("interpretation report (closest first):"));
    assert!(err.contains("  non-strict/release-on-busy: max relative error 0.0354"));
}

#[test]
fn sweep_grid() {
    let o = laacoex(&["sweep", "--q-from", "2", "--q-to", "10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 36);
    let none: Vec<&str> = rows
        .iter()
        .copied()
        .filter(|r| r.starts_with("none,"))
        .collect();
    assert_eq!(none.len(), 9);
    assert!(none.iter().all(|r| r.ends_with(",0.5,0.25")));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("(d) buffered LAA dropping non-increasing in Q: PASS"));

    let o = laacoex(&[
        "sweep",
        "--variants",
        "none,lbt-only",
        "--q-from",
        "0",
        "--q-to",
        "1",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
    assert_eq!(
        laacoex(&["sweep", "--variants", "bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn dump_pi_to_unwritable_path() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "t.cfg", "");
    let bad = Path::new("/nonexistent/dir/pi.csv");
    let o = laacoex(&["solve", &cfg, "--dump-pi", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
