use std::path::PathBuf;
use std::process::{Command, Output};

fn rgglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgglab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rgglab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn limits_table_has_one_row_per_t() {
    let out = rgglab(&["limits", "--dim", "2", "--norm", "2", "--t", "1,10,100"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(rows.len(), 3);
    let rat_hi: f64 = rows[2].split_whitespace().last().unwrap().parse().unwrap();
    assert!((rat_hi - 1.1027).abs() < 0.02, "{rat_hi}");
}

#[test]
fn limits_ratio_upper_tends_to_inverse_packing_density() {
    let out = rgglab(&["limits", "--t", "inf"]);
    let text = stdout(&out);
    let rat_hi: f64 = text.lines().nth(1).unwrap().split_whitespace().last().unwrap().parse().unwrap();
    assert!((rat_hi - 2.0 * 3f64.sqrt() / std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn limits_extra_tables() {
    let out = rgglab(&["limits", "--t", "1", "--beta", "0,0.5,1", "--h", "1,2", "--w", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("c(1,t)"));
    assert!(text.contains("2.718282"));
    assert!(text.contains("H(x)"));
}

#[test]
fn graph_on_three_close_points() {
    let path = scratch("three.txt");
    std::fs::write(&path, "2 3 0 1\n0 0\n0.03 0\n0 0.04\n").unwrap();
    let out = rgglab(&["graph", "--cloud", path.to_str().unwrap(), "--r", "0.1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["omega", "3"]));
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["chi", "3"]));
}

#[test]
fn sample_then_scan_and_graph() {
    let cloud = scratch("cloud.txt");
    let edges = scratch("edges.txt");
    let out = rgglab(&[
        "sample", "--n", "200", "--t", "2", "--seed", "4",
        "--out", cloud.to_str().unwrap(), "--graph", edges.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = rgglab(&["scan", "--cloud", cloud.to_str().unwrap(), "--rho", "0.05"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("exact  true"));
    let out = rgglab(&["scan", "--cloud", cloud.to_str().unwrap(), "--rings", "0.25:1,0.75:0.5", "--r", "0.1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = rgglab(&["graph", "--edges", edges.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("n          200"));
}

#[test]
fn sweep_writes_fixed_header_deterministically() {
    let cfg = scratch("sweep.cfg");
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    std::fs::write(&cfg, "n = 50\nt = 1\ntrials = 1\nseed = 3\n").unwrap();
    for path in [&a, &b] {
        let out = rgglab(&["sweep", "--config", cfg.to_str().unwrap(), "--output", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,r,t,regime,seed,omega,chi_lb,chi_ub,chi_exact,chi_f,scan_phi0,pred_fcli,pred_fcol_lo,pred_fcol_hi,ratio_chi_omega"
    );
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(rgglab(&["limits"]).status.code(), Some(2));
    assert_eq!(rgglab(&["bogus"]).status.code(), Some(2));
    assert_eq!(rgglab(&["limits", "--help"]).status.code(), Some(0));
    assert_eq!(rgglab(&["limits", "--t", "0"]).status.code(), Some(1));
    assert_eq!(rgglab(&["graph", "--edges", "/nonexistent/file"]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_rgglab"))
        .args(["limits", "--t", "1"])
        .env("RGGLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
