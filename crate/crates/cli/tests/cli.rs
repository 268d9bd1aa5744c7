use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mlvc(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlvc"))
        .args(args)
        .env("MLF_OUT_DIR", out_dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim_start_matches([' ', '=']).to_string()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn config(dir: &Path, text: &str) -> String {
    let p = dir.join("exp.cfg");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const CONFIG_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");

#[test]
fn ml_eval_examples() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mlvc(tmp.path(), &["ml", "eval", "--alpha", "1", "--beta", "1", "--z", "0+1i"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let re: f64 = field(&s, "re").parse().unwrap();
    let im: f64 = field(&s, "im").parse().unwrap();
    assert!((re - 1f64.cos()).abs() < 1e-14 && (im - 1f64.sin()).abs() < 1e-14);

    let o = mlvc(tmp.path(), &["ml", "eval", "--alpha", "2", "--beta", "1", "--z", "-9.869604401089358"]);
    assert_eq!(o.status.code(), Some(0));
    let re: f64 = field(&stdout(&o), "re").parse().unwrap();
    assert!((re + 1.0).abs() < 1e-12);

    let o = mlvc(tmp.path(), &["ml", "eval", "--alpha", "0.5", "--beta", "0.5", "--z", "-100"]);
    assert_eq!(field(&stdout(&o), "backend"), "asymptotic");
    let o = mlvc(tmp.path(), &["ml", "eval", "--alpha", "0.5", "--beta", "0.5", "--z", "-4"]);
    let re: f64 = field(&stdout(&o), "re").parse().unwrap();
    assert!((re - 0.016_191_753_047_510_727).abs() < 1e-14);

    for bad in [["-1", "1", "1"], ["0.5", "0.7", "3-200i"], ["0.5", "0.7", "1+"]] {
        let o = mlvc(tmp.path(), &["ml", "eval", "--alpha", bad[0], "--beta", bad[1], "--z", bad[2]]);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn sweep_writes_csv_and_fit() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mlvc(tmp.path(), &["sweep", &format!("{CONFIG_DIR}/th1.cfg")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(tmp.path().join("th1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 14);
    assert_eq!(csv.lines().next(), Some("lambda,re,im,abs,err_est"));
    let slope: f64 = field(&stdout(&o), "slope").split_whitespace().next().unwrap().parse().unwrap();
    assert!((slope + 1.0).abs() < 0.01, "{slope}");
}

#[test]
fn sweep_edge_grids() {
    let tmp = tempfile::tempdir().unwrap();
    let base = "[order]\nalpha = 0.5\nbeta = 0.7\n[problem]\ninterval = 0.0, 1.0\nphase = affine 2.0 1.0\namp = constant 1.0\n[output]\nname = edge\n";
    let cfg = config(tmp.path(), &format!("{base}[grid]\nvalues =\n"));
    let o = mlvc(tmp.path(), &["sweep", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(tmp.path().join("edge.csv")).unwrap(), "lambda,re,im,abs,err_est\n");

    let cfg = config(tmp.path(), &format!("{base}[grid]\nvalues = 1.0, -2.0\n"));
    assert_eq!(mlvc(tmp.path(), &["sweep", &cfg]).status.code(), Some(2));

    let cfg = config(tmp.path(), &format!("{base}[grid]\nvalues = 1.0\nbogus = 3\n"));
    let o = mlvc(tmp.path(), &["sweep", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    assert_eq!(mlvc(tmp.path(), &["sweep", "/nonexistent/x.cfg"]).status.code(), Some(2));
}

#[test]
fn verify_single_and_unknown() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(mlvc(tmp.path(), &["verify", "nosuch"]).status.code(), Some(2));

    let o = mlvc(tmp.path(), &["verify", "th4.1", "--svg"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 2, "{s}");
    assert!(lines[0].starts_with("th4.1") && lines[0].contains("explicit") && lines[0].ends_with("PASS"));
    assert_eq!(lines[1], "1/1 passed");
    assert_eq!(fs::read_to_string(tmp.path().join("summary.txt")).unwrap(), s);
    assert!(fs::read_to_string(tmp.path().join("th4.1.svg")).unwrap().starts_with("<svg"));
    let csv = fs::read_to_string(tmp.path().join("th4.1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 18);
}

#[test]
fn verify_all_reports_every_case() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mlvc(tmp.path(), &["verify", "all"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 18, "{s}");
    let passed = lines[..17].iter().filter(|l| l.ends_with("PASS")).count();
    assert_eq!(lines[17], format!("{passed}/17 passed"));
    let want = if passed == 17 { 0 } else { 1 };
    assert_eq!(o.status.code(), Some(want));
    for l in &lines[..17] {
        let id = l.split_whitespace().next().unwrap();
        assert!(tmp.path().join(format!("{id}.csv")).exists(), "{id}");
    }
}

#[test]
fn pde_command() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mlvc(tmp.path(), &["pde", &format!("{CONFIG_DIR}/tfpde.cfg")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().any(|l| l.starts_with("tfpde") && l.ends_with("PASS")));
    let csv = fs::read_to_string(tmp.path().join("tfpde-0.8.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,sup_abs_u"));
    assert_eq!(csv.lines().count(), 14);
    assert!(tmp.path().join("tfpde-0.8.svg").exists());

    assert_eq!(mlvc(tmp.path(), &["pde", "--alpha", "1.2"]).status.code(), Some(2));
    assert_eq!(mlvc(tmp.path(), &["pde", "--mu", "-1"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify", "th1", "th2.1", "th4.2"];
    let (oa, ob) = (mlvc(a.path(), &args), mlvc(b.path(), &args));
    assert_eq!(oa.stdout, ob.stdout);
    for name in ["th1.csv", "th2.1.csv", "th4.2.csv", "summary.txt"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
