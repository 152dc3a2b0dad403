use std::path::Path;
use std::process::{Command, Output};

use svp_core::cli::{PoincareRow, SvOutput, TableRow};

fn svp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kloosterman_command() {
    let o = svp(&["kloosterman", "--a", "1", "--b", "1", "--c", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "-1.000000000000\n");
    let o = svp(&["kloosterman", "--a", "0", "--b", "0", "--c", "12"]);
    assert_eq!(stdout(&o), "4.000000000000\n");
    assert_eq!(svp(&["kloosterman", "--a", "1", "--b", "1", "--c", "0"]).status.code(), Some(2));
}

#[test]
fn poincare_command_and_exit_codes() {
    let o = svp(&["poincare", "--N", "9", "--weight", "4", "--m", "-1", "--n-max", "12", "--tol", "1e-5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<PoincareRow> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 12);
    assert!((rows[1].value - 2.0).abs() < 1e-4);
    assert!(rows.iter().all(|r| r.warning.is_none()));

    let o = svp(&["poincare", "--N", "1", "--weight", "2", "--m", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = svp(&["poincare", "--N", "9", "--weight", "4", "--m", "-1", "--n-max", "2", "--tol", "1e-12", "--cap", "500", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.starts_with("n,value,tail_estimate,c_max,warning\n"));
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("tolerance not reached"));
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let o = svp(&["poincare", "--N", "11", "--weight", "2", "--m", "1", "--n-max", "5", "--c-max", "5000", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let bytes = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<PoincareRow> = serde_json::from_str(&bytes).unwrap();
    assert_eq!(serde_json::to_string_pretty(&rows).unwrap() + "\n", bytes);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let path = dir.path().join(name);
        let o = svp(&["--threads", threads, "poincare", "--N", "11", "--weight", "2", "--m", "-1", "--n-max", "6", "--c-max", "20000", "--format", "json", "--output", path.to_str().unwrap()]);
        assert!(o.status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("1", "a.json");
    assert_eq!(a, run("1", "b.json"));
    assert_eq!(a, run("3", "c.json"));
}

#[test]
fn sv_command() {
    let o = svp(&["sv", "--N", "11", "--weight", "2", "--route", "periods", "--format", "json"]);
    assert!(o.status.success());
    let out: SvOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out.records.len(), 1);
    assert!((out.records[0].c + 0.589364).abs() < 1e-6);
    assert!(out.records[0].det_residual.unwrap() < 1e-10);

    let o = svp(&["sv", "--N", "1", "--weight", "12", "--route", "poincare", "--format", "json"]);
    assert!(o.status.success());
    let out: SvOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!out.records[0].residuals.is_empty());
    assert!(out.records[0].max_residual.unwrap() < 1e-9);

    let o = svp(&["sv", "--N", "1", "--weight", "12", "--route", "both"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn table_command() {
    let o = svp(&["table", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<TableRow> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 29);
    let verdict = |l, w| {
        let r = rows.iter().find(|r| r.level == l && r.weight == w).unwrap();
        (r.cm, r.rationality.clone().unwrap())
    };
    assert_eq!(verdict(9, 4), (true, "pass".to_string()));
    assert_eq!(verdict(11, 2), (false, "fail".to_string()));
    assert!(rows.iter().all(|r| r.error.is_none() && r.c.is_some()));
}

fn copy_dir(from: &Path, to: &Path) {
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), to.join(entry.file_name())).unwrap();
    }
}

#[test]
fn verify_detects_a_tampered_qexp_file() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&data, dir.path());

    let run = || {
        Command::new(env!("CARGO_BIN_EXE_svp"))
            .args(["verify", "--only", "9"])
            .env("SVP_DATA_DIR", dir.path())
            .output()
            .unwrap()
    };
    let clean = run();
    assert_eq!(clean.status.code(), Some(0), "{}", stdout(&clean));
    assert!(stdout(&clean).starts_with("PASS  9"));

    let file = dir.path().join("newform_17_2.qexp");
    let text = std::fs::read_to_string(&file).unwrap().replace("\n7 4\n", "\n7 5\n");
    std::fs::write(&file, text).unwrap();
    let tampered = run();
    assert_eq!(tampered.status.code(), Some(1));
    let out = stdout(&tampered);
    assert!(out.starts_with("FAIL  9"), "{out}");
    assert!(out.contains("(17, 2) T_p f = a_p f for p in 2,3,5,7: measured 0.000000000"));
}

#[test]
fn verify_fast_skips_slow_checks() {
    let o = svp(&["verify", "--suite", "fast", "--only", "1,4,5"]);
    let out = stdout(&o);
    assert!(out.contains("SKIP  1"));
    assert!(out.contains("PASS  4"));
    assert!(out.contains("SKIP  5"));
    assert_eq!(o.status.code(), Some(0));
}
