use serde_json::Value;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn latkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latkit")).args(args).env_remove("SEED").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("latkit-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn build(dir: &Path, family: &str) -> String {
    let p = dir.join(format!("{family}.lat"));
    let out = latkit(&["construct", family, "--out", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p.to_str().unwrap().to_string()
}

#[test]
fn inspect_reports_hash_and_merits() {
    let dir = scratch("inspect");
    let p = build(&dir, "z4");
    let out = latkit(&["inspect", &p]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(v["min_sq_norm"]["value"], 1.0);
    assert_eq!(v["kissing"]["value"], 8);
    assert!(v["coding_gain_db"].as_f64().unwrap().abs() < 1e-12);
    let want = hex::encode(Sha256::digest(std::fs::read(&p).unwrap()));
    assert_eq!(v["input_sha256"], want.as_str());
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = scratch("bad");
    let junk = dir.join("junk.lat");
    std::fs::write(&junk, "1 2\n3\n").unwrap();
    assert_eq!(latkit(&["inspect", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(latkit(&["construct", "bw6"]).status.code(), Some(2));
    assert_eq!(latkit(&["predict", "--k", "1"]).status.code(), Some(2));
    let p = build(&dir, "bw8");
    let pts = dir.join("short.txt");
    std::fs::write(&pts, "0 0 0\n").unwrap();
    let out = latkit(&["decode", "--lattice", &p, "--strategy", "parity-bdd", "--point", pts.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = latkit(&["simulate", "--lattice", &p, "--strategy", "king-bdd", "--vnr", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let dir = scratch("budget");
    let p = build(&dir, "leech");
    let pts = dir.join("p.txt");
    std::fs::write(&pts, vec!["0.3"; 24].join(" ")).unwrap();
    let out = latkit(&["--budget", "10", "decode", "--lattice", &p, "--strategy", "sphere-enum", "--point", pts.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_writes_csv_and_metadata() {
    let dir = scratch("sim");
    let p = build(&dir, "d4");
    let csv = dir.join("run.csv");
    let out = latkit(&[
        "--seed", "5", "simulate", "--lattice", &p, "--strategy", "parity-bdd", "--vnr", "0,2", "--max-trials", "3000", "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("vnr_db,trials,errors,pe,ci_lo,ci_hi,mean_calls\n"));
    assert_eq!(text.lines().count(), 3);
    let meta: Value = serde_json::from_slice(&std::fs::read(csv.with_extension("csv.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 5);
    assert_eq!(meta["lattice_sha256"], hex::encode(Sha256::digest(std::fs::read(&p).unwrap())).as_str());
}

#[test]
fn seed_flag_overrides_environment() {
    let dir = scratch("seed");
    let p = build(&dir, "d4");
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_latkit"));
        c.env_remove("SEED");
        if let Some(s) = env {
            c.env("SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        c.args(["simulate", "--lattice", &p, "--strategy", "parity-bdd", "--vnr", "0", "--max-trials", "2000"]);
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("1"), None), run(None, Some("1")));
    assert_eq!(run(Some("1"), Some("2")), run(None, Some("2")));
    assert_ne!(run(None, Some("1")), run(None, Some("2")));
}

#[test]
fn predict_emits_csv_with_base_hash() {
    let dir = scratch("predict");
    let base = dir.join("base.csv");
    std::fs::write(&base, "vnr_db,pe\n0,1e-1\n2,1e-2\n4,1e-3\n").unwrap();
    let out = latkit(&["predict", "--family", "leech", "--base", base.to_str().unwrap(), "--vnr", "1,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let want = hex::encode(Sha256::digest(std::fs::read(&base).unwrap()));
    assert_eq!(lines.next(), Some(format!("# sha256 base={want}").as_str()));
    assert_eq!(lines.next(), Some("vnr_db,value,predictor_id"));
    assert_eq!(lines.count(), 2);
}
