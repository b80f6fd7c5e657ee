//! End-to-end runs of the `vdc` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn vdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdc"))
        .args(args)
        .env_remove("VDC_PRECISION_BITS")
        .output()
        .expect("run vdc")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn witness_for_multiples_of_three() {
    let out = scratch("w3.json");
    let o = vdc(&["witness", "--set", "multiples:3", "--epsilon", "0.1", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert!(v["result"]["witness"]["certified_min"].as_f64().unwrap() >= -0.1);
    assert_eq!(v["tool"], "vdc");
    assert_eq!(v["config"]["subcommand"], "witness");

    let ok = vdc(&["verify", "--witness", path(&out), "--set", "multiples:3", "--epsilon", "0.1"]);
    assert_eq!(code(&ok), 0);
    // Multiples of 3 are not all multiples of 6.
    let spectrum = vdc(&["verify", "--witness", path(&out), "--set", "multiples:6", "--epsilon", "0.1"]);
    assert_eq!(code(&spectrum), 3);
    let bound = vdc(&["verify", "--witness", path(&out), "--set", "multiples:3", "--epsilon", "0.01"]);
    assert_eq!(code(&bound), 4);
}

#[test]
fn progression_is_refuted() {
    let o = vdc(&["refute", "--progression", "2,1"]);
    assert_eq!(code(&o), 5);
    let o = vdc(&["refute", "--progression", "3,6"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn kmf_obstruction_at_three() {
    let out = scratch("kmf.json");
    let o = vdc(&["kmf", "--poly", "z^2+1", "--qmax", "10", "--out", path(&out)]);
    assert_eq!(code(&o), 5);
    let v = read_json(&out);
    assert_eq!(v["result"]["outcome"]["q"], 3, "{v}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&vdc(&["witness", "--set", "multiples:3"])), 2);
    assert_eq!(code(&vdc(&["nonsense"])), 2);
    assert_eq!(code(&vdc(&["weyl", "--family", "poly:n^2", "--precision", "32"])), 2);
    let low = Command::new(env!("CARGO_BIN_EXE_vdc"))
        .args(["weyl", "--family", "poly:n^2", "-n", "100"])
        .env("VDC_PRECISION_BITS", "16")
        .output()
        .unwrap();
    assert_eq!(code(&low), 2);
}

#[test]
fn artifacts_are_reproducible() {
    let a = scratch("rep_a.json");
    let b = scratch("rep_b.json");
    let args = |p: &Path| {
        vec![
            "weyl".to_string(),
            "--family".into(),
            "poly:sqrt(2) n^2".into(),
            "-n".into(),
            "20000".into(),
            "--h".into(),
            "3".into(),
            "--out".into(),
            path(p).into(),
        ]
    };
    let run = |p: &Path, extra: &[&str]| {
        let mut v = args(p);
        v.extend(extra.iter().map(|s| s.to_string()));
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        assert_eq!(code(&vdc(&refs)), 0);
        std::fs::read(p).unwrap()
    };
    let first = run(&a, &[]);
    let again = run(&a, &[]);
    assert_eq!(first, again, "rerun must be byte-identical");

    let one = run(&b, &["--threads", "1"]);
    let four = run(&b, &["--threads", "4"]);
    let result = |bytes: &[u8]| serde_json::from_slice::<Value>(bytes).unwrap()["result"].clone();
    assert_eq!(result(&one), result(&four));
    assert_eq!(result(&one), result(&first));

    let text = String::from_utf8(first).unwrap();
    assert!(text.ends_with('\n'));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["config"]["precision_bits"], 128, "{v}");
}

#[test]
fn precision_from_environment_is_recorded() {
    let out = scratch("prec.json");
    let o = Command::new(env!("CARGO_BIN_EXE_vdc"))
        .args(["gen", "--family", "poly:sqrt(3) n", "-n", "5", "--out", path(&out)])
        .env("VDC_PRECISION_BITS", "512")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read_json(&out)["config"]["precision_bits"], 512);
}

#[test]
fn csv_is_written() {
    let csv = scratch("w.csv");
    let o = vdc(&["witness", "--set", "multiples:2", "--epsilon", "0.25", "--csv", path(&csv)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,a"));
    assert!(lines.count() >= 2);
}

#[test]
fn shifted_primes() {
    assert_eq!(code(&vdc(&["refute", "--shifted-prime", "1,-1"])), 0);
    assert_eq!(code(&vdc(&["refute", "--shifted-prime", "1,2"])), 5);
}

#[test]
fn normal_and_recurrence_run() {
    let o = vdc(&["normal", "--digits", "200", "--prefix", "--out", "-"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"prefix\": \"12345678910111213141"));
    // Too few digits for blocks of length 2 in base 10.
    assert_eq!(code(&vdc(&["normal", "--digits", "20"])), 2);
    let o = vdc(&["recur", "--horizon", "1000"]);
    assert!(matches!(code(&o), 0 | 6), "{}", String::from_utf8_lossy(&o.stderr));
}
