use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE_ONE: &str = r#"{"variant":"remainder","k":12,"l":1,"t":1,"q":27,"r":2,"class_map":"table_one","seed":7}"#;

fn lmpe(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lmpe"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("write stdin");
        }
    }
    child.wait_with_output().expect("binary exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).expect("write");
    p
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn message_line() -> String {
    let mut symbols = vec!["3,3,3,3"; 26];
    symbols[0] = "5,4,3,0";
    symbols[2] = "2,1,1,8";
    symbols[3] = "0,1,2,9";
    format!("{} | 0,1\n", symbols.join(";"))
}

#[test]
fn build_prints_parameters() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", EXAMPLE_ONE);
    let o = lmpe(&["build", "--spec", s(&spec)], None);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 28);
    assert_eq!(v["quotient_messages"], 10);
    assert!((v["rate"].as_f64().unwrap() - 0.955).abs() < 1e-3);
}

#[test]
fn simulate_example_one() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", EXAMPLE_ONE);
    let o = lmpe(&["simulate", "--spec", s(&spec), "--trials", "10000", "--seed", "7"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trials"], 10000);
    assert_eq!(v["decode_success"], 10000);
    assert_eq!(v["miscorrections"], 0);
    assert_eq!(v["seed"], 7);
}

#[test]
fn encode_decode_round_trip() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", EXAMPLE_ONE);
    let msg = message_line();
    let enc = lmpe(&["encode", "--spec", s(&spec)], Some(&msg));
    assert_eq!(enc.status.code(), Some(0));
    let word = stdout(&enc);
    assert_eq!(word.trim().split(';').count(), 28);
    // move one unit of probability in the second symbol
    let corrupted = word.replacen(";3,3,3,3;", ";2,4,3,3;", 1);
    assert_ne!(corrupted, word);
    let input = write(&dir, "words.txt", &corrupted);
    let dec = lmpe(&["decode", "--spec", s(&spec), "--in", s(&input)], None);
    assert_eq!(dec.status.code(), Some(0));
    assert_eq!(stdout(&dec), msg);
}

#[test]
fn search_critical_five_is_empty() {
    let o = lmpe(&["search-critical", "--l", "5"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let one = stdout(&lmpe(&["search-critical", "--l", "1"], None));
    assert!(one.lines().any(|x| x == "1,1,1,0"));
}

#[test]
fn bounds_sweep() {
    let o = lmpe(&["bounds"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,SPB_rate,GVB_rate"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r[1] >= r[2]));
    let eff = stdout(&lmpe(&["bounds", "--efficiency", "--k", "19..20"], None));
    assert_eq!(eff.lines().nth(1), Some("19,0.473377"));
}

#[test]
fn tables_render() {
    let t1 = stdout(&lmpe(&["tables", "table1", "--csv"], None));
    assert_eq!(t1.lines().count(), 28);
    assert!(t1.contains("\"2,1,0,0\",17"));
    let t5 = stdout(&lmpe(&["tables", "table5"], None));
    assert_eq!(t5.lines().count(), 13);
    let red = stdout(&lmpe(&["tables", "reduced", "--critical", "1,1,1,0", "--csv"], None));
    assert_eq!(red.lines().count(), 10);
}

#[test]
fn gray_search_writes_mapping() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("gray.txt");
    let o = lmpe(&["search-gray", "--k", "12", "--l", "1", "--q", "3", "--g", "2", "--out", s(&out)], None);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" -> ")).count(), 9);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", EXAMPLE_ONE);
    let low_k = write(&dir, "low.json", r#"{"variant":"remainder","k":3,"l":1}"#);
    assert_eq!(lmpe(&["build", "--spec", s(&low_k)], None).status.code(), Some(2));
    assert_eq!(lmpe(&["bounds", "--t", "5..1"], None).status.code(), Some(2));
    let broken = write(&dir, "broken.json", r#"{"variant":"#);
    assert_eq!(lmpe(&["build", "--spec", s(&broken)], None).status.code(), Some(3));
    let unknown = write(&dir, "unknown.json", r#"{"variant":"remainder","k":12,"l":1,"colour":1}"#);
    assert_eq!(lmpe(&["build", "--spec", s(&unknown)], None).status.code(), Some(3));
    let bad_symbol = "1,2,3;".repeat(28);
    assert_eq!(lmpe(&["decode", "--spec", s(&spec)], Some(&bad_symbol)).status.code(), Some(3));
    // parity quotient index 20 is outside the 10 quotient messages
    let far = vec!["3,3,3,3"; 28].join(";");
    let o = lmpe(&["decode", "--spec", s(&spec)], Some(&far));
    assert_eq!(o.status.code(), Some(4));
    let o = lmpe(&["search-gray", "--k", "19", "--l", "1", "--q", "27", "--g", "2"], None);
    assert_eq!(o.status.code(), Some(5));
    assert!(!o.stderr.is_empty());
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", EXAMPLE_ONE);
    let strip_time = |o: Output| {
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["wall_time"] = Value::Null;
        v
    };
    let args = ["simulate", "--spec", s(&spec), "--trials", "300"];
    assert_eq!(strip_time(lmpe(&args, None)), strip_time(lmpe(&args, None)));
    for args in [
        vec!["bounds", "--l", "2", "--t", "1..4"],
        vec!["tables", "reduced", "--l", "2", "--k", "14"],
        vec!["search-gray", "--k", "13", "--l", "1", "--q", "3", "--g", "2"],
    ] {
        assert_eq!(lmpe(&args, None).stdout, lmpe(&args, None).stdout);
    }
    let msg = message_line();
    let a = lmpe(&["encode", "--spec", s(&spec)], Some(&msg)).stdout;
    let b = lmpe(&["encode", "--spec", s(&spec)], Some(&msg)).stdout;
    assert_eq!(a, b);
}
