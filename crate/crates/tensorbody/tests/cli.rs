use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    json: Value,
}

fn tb(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tensorbody"))
        .args(args)
        .env("TENSORBODY_THREADS", "2")
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap(),
        stdout,
        json,
    }
}

fn save(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = args.to_vec();
    full.extend(["-o", path.to_str().unwrap()]);
    let r = tb(&full);
    assert_eq!(r.code, 0, "{}", r.stdout);
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn l1_ball_json() {
    let r = tb(&["body", "lp", "--dim", "4", "--p", "1", "--materialize"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["dim"], 4);
    assert_eq!(r.json["rep"]["kind"], "v-polytope");
    assert_eq!(r.json["rep"]["generators"].as_array().unwrap().len(), 4);
    let r = tb(&["body", "lp", "--dim", "3", "--p", "inf"]);
    assert_eq!(r.json["rep"]["p"], "inf");
}

#[test]
fn projective_product_of_l1_balls() {
    let dir = TempDir::new().unwrap();
    for mode in ["float", "exact"] {
        let b1 = save(dir.path(), "b1.json", &["--mode", mode, "body", "lp", "--dim", "2", "--p", "1", "--materialize"]);
        let r = tb(&["--mode", mode, "tensor", "pi", "--shape", "2,2", "-i", p(&b1), "-i", p(&b1)]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        let gens = r.json["rep"]["generators"].as_array().unwrap();
        assert_eq!(gens.len(), 4);
        if mode == "exact" {
            assert!(r.stdout.contains("\"1/1\""));
        }
    }
}

#[test]
fn counterexample_is_rejected() {
    let dir = TempDir::new().unwrap();
    let q = save(dir.path(), "q.json", &["body", "counterexample", "--m", "2", "--n", "2"]);
    let r = tb(&["check-tensorial", "--shape", "2,2", "-i", p(&q)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdict"], false);
    assert_eq!(r.json["violation"]["kind"], "injective-constraint");
    let r = tb(&["ellipsoid", "decompose", "--shape", "2,2", "-i", p(&q)]);
    assert_eq!(r.code, 1);
    let r = tb(&["--mode", "exact", "ellipsoid", "decompose", "--shape", "2,2", "-i", p(&q)]);
    assert_eq!(r.code, 1);
}

#[test]
fn tensorial_ball_and_sections() {
    let dir = TempDir::new().unwrap();
    let q = save(dir.path(), "q.json", &["body", "lp", "--dim", "4", "--p", "inf", "--materialize"]);
    let r = tb(&["check-tensorial", "--shape", "2,2", "-i", p(&q)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let r = tb(&["sections", "--shape", "2,2", "-i", p(&q)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["sections"].as_array().unwrap().len(), 2);
}

#[test]
fn distance_between_l1_and_cube() {
    let dir = TempDir::new().unwrap();
    let b1 = save(dir.path(), "b1.json", &["body", "lp", "--dim", "4", "--p", "1", "--materialize"]);
    let binf = save(dir.path(), "binf.json", &["body", "lp", "--dim", "4", "--p", "inf", "--materialize"]);
    let args = ["bm-distance", "--shape", "2,2", "-i", p(&b1), "-i", p(&binf), "--budget", "5", "--seed", "7"];
    let r = tb(&args);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.json["upper"].as_f64().unwrap() <= 16.0);
    // determinism: same arguments, same bytes
    assert_eq!(tb(&args).stdout, r.stdout);
}

#[test]
fn polar_round_trip_and_conversions() {
    let dir = TempDir::new().unwrap();
    let q = save(dir.path(), "q.json", &["--seed", "3", "body", "random", "--dim", "3", "--kind", "v", "--count", "5"]);
    let qp = save(dir.path(), "qp.json", &["body", "polar", "-i", p(&q)]);
    let qpp = save(dir.path(), "qpp.json", &["body", "polar", "-i", p(&qp)]);
    let h = save(dir.path(), "h.json", &["body", "to-h", "-i", p(&q)]);
    let v = save(dir.path(), "v.json", &["body", "to-v", "-i", p(&h)]);
    let read = |f: &Path| -> Value { serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap() };
    assert_eq!(read(&qp)["rep"]["kind"], "h-polytope");
    assert_eq!(read(&qpp), read(&q));
    assert_eq!(read(&v)["rep"]["kind"], "v-polytope");
    // gauge-equal: the distance between a body and its re-encoded copy is 1
    let r = tb(&["bm-distance", "--shape", "3", "-i", p(&q), "-i", p(&v), "--budget", "1"]);
    assert!((r.json["upper"].as_f64().unwrap() - 1.0).abs() < 1e-9, "{}", r.stdout);
}

#[test]
fn ellipsoid_commands() {
    let dir = TempDir::new().unwrap();
    let e = dir.path().join("e.json");
    std::fs::write(&e, r#"{"dim":2,"rep":{"kind":"ellipsoid","matrix":[[4,0],[0,1]]}}"#).unwrap();
    let i2 = save(dir.path(), "i2.json", &["body", "lp", "--dim", "2", "--p", "2"]);
    let h = save(dir.path(), "h.json", &["tensor", "hilbert", "--shape", "2,2", "-i", p(&e), "-i", p(&i2)]);
    let r = tb(&["ellipsoid", "decompose", "--shape", "2,2", "-i", p(&h)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["factors"].as_array().unwrap().len(), 2);
    let r = tb(&["ellipsoid", "sandwich", "--shape", "2,2", "-i", p(&h)]);
    assert_eq!(r.code, 1);
    assert!(r.json["violation"].is_array());

    let t = dir.path().join("t.json");
    std::fs::write(&t, r#"{"matrix":[[1.1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#).unwrap();
    let r = tb(&["ellipsoid", "bilinear", "--shape", "2,2", "-i", p(&t)]);
    assert_eq!(r.code, 1);
    assert!(r.json["failure"].is_array());

    let r = tb(&["ellipsoid", "block-lemma", "--m", "2", "--n", "3", "--trials", "200"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["counterexamples"], 0);
    let w = dir.path().join("w.json");
    std::fs::write(&w, r#"{"m":2,"n":2,"blocks":[[[0,0.5],[-0.5,0]]]}"#).unwrap();
    let r = tb(&["ellipsoid", "block-lemma", "-i", p(&w)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdict"], "structure-broken");
    std::fs::write(&w, r#"{"m":2,"n":2,"blocks":[[[0,1],[-1,0]]]}"#).unwrap();
    let r = tb(&["ellipsoid", "block-lemma", "-i", p(&w)]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"].as_str().unwrap().contains("positive definite"));
}

#[test]
fn errors_exit_two() {
    let r = tb(&["check-tensorial", "--shape", "2,2", "-i", "/nonexistent.json"]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"].is_string());
    let r = tb(&["body", "lp", "--dim", "4", "--p", "0.5"]);
    assert_eq!(r.code, 2);
    let r = tb(&["tensor", "pi", "--shape", "2,x"]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"].is_string());
    let r = tb(&["verify-claims", "--only", "no-such-claim"]);
    assert_eq!(r.code, 2);
}

#[test]
fn claim_battery_subsets() {
    let r = tb(&["verify-claims", "--list"]);
    assert_eq!(r.json.as_array().unwrap().len(), 12);
    let r = tb(&["verify-claims", "--only", "l1-linf-products", "--only", "block-matrix-lemma"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["claims"].as_array().unwrap().len(), 2);
    let r = tb(&["--mode", "exact", "verify-claims"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["claims"].as_array().unwrap().len(), 2);
}
