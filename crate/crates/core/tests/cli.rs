use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use witnesskit::cli::{run, Outcome};
use witnesskit::grassmann::Quadric;
use witnesskit::rng;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("witnesskit-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn call(args: &[&str]) -> Outcome {
    run(std::iter::once("witnesskit").chain(args.iter().copied()))
}

fn ok_json(args: &[&str]) -> Value {
    let out = call(args);
    assert_eq!(out.code, 0, "{args:?}: {}{}", out.stdout, out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CIRCLE_LINE: &str = r#"{"vars":["x","y"],"polys":[[{"c":[1,0],"e":[2,0]},{"c":[1,0],"e":[0,2]},{"c":[-1,0],"e":[0,0]}],[{"c":[1,0],"e":[1,0]},{"c":[-1,0],"e":[0,1]}]]}"#;
const CIRCLE: &str = r#"{"vars":["x","y"],"polys":[[{"c":[1,0],"e":[2,0]},{"c":[1,0],"e":[0,2]},{"c":[-1,0],"e":[0,0]}]]}"#;
const PARABOLA: &str = r#"{"vars":["x","y"],"polys":[[{"c":[1,0],"e":[0,1]},{"c":[-1,0],"e":[2,0]}]]}"#;

#[test]
fn solve_circle_and_line() {
    let dir = scratch("solve");
    let sys = write(&dir, "circle_line.json", CIRCLE_LINE);
    let v = ok_json(&["solve", "--system", &sys, "--seed", "7"]);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (s, sign) in sols.iter().zip([-1.0, 1.0]) {
        assert_eq!(s["certified"], true);
        assert_eq!(s["multiplicity"], 1);
        for c in s["point"].as_array().unwrap() {
            assert!((c[0].as_f64().unwrap() - sign * h).abs() < 1e-12);
            assert!(c[1].as_f64().unwrap().abs() < 1e-12);
        }
    }
    assert_eq!(v["summary"]["paths"], 2);
    assert_eq!(v["summary"]["seed"], 7);
}

#[test]
fn class_commands() {
    let v = ok_json(&["class", "recover", "--space", "blowup-p2", "--grade", "1", "--degrees", "0,-1"]);
    assert_eq!(v["coeffs"], serde_json::json!([["0", "1"], ["1", "1"]]));
    assert_eq!(v["labels"], serde_json::json!(["l", "E"]));
    let v = ok_json(&["class", "recover", "--space", "g14", "--grade", "3", "--degrees", "4,0"]);
    assert_eq!(v, serde_json::json!({"coeffs": [["4", "1"], ["0", "1"]], "labels": ["13", "04"]}));
    let v = ok_json(&["class", "pair", "--space", "blowup-p2", "--grade", "1", "--row", "1", "--column", "1"]);
    assert_eq!(v["degree"], -1);
    let v = ok_json(&["class", "duality", "--space", "g14", "--grade", "3"]);
    assert_eq!(v["duality"], true);
    let v = ok_json(&["class", "duality", "--space", "product:1,1", "--grade", "1"]);
    assert_eq!(v["matrix"], serde_json::json!([[0, 1], [1, 0]]));
    let out = call(&["class", "recover", "--space", "g14", "--grade", "3", "--degrees", "4"]);
    assert_eq!(out.code, 1);
    let e: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(e["error"]["kind"], "DimensionMismatch");
}

#[test]
fn usage_and_domain_errors() {
    let out = call(&["solve", "--frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"));
    assert!(out.stdout.is_empty());
    let help = call(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("grassmann"));
    let solve_help = call(&["solve", "--help"]);
    assert!(solve_help.stdout.contains("1e-9") && solve_help.stdout.contains("20000"));

    let dir = scratch("errors");
    let bad = write(&dir, "bad.json", "{\"vars\": [");
    for (args, kind) in [
        (vec!["solve", "--system", "/nonexistent/system.json"], "Io"),
        (vec!["solve", "--system", bad.as_str()], "MalformedDocument"),
        (vec!["grassmann", "dual", "--index", "44"], "IndexOutOfRange"),
        (vec!["class", "recover", "--space", "torus", "--grade", "1", "--degrees", "1"], "InvalidParameter"),
    ] {
        let out = call(&args);
        assert_eq!(out.code, 1, "{args:?}");
        let e: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(e["error"]["kind"], kind);
        assert!(e["error"]["detail"].is_string());
    }
}

#[test]
fn classical_witness_pipeline() {
    let dir = scratch("witness");
    let sys = write(&dir, "circle.json", CIRCLE);
    let ws = dir.join("ws.json");
    let ws = ws.to_str().unwrap();
    let out = call(&["witness", "compute", "--system", &sys, "--dim", "1", "--seed", "3", "--output", ws]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(ws).unwrap()).unwrap();
    assert_eq!(doc["points"].as_array().unwrap().len(), 2);
    assert_eq!(doc["dim"], 1);

    let moved = ok_json(&["witness", "move", "--witness", ws, "--seed", "4"]);
    assert_eq!(moved["points"].as_array().unwrap().len(), 2);
    let slice = write(&dir, "slice.json", "[[[0.5,0],[1,0],[0,1]]]");
    let moved = ok_json(&["witness", "move", "--witness", ws, "--slice", &slice]);
    assert_eq!(moved["slice"], serde_json::json!([[[0.5, 0.0], [1.0, 0.0], [0.0, 1.0]]]));

    let sample = ok_json(&["witness", "sample", "--witness", ws, "--seed", "5"]);
    let p = sample["point"].to_string();
    assert_eq!(ok_json(&["witness", "member", "--witness", ws, "--point", &p])["member"], true);
    assert_eq!(
        ok_json(&["witness", "member", "--witness", ws, "--point", "[[0,0],[1,0]]"])["member"],
        true
    );
    let off = write(&dir, "off.json", "[[2,0],[2,0]]");
    assert_eq!(ok_json(&["witness", "member", "--witness", ws, "--point", &off])["member"], false);
}

#[test]
fn product_witness_bidegrees() {
    let dir = scratch("product");
    let sys = write(&dir, "parabola.json", PARABOLA);
    let v = ok_json(&["product-witness", "--system", &sys, "--first", "1", "--second", "1", "--dim", "1"]);
    assert_eq!(
        v["bidegrees"],
        serde_json::json!([{"a": 0, "b": 1, "degree": 2}, {"a": 1, "b": 0, "degree": 1}])
    );
}

fn quadric_file(dir: &Path, name: &str, seed: u64) -> String {
    let q = Quadric::random(&mut rng::substream(seed, "cli-quadric"));
    write(dir, name, &serde_json::to_string(&q.to_doc()).unwrap())
}

#[test]
fn grassmann_pipeline() {
    let v = ok_json(&["grassmann", "poset"]);
    assert_eq!(v["rank_counts"], serde_json::json!([1, 1, 2, 2, 2, 1, 1]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 10);
    let v = ok_json(&["grassmann", "dual", "--index", "1,3"]);
    assert_eq!(v["dual"], "13");

    let dir = scratch("grassmann");
    let q = quadric_file(&dir, "q.json", 1);
    let ws_path = dir.join("ws.json");
    let ws_path = ws_path.to_str().unwrap();
    let out = call(&["grassmann", "witness", "--quadric", &q, "--seed", "9", "--output", ws_path]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let ws: Value = serde_json::from_str(&fs::read_to_string(ws_path).unwrap()).unwrap();
    assert_eq!(ws["W13"].as_array().unwrap().len(), 4);
    assert_eq!(ws["W04"].as_array().unwrap().len(), 0);
    assert_eq!(ws["certificates"].as_array().unwrap().len(), 4);

    let flag = write(&dir, "flag.json", &ws["flag"].to_string());
    let moved = ok_json(&["grassmann", "move", "--witness", ws_path, "--flag", &flag, "--seed", "2"]);
    assert_eq!(moved["W13"].as_array().unwrap().len(), 4);
    let moved = ok_json(&["grassmann", "move", "--witness", ws_path, "--seed", "3"]);
    assert_eq!(moved["W13"].as_array().unwrap().len(), 4);

    let line = ok_json(&["grassmann", "sample", "--witness", ws_path, "--seed", "4"]);
    assert_eq!(line["pluecker"].as_array().unwrap().len(), 10);
    let line_path = write(&dir, "line.json", &line.to_string());
    let v = ok_json(&["grassmann", "member", "--witness", ws_path, "--line", &line_path, "--seed", "5"]);
    assert_eq!(v["member"], true);
    let random = write(
        &dir,
        "random.json",
        r#"{"span":[[[1,0],[0.3,0],[0,0.2],[0,0],[0.5,0]],[[0,0],[1,0],[0.7,0],[0,-0.4],[0.1,0]]],"pluecker":[]}"#,
    );
    let v = ok_json(&["grassmann", "member", "--witness", ws_path, "--line", &random, "--seed", "6"]);
    assert_eq!(v["member"], false);
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = scratch("env");
    let sys = write(&dir, "circle.json", CIRCLE);
    let bin = env!("CARGO_BIN_EXE_witnesskit");
    let run_env = |seed: &str| {
        let out = Command::new(bin)
            .args(["witness", "compute", "--system", &sys, "--dim", "1"])
            .env("WITNESSKIT_SEED", seed)
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run_env("17");
    assert_eq!(a, run_env("17"));
    assert_ne!(a, run_env("18"));
    let explicit = Command::new(bin)
        .args(["witness", "compute", "--system", &sys, "--dim", "1", "--seed", "17"])
        .env_remove("WITNESSKIT_SEED")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(explicit.stdout).unwrap(), a);
    let usage = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn same_seed_same_payload(seed in any::<u64>()) {
            let dir = scratch("prop-determinism");
            let sys = write(&dir, "circle_line.json", CIRCLE_LINE);
            let q = quadric_file(&dir, "q.json", seed);
            let s = seed.to_string();
            for args in [
                vec!["solve", "--system", sys.as_str(), "--seed", &s],
                vec!["grassmann", "witness", "--quadric", q.as_str(), "--seed", &s],
            ] {
                let a = call(&args);
                prop_assert_eq!(a.code, 0);
                prop_assert_eq!(a.stdout, call(&args).stdout);
            }
        }

        #[test]
        fn errors_are_json_with_a_kind(index in "[0-9]{1,3}") {
            let out = call(&["grassmann", "dual", "--index", &index]);
            if out.code != 0 {
                prop_assert_eq!(out.code, 1);
                let e: Value = serde_json::from_str(&out.stdout).unwrap();
                prop_assert!(e["error"]["kind"].is_string());
            }
        }
    }
}
