use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use pinv::cli::{parse_request, run, CliError};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn pinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn json_run(path: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec!["run", "--surface", path.to_str().unwrap(), "--format", "json"];
    args.extend(extra);
    let out = pinv(&args);
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, value)
}

#[test]
fn reports_are_byte_identical() {
    let path = fixture("four_fiber_log_transform.json");
    for format in ["json", "table"] {
        let a = pinv(&["run", "--surface", path.to_str().unwrap(), "--format", format]);
        let b = pinv(&["run", "--surface", path.to_str().unwrap(), "--format", format]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn four_fiber_document() {
    let (code, report) = json_run(&fixture("four_fiber_log_transform.json"), &[]);
    assert_eq!(code, 0);
    let results = report["results"].as_array().unwrap();
    let compute = &results[1];
    assert_eq!(compute["command"], "compute");
    assert_eq!(compute["items"][0]["pair"]["numeric_degrees"], serde_json::json!([1, 4]));
    let wall = &results[2];
    assert_eq!(wall["pass"], true);
    assert_eq!(wall["items"][0]["c_half"], -3);
    assert_eq!(wall["items"][0]["detail"]["albanese_fiber_dot_fiber"], 9);
    assert_eq!(wall["items"][0]["detail"]["canonical_fiber_multiple"], serde_json::json!([2, 3]));
    let comps = &results[3]["items"][1];
    assert_eq!(comps["count"], 9);
    assert_eq!(comps["nonempty"], 4);
}

#[test]
fn json_keys_are_sorted() {
    let (_, report) = json_run(&fixture("four_fiber_log_transform.json"), &[]);
    fn check(v: &Value) {
        match v {
            Value::Object(map) => {
                let keys: Vec<&String> = map.keys().collect();
                let mut sorted = keys.clone();
                sorted.sort();
                assert_eq!(keys, sorted);
                map.values().for_each(check);
            }
            Value::Array(items) => items.iter().for_each(check),
            _ => {}
        }
    }
    check(&report);
}

#[test]
fn single_commands_and_class_selection() {
    let path = fixture("two_fiber_quotient.json");
    let p = path.to_str().unwrap();
    let out = pinv(&["compute", "--surface", p, "--class", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
    assert_eq!(v["results"][0]["items"][0]["pair"]["numeric_degrees"], serde_json::json!([6, 0]));

    let out = pinv(&["compute", "--surface", p, "--class", "[2, 0, 0]", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"][0]["items"][0]["class"], serde_json::json!([2, 0, 0]));

    let out = pinv(&["compute", "--surface", p, "--class", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bare_surface_descriptor_and_out_file() {
    let surface = scratch("hirzebruch.json", r#"{"type": "hirzebruch", "n": 3}"#);
    let out_path = surface.with_file_name("hirzebruch-report.json");
    let out = pinv(&[
        "compute",
        "--surface",
        surface.to_str().unwrap(),
        "--class",
        r#"{"fiber_pairing": 2, "nu": 4}"#,
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["results"][0]["items"][0]["pair"]["numeric_degrees"], serde_json::json!([1, 0]));
}

#[test]
fn invalid_input_exits_with_two() {
    let cases = [
        ("not json", "not valid JSON"),
        (r#"{"surface": {"type": "torus"}}"#, "/surface/type"),
        (r#"{"surface": {"type": "ruled", "base_genus": 1.5}}"#, "/surface/base_genus"),
        (
            r#"{"surface": {"type": "log_transform_elliptic", "fibers": [[3,1,0],[3,1,0]]}}"#,
            "sum of zeta_i",
        ),
        (
            r#"{"surface": {"type": "log_transform_elliptic", "fibers": [[2,2,0],[2,0,0]]}}"#,
            "gcd",
        ),
        (r#"{"surface": {"type": "ruled", "base_genus": 1}, "commands": ["fly"]}"#, "/commands/0"),
        (r#"{"surface": {"type": "minimal_pg_positive", "kind": "general_type", "q": 0}}"#, "/surface/chi"),
        (r#"{"surface": {"type": "ruled", "base_genus": 1}, "classes": [[1, 2]]}"#, "/classes/0"),
    ];
    for (i, (doc, needle)) in cases.iter().enumerate() {
        let path = scratch(&format!("bad{i}.json"), doc);
        let out = pinv(&["run", "--surface", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{doc}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(needle), "{err} lacks {needle}");
    }
    let out = pinv(&["run", "--surface", "/nonexistent/surface.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn engine_failures_exit_with_three() {
    let path = fixture("ruled_genus_two.json");
    let out = pinv(&["components", "--surface", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("components"));
    let k3 = fixture("k3.json");
    let out = pinv(&["wallcheck", "--surface", k3.to_str().unwrap(), "--class", "\"zero\""]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn empty_command_list() {
    let req = parse_request(r#"{"surface": {"type": "ruled", "base_genus": 0}}"#).unwrap();
    let report = run(&req).unwrap();
    assert!(report.blocks.is_empty());
    assert_eq!(report.to_json()["results"], serde_json::json!([]));
    let path = scratch("empty.json", r#"{"surface": {"type": "ruled", "base_genus": 0}, "commands": []}"#);
    assert_eq!(json_run(&path, &[]).0, 0);
}

#[test]
fn k3_document_and_snf() {
    let req = parse_request(r#"{"surface":{"type":"minimal_pg_positive","kind":"k3"},"commands":["basic-classes"]}"#)
        .unwrap();
    let report = run(&req).unwrap();
    assert_eq!(report.blocks[0].pass, Some(true));

    let req = parse_request(
        r#"{"surface":{"type":"ruled","base_genus":0},"snf":{"matrix":[[2,4],[6,8]]},"commands":["snf"]}"#,
    )
    .unwrap();
    let v = run(&req).unwrap().to_json();
    assert_eq!(v["results"][0]["items"][0]["invariant_factors"], serde_json::json!([2, 4]));
    let req = parse_request(r#"{"surface":{"type":"ruled","base_genus":0},"commands":["snf"]}"#).unwrap();
    assert!(matches!(run(&req), Err(CliError::Input { .. })));
}

#[test]
fn blowup_and_pg_zero_basic_classes() {
    let (code, v) = json_run(&fixture("ruled_genus_two.json"), &[]);
    assert_eq!(code, 0);
    let blow = &v["results"][2];
    assert_eq!(blow["items"][0]["bounds"], serde_json::json!([2]));
    let req = parse_request(
        r#"{"surface":{"type":"minimal_pg_zero_special","kind":"enriques"},"commands":["basic-classes"]}"#,
    )
    .unwrap();
    let v = run(&req).unwrap().to_json();
    assert_eq!(v["results"][0]["items"][0]["finite"], false);
}

#[test]
fn blown_up_elliptic_classes() {
    let req = parse_request(
        r#"{"surface":{"type":"blow_up","exceptional_count":1,
             "base":{"type":"log_transform_elliptic","fibers":[[3,1,1],[3,1,0],[3,1,0],[3,-3,-1]]}},
            "classes":[{"base":"zero","l":[0]},{"base":"zero","l":[2]},{"base":"canonical","l":[1]}],
            "commands":["compute","wallcheck"]}"#,
    )
    .unwrap();
    let v = run(&req).unwrap().to_json();
    let items = &v["results"][0]["items"];
    assert_eq!(items[0]["pair"]["numeric_degrees"], serde_json::json!([1, 4]));
    assert_eq!(items[1]["pair"]["numeric_degrees"], serde_json::json!([0, 0]));
    assert_eq!(items[2]["pair"]["numeric_degrees"], serde_json::json!([4, 1]));
    assert_eq!(v["results"][1]["pass"], true);
}
