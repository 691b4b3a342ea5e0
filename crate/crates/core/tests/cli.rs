use std::process::{Command, Output};

use serde_json::Value;

fn infinigon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infinigon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = infinigon(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn without_runtime(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("runtime_ms");
    v
}

#[test]
fn classify_reports_kind_and_diameter() {
    let r = report(&["classify", "--q", "4", "--x", "0.5"]);
    assert_eq!(r["command"], "classify");
    assert_eq!(r["outputs"]["kind"], "circle");
    let d = r["outputs"]["diameter"].as_f64().unwrap();
    assert!((d - 0.5 / (std::f64::consts::PI / 4.0).cos()).abs() < 1e-12);
    assert!(r["runtime_ms"].is_u64());

    let r = report(&["classify", "--alpha", "1.5707963267948966", "--x", "0.8"]);
    assert_eq!(r["outputs"]["kind"], "equidistant");
}

#[test]
fn domain_errors_exit_2() {
    let out = infinigon(&["classify", "--q", "4", "--x", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x out of range"));
    assert_eq!(
        infinigon(&["metrics", "--p", "4", "--q", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        infinigon(&["gross", "--expr", "delta", "--lambda", "go^("])
            .status
            .code(),
        Some(2)
    );
    let out = infinigon(&["tile", "--p", "5", "--q", "4", "--depth", "40"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    assert_eq!(
        infinigon(&["verify", "--suite", "bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn metrics_large_p() {
    let r = report(&["metrics", "--p", "1000000", "--q", "3"]);
    let gap = r["outputs"]["h_minus_one"].as_f64().unwrap();
    assert!(gap > 0.0 && gap < 1e-5);
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn gross_prints_in_the_grammar() {
    let r = report(&[
        "gross",
        "--expr",
        "tile-count",
        "--lambda",
        "go",
        "--valence",
        "5",
        "--nu",
        "2",
    ]);
    assert_eq!(r["outputs"]["value"], "go^2 - 4*go + 4");
    assert_eq!(r["outputs"]["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn tile_writes_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("t.json");
    let svg = dir.path().join("t.svg");
    let r = report(&[
        "tile",
        "--p",
        "5",
        "--q",
        "4",
        "--depth",
        "2",
        "--mode",
        "bfs",
        "--json",
        json.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(r["outputs"]["tiles"], 21);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(t["tiles"].as_array().unwrap().len(), 21);
    assert_eq!(t["p"], 5);

    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("viewBox"), Some("-1.05 -1.05 2.1 2.1"));
    assert_eq!(
        root.children().filter(|n| n.has_tag_name("path")).count(),
        21
    );
    assert!(root
        .children()
        .any(|n| n.has_tag_name("circle") && n.attribute("r") == Some("1")));
}

#[test]
fn sector_mode_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("s.svg");
    let r = report(&[
        "tile",
        "--p",
        "8",
        "--q",
        "6",
        "--depth",
        "2",
        "--mode",
        "sector",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(r["outputs"]["counts"], serde_json::json!([1, 17, 289]));
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
    roxmltree::Document::parse(&std::fs::read_to_string(&svg).unwrap()).expect("well-formed SVG");
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("t.svg");
    let out = infinigon(&[
        "tile",
        "--p",
        "5",
        "--q",
        "4",
        "--depth",
        "1",
        "--svg",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["tile", "--p", "7", "--q", "3", "--depth", "3"][..],
        &["gross", "--expr", "delta", "--q", "go", "--lambda", "go"][..],
        &["classify", "--q", "5", "--x", "0.6", "--steps", "20"][..],
    ] {
        assert_eq!(without_runtime(report(args)), without_runtime(report(args)));
        let a = infinigon(args).stdout;
        let b = infinigon(args).stdout;
        let strip = |v: &[u8]| {
            String::from_utf8_lossy(v)
                .lines()
                .filter(|l| !l.contains("runtime_ms"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a), strip(&b));
    }
}

#[test]
fn verify_metrics_suite_passes() {
    let out = infinigon(&["verify", "--suite", "metrics"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}
