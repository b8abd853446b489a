use std::process::{Command, Output};

fn nmr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmr-logic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

#[test]
fn classify_json_has_84_classes() {
    let o = nmr(&["classify", "--radix", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classes"], 84);
    assert_eq!(v["npn_classes"].as_array().unwrap().len(), 84);
    assert_eq!(v["pc_classes"].as_array().unwrap().len(), 33);
    assert_eq!(v["self_check"], true);
}

#[test]
fn classify_writes_out_file() {
    let path = std::env::temp_dir().join(format!("nmr-logic-classify-{}.csv", std::process::id()));
    let o = nmr(&[
        "classify",
        "--radix",
        "2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn simulate_from_file_matches_builtin() {
    let args = |seq: &str| {
        stdout(&nmr(&[
            "simulate",
            "--sequence",
            seq,
            "--grid-a",
            "lin:0:2pi:7",
            "--grid-b",
            "0,pi/3,pi",
        ]))
    };
    let file = format!("{DATA}/two_pulse.json");
    assert_eq!(args(&file), args("builtin:two-pulse"));
    assert_eq!(args(&file).lines().count(), 8);
}

#[test]
fn simulate_rejects_malformed_sequence() {
    let path = std::env::temp_dir().join(format!("nmr-logic-bad-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"peaks":[],"sequence":[{"type":"warp"}]}"#).unwrap();
    let o = nmr(&[
        "simulate",
        "--sequence",
        path.to_str().unwrap(),
        "--grid-a",
        "1",
        "--grid-b",
        "1",
    ]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn search_finds_multiplication() {
    let o = nmr(&[
        "search",
        "--sequence",
        "builtin:single-pulse",
        "--grid-a",
        "pi/2,pi,3pi/2",
        "--grid-b",
        "pi/2,pi,3pi/2",
        "--target",
        "multiplication",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let hits = v["hits"].as_array().unwrap();
    assert_eq!(hits.len(), 1);
    assert_eq!(
        hits[0]["logic"],
        serde_json::json!([[1, 0, -1], [0, 0, 0], [-1, 0, 1]])
    );
}

#[test]
fn search_selective_delay_on_its_template() {
    let o = nmr(&[
        "search",
        "--sequence",
        &format!("{DATA}/selective_delay.json"),
        "--grid-a",
        "0,0.0025,0.005",
        "--grid-b",
        "200pi,300pi,400pi",
        "--target",
        "selective-delay",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("hits: 1\n"));
}

#[test]
fn search_by_index_and_bad_index() {
    let ok = nmr(&[
        "search",
        "--sequence",
        "builtin:single-pulse",
        "--grid-a",
        "lin:0:2pi:5",
        "--grid-b",
        "lin:0:2pi:5",
        "--target",
        "9841",
        "--format",
        "csv",
    ]);
    assert!(ok.status.success());
    assert!(stdout(&ok).starts_with("a1,a2,a3,b1,b2,b3,function,class\n"));
    let bad = nmr(&[
        "search",
        "--sequence",
        "builtin:single-pulse",
        "--grid-a",
        "1",
        "--grid-b",
        "1",
        "--target",
        "19683",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn complex_mul_reports_product() {
    let o = nmr(&[
        "complex", "mul", "0.5", "pi/3", "0.8", "3pi/4", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["product"]["r"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(v["self_check"], true);
}

#[test]
fn complex_zero_product_has_no_phase() {
    let o = nmr(&["complex", "mul", "0", "1", "0.5", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("product: r=0 theta=-\n"));
}

#[test]
fn help_exits_zero() {
    let o = nmr(&["--help"]);
    assert!(o.status.success());
    for sub in ["classify", "simulate", "search", "complex"] {
        assert!(stdout(&o).contains(sub));
    }
}
