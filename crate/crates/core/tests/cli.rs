use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn atlas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atlas")).args(args).env_remove("ATLAS_JOBS").output().expect("run atlas")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tables() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tables")
}

fn error_kind(o: &Output) -> String {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    let line = text.lines().last().expect("stderr is empty");
    let v: serde_json::Value = serde_json::from_str(line).expect("stderr is a JSON record");
    assert!(v["message"].is_string());
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn spectrum_prints_reduced_and_full_forms() {
    let o = atlas(&["spectrum", "--m", "7", "--t", "11"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("(15; 6, 10, 14)"));
    let full = lines.next().unwrap();
    assert!(full.starts_with("full: (15; 6, 6,"));
}

#[test]
fn invariants_report_the_histogram() {
    let o = atlas(&["invariants", "--m", "11", "--t", "21"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("v = 815"));
    assert!(out.contains("V* = {1^627, 2^165, 3^22}"));
}

#[test]
fn rotation_lines_cover_every_other_point() {
    let o = atlas(&["rotation", "--m", "5", "--t", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let points: usize = out
        .lines()
        .filter(|l| l.starts_with('['))
        .map(|l| 2 * (l.matches(';').count() + 1))
        .sum();
    assert_eq!(points, 30);
}

#[test]
fn missing_argument_is_a_usage_error() {
    let o = atlas(&["spectrum", "--m", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn computation_errors_are_json_records() {
    let o = atlas(&["spectrum", "--m", "5", "--t", "31"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_kind(&o), "not_coprime");

    let o = atlas(&["orient", "--m", "5", "--t", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_kind(&o), "not_closed_surface");

    let o = atlas(&["field", "--m", "5", "--poly", "0x3f"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn iso_separates_the_two_m7_classes_with_equal_v() {
    let o = atlas(&["iso", "--m", "7", "--t1", "7", "--t2", "21"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not isomorphic"));
    let o = atlas(&["iso", "--m", "7", "--t1", "7", "--t2", "56"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("not isomorphic"));
}

#[test]
fn verify_passes_against_the_reference_tables() {
    let golden = tables();
    let o = atlas(&["verify", "--golden", golden.to_str().unwrap(), "--m", "7", "--m", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("m=7: 30 checks, 0 mismatches"));
    assert!(out.contains("1^628"));
}

#[test]
fn verify_fails_on_a_wrong_table() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["table_v.csv", "table_vstar.csv", "table_spectra.csv", "class_counts.csv"] {
        fs::copy(tables().join(name), dir.path().join(name)).unwrap();
    }
    let path = dir.path().join("table_v.csv");
    let text = fs::read_to_string(&path).unwrap().replace("7,19,43,false", "7,19,44,false");
    fs::write(&path, text).unwrap();
    let o = atlas(&["verify", "--golden", dir.path().to_str().unwrap(), "--m", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("v = 43 expected 44"));
}

#[test]
fn classify_writes_every_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = atlas(&["classify", "--m", "9", "--report", "csv", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    for name in ["table_v.csv", "table_vstar.csv", "table_spectra.csv", "survey.jsonl", "report.md"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let v = fs::read_to_string(dir.path().join("table_v.csv")).unwrap();
    assert_eq!(v.trim(), "m,classes,v,apn");
}

#[test]
fn survey_output_does_not_depend_on_thread_count() {
    let run = |jobs: &str| {
        let o = atlas(&["--jobs", jobs, "classify", "--m", "11", "--report", "json"]);
        assert!(o.status.success());
        let text = stdout(&o);
        let mut lines = text.lines();
        let mut header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
        assert_eq!(header["jobs"], jobs.parse::<u64>().unwrap());
        header.as_object_mut().unwrap().remove("jobs");
        (header, lines.map(str::to_owned).collect::<Vec<_>>())
    };
    let (h1, r1) = run("1");
    let (h2, r2) = run("2");
    assert_eq!(h1, h2);
    assert_eq!(r1, r2);
}
