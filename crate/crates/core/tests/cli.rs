mod common;

use std::path::Path;
use std::process::{Command, Output};

use prism_core::pipeline::{parse_report, report_to_string, ReportFormat, TSV_HEADER};

fn prism(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prism")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(prism(&["--help"]).status.code(), Some(0));
    assert_eq!(prism(&["mine", "--help"]).status.code(), Some(0));
    assert_eq!(prism(&["mine", "--bogus"]).status.code(), Some(1));
    assert_eq!(prism(&[]).status.code(), Some(1));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    for text in ["Teaches(P1,P3)\nTeaches(P1)", "R(a)\nnot an atom"] {
        let db = write(dir.path(), "bad.db", text);
        let o = prism(&["mine", "--db", &db, "--output", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    }
}

#[test]
fn missing_input_and_bad_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = prism(&["mine", "--db", "/nonexistent/x.db", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let db = common::fixture_path("classroom.db");
    let o = prism(&["mine", "--db", db.to_str().unwrap(), "--epsilon", "2", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let db = common::fixture_path("classroom.db");
    let o = prism(&["mine", "--db", db.to_str().unwrap(), "--seed", "4", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let report = parse_report(&text).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.config.as_ref().unwrap().seed, 4);
    assert_eq!(report_to_string(&report, ReportFormat::Json).unwrap(), text);
    assert_eq!(parse_report(&report_to_string(&report, ReportFormat::Json).unwrap()).unwrap(), report);
}

#[test]
fn tsv_rows_per_concept() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.tsv");
    let db = common::fixture_path("classroom.db");
    let o = prism(&["mine", "--db", db.to_str().unwrap(), "--format", "tsv", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(TSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 4));
    assert!(rows.iter().any(|r| r[1] == "P1" && r[2] == "P3,P4,P5,P6"));
}

#[test]
fn options_reach_the_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let db = common::fixture_path("two_departments.db");
    let o = prism(&[
        "mine", "--db", db.to_str().unwrap(), "--no-hcluster", "--max-length", "0", "--top-k", "2",
        "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = parse_report(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.subhypergraphs.len(), 1);
    assert_eq!(report.subhypergraphs[0].walk_length, 8);
    let cfg = report.config.unwrap();
    assert_eq!(cfg.max_length, None);
    assert!(!cfg.hcluster);
    assert_eq!(cfg.k_top, 2);
}

#[test]
fn stats_summary() {
    let db = common::fixture_path("two_departments.db");
    let o = prism(&["stats", "--db", db.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("nodes\t20"));
    assert!(text.contains("edges\t33"));
    assert!(text.contains("labels\t2\tTeaches,Reads"));
    assert!(text.contains("diameter 8"));
}
