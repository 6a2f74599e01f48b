use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral-eta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn spectrum_csv_header_and_first_root() {
    let o = run(&["spectrum", "--m", "4", "--mu-max", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,p,weight,branch,root"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[..4], &["0", "1", "4", "+"]);
    let root: f64 = first[4].parse().unwrap();
    assert!((root - 3.797902).abs() < 1e-6);
}

#[test]
fn odd_dimension_is_a_usage_error() {
    let o = run(&["spectrum", "--m", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m must be even"));
}

#[test]
fn large_epsilon_is_a_usage_error() {
    let o = run(&["residues", "--m", "4", "--epsilon", "2.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("|epsilon| < (m-1)/2"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = run(&["spectrum", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn residues_json_has_config_and_exact_values() {
    let o = run(&["residues", "--m", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\"command\": \"residues\""));
    assert!(out.contains("\"m\": 6"));
    assert!(out.contains("8/45*pi^-1"));
    assert!(out.contains("-5/32"));
}

#[test]
fn residues_csv_rows() {
    let o = run(&["residues", "--m", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "residue,exact_per_epsilon,value_per_epsilon");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("4/3*pi^-1"));
    assert!(lines[2].contains("-1/4"));
}

#[test]
fn theorems_report_lists_relations() {
    let o = run(&["theorems", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\"relations\""));
    assert!(out.contains("\"beta\""));
    assert!(!out.contains("\"holds\": false"));
}

#[test]
fn verify_clifford_suite_passes() {
    let o = run(&["verify", "--suite", "clifford"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("PASS clifford")));
    assert!(out.trim_end().ends_with("0 failed"));
}

#[test]
fn verify_fails_with_impossible_tolerance() {
    let o = run(&["verify", "--suite", "spectral", "--tol-a3", "1e-9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL spectral"));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn output_is_deterministic() {
    let args = [
        "heat-trace",
        "--m",
        "4",
        "--format",
        "json",
        "--mu-max",
        "60",
        "--t-min",
        "0.02",
        "--t-max",
        "0.2",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("residues.json");
    let o = run(&[
        "residues",
        "--m",
        "4",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"out\""));
    assert!(text.contains("4/3*pi^-1"));
}

#[test]
fn emit_trace_writes_two_columns() {
    let o = run(&[
        "heat-trace",
        "--m",
        "4",
        "--mu-max",
        "40",
        "--samples",
        "12",
        "--emit-trace",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 12);
    for r in rows {
        let cols: Vec<f64> = r.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert_eq!(cols.len(), 2);
        assert!(cols[0] > 0.0);
    }
}
