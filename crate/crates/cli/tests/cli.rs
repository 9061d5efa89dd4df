use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn lplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lplab"))
        .args(args)
        .env_remove("LPLAB_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn bounds_for_four_paths() {
    let o = lplab(&["bounds", "--k", "4", "--n", "16"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("f ≤ 11/4 (2.75)\n"), "{}", stdout(&o));
}

#[test]
fn bounds_table() {
    let o = lplab(&["bounds", "--k", "3", "--table", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().next().unwrap().starts_with("k=3  upper 1/17"));
}

#[test]
fn analyze_star() {
    let o = lplab(&["analyze", "Cs", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("ℓ=2, |𝓛|=3"));
    let v = json(&o);
    assert_eq!(v["longest_length"], 2);
    assert_eq!(v["longest_count"], 3);
}

#[test]
fn search_generated_corpus() {
    let o = lplab(&["search", "--gen-n", "5", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["graphs_scanned"], 21);
    assert!(stderr(&o).contains("21 graphs, 0 violations"), "{}", stderr(&o));
}

#[test]
fn search_empty_file() {
    let f = temp_file("");
    let o = lplab(&["search", "--file", f.path().to_str().unwrap(), "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["graphs_scanned"], 0);
}

#[test]
fn malformed_lines_are_recorded_or_fatal() {
    let f = temp_file(">>graph6<<Cs\nnot a graph\nDQc\n");
    let path = f.path().to_str().unwrap();
    let o = lplab(&["search", "--file", path, "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["graphs_scanned"], 2);
    assert_eq!(v["input_errors"][0]["line"], 2);
    assert!(stderr(&o).contains("line 2:"));

    let strict = lplab(&["search", "--file", path, "--k", "3", "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(stderr(&strict).starts_with("lplab: "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lplab(&["search", "--gen-n", "5", "--k", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(lplab(&["bounds", "--k", "2", "--n", "5"]).status.code(), Some(2));
    assert_eq!(lplab(&["verify", "Cs", "--k", "3", "--checks", "cor1i"]).status.code(), Some(2));
    assert_eq!(lplab(&["analyze", "not-a-graph"]).status.code(), Some(2));
}

#[test]
fn verify_star() {
    let o = lplab(&["verify", "Cs", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let instances = v["instances"].as_array().unwrap();
    assert_eq!(instances.len(), 1);
    assert!(instances[0]["reports"].as_array().unwrap().iter().all(|r| r["status"] != "fail"));
}

#[test]
fn verify_relaxed_surgery_from_edge_list() {
    let edges = "12 12\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n1 7\n7 8\n9 3\n3 10\n10 8\n8 11\n";
    let f = temp_file(edges);
    let o = lplab(&[
        "verify",
        f.path().to_str().unwrap(),
        "--paths",
        "1-2-3,1-7-8,9-3-10-8-11",
        "--relaxed",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let inst = &v["instances"][0];
    assert_eq!(inst["system"]["longest_certified"], false);
    let reports = inst["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["check"], "surgery");
    assert_eq!(reports[0]["status"], "pass");
    assert_eq!(inst["surgery"]["s1"], serde_json::json!([11, 8, 10, 3, 2, 1, 7]));
    assert_eq!(inst["surgery"]["x"], 8);
}

#[test]
fn construct_star() {
    let o = lplab(&["construct", "Cs", "--paths", "all", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["order"], 19);
    assert_eq!(v["f"], 0);
    assert_eq!(v["longest_preserved"], true);
}

#[test]
fn jobs_from_environment_do_not_change_output() {
    let args = ["search", "--gen-max", "6", "--k", "4"];
    let one = lplab(&[&args[..], &["--jobs", "1"]].concat());
    let two = Command::new(env!("CARGO_BIN_EXE_lplab"))
        .args(args)
        .env("LPLAB_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(two.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["search", "--gen-n", "5", "--k", "3"];
    let printed = lplab(&args);
    let written = lplab(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), printed.stdout);
}

#[test]
fn extremal_witness_replays_through_verify() {
    let search = lplab(&["search", "--gen-max", "6", "--k", "3"]);
    assert_eq!(search.status.code(), Some(0));
    let v = json(&search);
    let w = &v["extremal"]["witness"];
    let graph6 = w["instance"]["graph6"].as_str().unwrap();
    let members: Vec<String> = w["instance"]["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.to_string())
        .collect();
    let spec = format!("@{}", members.join(","));
    let o = lplab(&["verify", graph6, "--paths", &spec, "--checks", "thm3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = &json(&o)["instances"][0]["reports"][0];
    assert_eq!(report["check"], "thm3");
    assert_eq!(report["lhs"], w["f"].to_string());
}
