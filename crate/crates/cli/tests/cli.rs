use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const GRID: &str = "1 2\n2 3\n4 5\n5 6\n7 8\n8 9\n1 4\n4 7\n2 5\n5 8\n3 6\n6 9\n";
const CLUSTER: &str = include_str!("../../core/fixtures/ghz4_cluster.edges");
const GOLDEN: &str = include_str!("../../core/fixtures/ghz4_cluster.transcript.json");

fn gsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsr")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn epr_counts_and_frames() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "grid.edges", GRID);
    let x = json(&gsr(&["epr", &grid, "1", "9"]));
    assert_eq!(x["counts"]["measurements"], 3);
    assert_eq!(x["final"]["vertices"], serde_json::json!([1, 3, 4, 7, 8, 9]));
    let rep = json(&gsr(&["epr", &grid, "1", "9", "--method", "repeater"]));
    assert_eq!(rep["counts"]["measurements"], 6);

    let frames = dir.path().join("frames");
    let out = gsr(&["epr", &grid, "1", "9", "--frames", frames.to_str().unwrap(), "--snapshots"]);
    let doc = json(&out);
    assert_eq!(doc["snapshots"].as_array().unwrap().len(), 3);
    let mut names: Vec<String> =
        fs::read_dir(&frames).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["frame_000.dot", "frame_001.dot", "frame_002.dot", "frame_003.dot"]);

    let edge = write(dir.path(), "edge.edges", "1 2\n");
    assert_eq!(json(&gsr(&["epr", &edge, "1", "2"]))["counts"]["measurements"], 0);
}

#[test]
fn epr_with_explicit_path() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "grid.edges", GRID);
    let doc = json(&gsr(&["epr", &grid, "1", "9", "--path", "1,2,3,6,9"]));
    assert_eq!(doc["counts"]["measurements"], 5);
    let bad = gsr(&["epr", &grid, "1", "9", "--path", "1,2,3,6,5,8,9"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn ghz_outputs_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cluster = write(dir.path(), "cluster.edges", CLUSTER);
    let out = gsr(&["ghz", &cluster, "1", "2", "4", "5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), GOLDEN);

    let grid = write(dir.path(), "grid.edges", GRID);
    let doc = json(&gsr(&["ghz", &grid, "1", "3", "9"]));
    // Leftover vertices may stay behind as isolated components.
    let edges = doc["final"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 2);
    for e in edges {
        for v in e.as_array().unwrap() {
            assert!([1, 3, 9].contains(&v.as_u64().unwrap()));
        }
    }

    // Four leaves of a star admit no suitable repeater line.
    let star = write(dir.path(), "star.edges", "5 1\n5 2\n5 3\n5 4\n");
    let out = gsr(&["ghz", &star, "1", "2", "3", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis unmet"));

    let split = write(dir.path(), "split.edges", "1 2\n3 4\n");
    assert_eq!(gsr(&["epr", &split, "1", "3"]).status.code(), Some(2));
    assert_eq!(gsr(&["ghz", &split, "1", "2", "3"]).status.code(), Some(2));
}

#[test]
fn scan_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = gsr(&["scan", "--n", "6", "--pairs", "1:6,2:5", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = doc["hits"].as_array().unwrap().iter().map(|h| h["graph6"].as_str().unwrap()).collect();
    assert_eq!(keys, ["EFh_", "EXdO", "ElCg", "ErGW"]);

    let five = json(&gsr(&["scan", "--n", "5", "--all-pairings"]));
    assert_eq!(five["hits"].as_array().unwrap().len(), 0);
    assert_eq!(gsr(&["scan", "--n", "8"]).status.code(), Some(3));
}

#[test]
fn orbit_vminor_verify_convert() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.edges", "1 2\n1 3\n1 4\n");
    let out = gsr(&["orbit", &star]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);

    let path5 = write(dir.path(), "p5.edges", "1 2\n2 3\n3 4\n4 5\n");
    let pair = write(dir.path(), "pair.edges", "1 5\n");
    let doc = json(&gsr(&["vminor", &path5, &pair]));
    assert_eq!(doc["vertex_minor"], true);
    assert!(!doc["steps"].as_array().unwrap().is_empty());
    // LC keeps a connected graph connected.
    let path4 = write(dir.path(), "p4.edges", "1 2\n2 3\n3 4\n");
    let empty = write(dir.path(), "empty.edges", "1\n2\n3\n4\n");
    assert_eq!(json(&gsr(&["vminor", &path4, &empty]))["vertex_minor"], false);

    let v = json(&gsr(&["verify", "--max-n", "4", "--sample", "3"]));
    assert_eq!(v["graphs"], 1 + 2 + 8 + 64 + 3);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);

    let grid = write(dir.path(), "grid.edges", GRID);
    let g6 = gsr(&["convert", &grid, "--to", "graph6"]);
    let g6_path = write(dir.path(), "grid.g6", &String::from_utf8(g6.stdout).unwrap());
    let back = gsr(&["convert", &g6_path, "--to", "edgelist"]);
    let mut lines: Vec<String> = String::from_utf8(back.stdout).unwrap().lines().map(String::from).collect();
    let mut want: Vec<String> = GRID.lines().map(String::from).collect();
    lines.sort();
    want.sort();
    assert_eq!(lines, want);
    let js = gsr(&["convert", &grid, "--to", "json", "--out", dir.path().join("g.json").to_str().unwrap()]);
    assert!(js.status.success());
    let dot = gsr(&["convert", dir.path().join("g.json").to_str().unwrap(), "--to", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("  1 -- 2;"));
    let garbage = write(dir.path(), "bad.edges", "1 x\n");
    assert_eq!(gsr(&["convert", &garbage, "--to", "graph6"]).status.code(), Some(2));
}
