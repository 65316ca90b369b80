use std::io::Write;
use std::process::{Command, Output, Stdio};

use splitdec::{load_graph, split_decomposition};
use splitdec_cli::{from_json, JsonTree};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_splitdec"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const P4: &str = "a b\nb c\nc d\n";
const K4: &str = "# complete graph\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";

#[test]
fn decompose_p4_as_text() {
    let o = run(&["decompose"], P4);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a -- (S *b (S *c d))\n");
    let o = run(&["decompose", "--root", "c"], P4);
    assert_eq!(stdout(&o), "c -- (S^ (S a *b) d)\n");
}

#[test]
fn decompose_k4_as_dot() {
    let o = run(&["decompose", "--format", "dot"], K4);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(dot.matches("shape=box, label=\"C\"").count(), 1);
    assert_eq!(dot.matches("shape=box").count(), 1);
    assert_eq!(dot.matches("shape=ellipse").count(), 4);
    assert_eq!(dot.matches("[dir=none]").count(), 4);
}

#[test]
fn json_round_trips() {
    let text = "x y\ny z\nz w\nw x\nx v\nv u\nu y\n";
    let o = run(&["decompose", "--format", "json"], text);
    assert_eq!(o.status.code(), Some(0));
    let j: JsonTree = serde_json::from_str(&stdout(&o)).unwrap();
    let (t, labels) = from_json(&j).unwrap();
    let g = load_graph(text).unwrap();
    assert_eq!(labels, g.labels());
    assert_eq!(t.canonical(), split_decomposition(&g, 0).unwrap().canonical());
}

#[test]
fn output_is_deterministic() {
    for format in ["text", "json", "dot"] {
        let a = run(&["decompose", "--format", format], K4);
        let b = run(&["decompose", "--format", format], K4);
        assert_eq!(a.stdout, b.stdout);
    }
    let a = run(&["gen", "--n", "30", "--m", "60", "--seed", "5"], "");
    let b = run(&["gen", "--n", "30", "--m", "60", "--seed", "5"], "");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_contract() {
    let o = run(&["gen", "--n", "4", "--m", "3", "--seed", "7"], "");
    assert_eq!(o.status.code(), Some(0));
    let g = load_graph(&stdout(&o)).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 3));
    for (n, m) in [("3", "1"), ("5", "11")] {
        let o = run(&["gen", "--n", n, "--m", m], "");
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).contains("no connected simple graph"));
    }
}

#[test]
fn verify_reports_match() {
    let o = run(&["verify"], P4);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("MATCH "));
    let o = run(&["decompose", "--verify"], K4);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stderr(&o), "MATCH\n");
    let big: String = (1..13).map(|i| format!("{} {}\n", i - 1, i)).collect();
    let o = run(&["verify"], &big);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn errors_exit_with_one() {
    let o = run(&["decompose"], "a b\nc d\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("disconnected"));
    assert_eq!(run(&["decompose"], "a b c\n").status.code(), Some(1));
    assert_eq!(run(&["decompose", "--root", "zz"], P4).status.code(), Some(1));
    assert_eq!(run(&["decompose", "/no/such/file"], "").status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(run(&["decompose", "--format", "yaml"], P4).status.code(), Some(1));
    assert_eq!(run(&["decompose"], "a\n").status.code(), Some(1));
}

#[test]
fn bench_rows() {
    let o = run(&["bench", "--sizes", "1e2,2e2,4e2", "--reps", "1"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert!(out.contains("median doubling ratio"));
    let o = run(&["bench", "--sizes", "100", "--reps", "1"], "");
    assert_eq!(stdout(&o).lines().count(), 2);
    assert_eq!(run(&["bench", "--sizes", "4e2,1e2"], "").status.code(), Some(1));
}
