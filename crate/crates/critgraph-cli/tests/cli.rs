//! Behavioural tests for the command-line interface: output formats, exit
//! codes, error records, and the determinism contract of `scan`.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_critgraph"))
}

fn run_with_stdin(args: &[&str], stdin_data: &str) -> (String, String, i32) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn critgraph");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin_data.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn run(args: &[&str]) -> (String, String, i32) {
    run_with_stdin(args, "")
}

#[test]
fn chi_prints_index_and_class() {
    let (out, _, code) = run(&["chi", "--graph6", "D~~"]);
    assert_eq!(out, "chi'=5 class=2\n");
    assert_eq!(code, 0);
    let (out, _, code) = run(&["chi", "--graph6", "C~"]);
    assert_eq!(out, "chi'=3 class=1\n");
    assert_eq!(code, 0);
}

#[test]
fn critical_prints_flag() {
    let (out, _, code) = run(&["critical", "--graph6", "C~"]);
    assert_eq!(out, "delta_critical=false\n");
    assert_eq!(code, 0);
}

#[test]
fn color_emits_proper_text() {
    let (out, _, code) = run(&["color", "--graph6", "C~"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("k 3\n"), "{out}");
    assert_eq!(out.lines().count(), 7); // header + 6 edges
    // infeasible request answers none
    let (out, _, code) = run(&["color", "--graph6", "D~{", "--colors", "4"]);
    assert_eq!(out, "none\n");
    assert_eq!(code, 0);
    // k below the maximum degree is rejected
    let (_, err, code) = run(&["color", "--graph6", "D~{", "--colors", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("below the maximum degree"), "{err}");
}

#[test]
fn unknown_flags_exit_2_with_usage() {
    let (_, err, code) = run(&["chi", "--bogus", "x"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (_, err, code) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn split_prints_graph6() {
    let (out, _, code) = run(&[
        "split", "--graph6", "C~", "--vertex", "0", "--partition", "1/2,3",
    ]);
    assert_eq!(code, 0);
    let line = out.trim();
    let g = critgraph::Graph::from_graph6(line).unwrap();
    assert_eq!((g.n(), g.m()), (5, 7));
    // invalid partition is a usage error
    let (_, err, code) = run(&[
        "split", "--graph6", "C~", "--vertex", "0", "--partition", "/1,2,3",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("empty side"), "{err}");
}

#[test]
fn scan_streams_reports_in_input_order() {
    // C_5, C_6, K_5: the class-1 C_6 row is fully skipped
    let corpus = "Dhc\nEhEG\nD~{\n";
    let (out, err, code) = run_with_stdin(&["scan", "--checks", "val", "--budget", "100"], corpus);
    assert_eq!(code, 0, "stderr: {err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "graph6,check,checked,skipped,violations,millis");
    assert!(lines[1].starts_with("Dhc,val,10,0,0,"), "{}", lines[1]);
    assert!(lines[2].starts_with("EhEG,val,0,12,0,"), "{}", lines[2]);
    assert!(lines[3].starts_with("D~{,val,0,20,0,"), "{}", lines[3]);
}

#[test]
fn scan_empty_stream_prints_header_only() {
    let (out, _, code) = run_with_stdin(&["scan", "--checks", "val"], "");
    assert_eq!(out, "graph6,check,checked,skipped,violations,millis\n");
    assert_eq!(code, 0);
}

#[test]
fn scan_malformed_line_produces_error_record_in_position() {
    let corpus = "Dhc\n???bad???\nD~{\n";
    let (out, err, code) = run_with_stdin(&["scan", "--checks", "val"], corpus);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[1].starts_with("Dhc,val,"));
    assert_eq!(lines[2], "???bad???,error,0,0,0,0");
    assert!(lines[3].starts_with("D~{,val,"));
    assert!(err.contains("line 2:"), "{err}");
}

#[test]
fn scan_json_mirrors_csv() {
    let corpus = "Dhc\n";
    let (out, _, code) = run_with_stdin(
        &["scan", "--checks", "val,broom_main", "--format", "json"],
        corpus,
    );
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("\"check\":\"val\""), "{}", lines[0]);
    assert!(lines[0].contains("\"graph6\":\"Dhc\""));
    assert!(lines[1].contains("\"check\":\"broom_main\""));
    assert!(lines[1].contains("\"violations\":[]"));
}

#[test]
fn scan_is_byte_identical_across_worker_counts() {
    let corpus = "Dhc\nC~\nD~{\nEhEG\nBW\nDhc\n";
    let args_base = [
        "scan",
        "--checks",
        "val,multifan,broom_main,overfull",
        "--budget",
        "64",
        "--seed",
        "7",
    ];
    let mut outputs = Vec::new();
    for jobs in ["1", "2", "5"] {
        let mut args = args_base.to_vec();
        args.extend_from_slice(&["--jobs", jobs]);
        let (out, _, code) = run_with_stdin(&args, corpus);
        assert_eq!(code, 0);
        outputs.push(out);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn script_render_and_execute() {
    let dir = tempfile::tempdir().unwrap();
    let script_path = dir.path().join("prog.ks");
    std::fs::write(&script_path, "swap@ 0 (1/2)\n").unwrap();
    let coloring_path = dir.path().join("coloring.txt");
    std::fs::write(
        &coloring_path,
        "k 2\n0 1 -\n1 2 1\n2 3 2\n3 4 1\n0 4 2\n",
    )
    .unwrap();
    // render only
    let (out, _, code) = run(&[
        "script",
        "--input",
        script_path.to_str().unwrap(),
        "--render",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "[ 0   ]\n[ 1/2 ]\n");
    // execute against C_5 − 01
    let (out, _, code) = run(&[
        "script",
        "--input",
        script_path.to_str().unwrap(),
        "--graph6",
        "Dhc",
        "--coloring",
        coloring_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("step 1 ok swap@ 0 (1/2) hash="), "{out}");
    assert!(out.contains("\nk 2\n"), "{out}");
    // failing step exits 1 with the step index
    std::fs::write(&script_path, "color 1-2: 1\n").unwrap();
    let (_, err, code) = run(&[
        "script",
        "--input",
        script_path.to_str().unwrap(),
        "--graph6",
        "Dhc",
        "--coloring",
        coloring_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("aborted at statement 1"), "{err}");
}

#[test]
fn jobs_env_var_is_honored() {
    let corpus = "Dhc\nD~{\n";
    let mut child = bin()
        .args(["scan", "--checks", "val"])
        .env(critgraph_cli::JOBS_ENV, "3")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(corpus.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // same content as the single-worker run
    let (single, _, _) = run_with_stdin(&["scan", "--checks", "val", "--jobs", "1"], corpus);
    assert_eq!(text, single);
}
