//! The binary: byte-identical reruns, output formats and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unc-commit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

const COMMANDS: &[&[&str]] = &[
    &[
        "capacity",
        "--gamma",
        "0.05,0.1,0.12",
        "--delta",
        "0.15,0.3",
    ],
    &["soundness", "--trials", "3", "--seed", "7"],
    &[
        "soundness",
        "--trials",
        "3",
        "--seed",
        "7",
        "--strategy",
        "max-noise",
        "--format",
        "csv",
    ],
    &["binding", "--trials", "40", "--seed", "3", "--ell2", "2"],
    &["concealing", "--trials", "2", "--seed", "1", "--n", "6"],
    &["run", "--seed", "11", "--n", "512"],
];

#[test]
fn reruns_are_byte_identical() {
    for args in COMMANDS {
        let a = stdout(args);
        assert!(!a.is_empty(), "{args:?}");
        assert_eq!(a, stdout(args), "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_reports() {
    let base = ["binding", "--trials", "30", "--seed", "5", "--ell2", "3"];
    let one = stdout(&[&base[..], &["--threads", "1"]].concat());
    let three = stdout(&[&base[..], &["--threads", "3"]].concat());
    assert_eq!(one, three);
}

#[test]
fn seeds_change_reports() {
    let a = stdout(&["soundness", "--trials", "2", "--seed", "1", "--n", "512"]);
    let b = stdout(&["soundness", "--trials", "2", "--seed", "2", "--n", "512"]);
    assert_ne!(a, b);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cap.jsonl");
    let args = [
        "capacity", "--gamma", "0.1", "--delta", "0.15,0.2", "--format", "jsonl",
    ];
    let printed = stdout(&args);
    stdout(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(std::fs::read(&path).unwrap(), printed);
    let text = String::from_utf8(printed).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("{\"gamma\":0.1,\"delta\":0.15,"));
}

#[test]
fn jsonl_reports_frame_their_records() {
    let text = String::from_utf8(stdout(&["soundness", "--trials", "2", "--n", "512"])).unwrap();
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["command"], "soundness");
    assert_eq!(lines[0]["config"]["n"], 512);
    assert_eq!(lines[1]["trial"], 0);
    assert_eq!(lines[3]["summary"]["trials"], 2);
}

#[test]
fn entropy_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let dist = dir.path().join("coin.txt");
    std::fs::write(&dist, "heads 0.75\ntails 0.25\n").unwrap();
    let joint = dir.path().join("xyz.tsv");
    std::fs::write(
        &joint,
        "X\tY\tZ\tp\n0\t0\t0\t0.3\n1\t0\t0\t0.1\n0\t1\t1\t0.2\n1\t1\t0\t0.4\n",
    )
    .unwrap();
    let args = [
        "entropy",
        "--dist",
        dist.to_str().unwrap(),
        "--joint",
        joint.to_str().unwrap(),
        "--eps",
        "0,0.1",
    ];
    let text = String::from_utf8(stdout(&args)).unwrap();
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    let header = rows.next().unwrap();
    assert!(header.starts_with("input,eps,min_entropy"));
    assert_eq!(rows.count(), 4);
    assert_eq!(text, String::from_utf8(stdout(&args)).unwrap());
}

#[test]
fn invalid_input_exits_nonzero() {
    let bad: &[&[&str]] = &[
        &["capacity", "--gamma", "0.2", "--delta", "0.1"],
        &["capacity", "--gamma", "0.6", "--delta", "0.7"],
        &["soundness", "--nu", "-0.1"],
        &["soundness", "--beta", "0.05"],
        &["soundness", "--n", "0"],
        &["soundness", "--strategy", "fixed:0.5"],
        &[
            "soundness",
            "--format",
            "xml",
            "--trials",
            "1",
            "--n",
            "512",
        ],
        &["binding", "--n", "30"],
        &["binding", "--strategy", "sideways"],
        &["concealing", "--t", "0.3"],
        &["concealing", "--k", "2"],
        &["run", "--ell1", "10"],
        &["entropy"],
        &["entropy", "--dist", "/nonexistent/file"],
        &["soundness", "--gamma", "abc"],
    ];
    for args in bad {
        let out = run(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(out.stdout.is_empty(), "{args:?} wrote a report");
    }
}
