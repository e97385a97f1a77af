// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! End-to-end runs of the command-line tool and its exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn frrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frrlab")).args(args).env("FRRLAB_WORKERS", "2").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn generated_alg1_table_verifies() {
    let dir = scratch("alg1");
    let table = dir.join("alg1.json");
    let gen = frrlab(&["pattern", "gen", "alg1-k5", "K5", "--s", "0", "--t", "4", "--out", table.to_str().unwrap()]);
    assert_eq!(code(&gen), 0, "{gen:?}");
    let v = frrlab(&["verify", "K5", table.to_str().unwrap(), "--mode", "perfect"]);
    assert_eq!(code(&v), 0);
    assert!(stdout(&v).starts_with("Holds (1024 failure sets"), "{}", stdout(&v));
}

#[test]
fn counterexamples_exit_with_one() {
    let dir = scratch("rr");
    let table = dir.join("rr.json");
    let gen = frrlab(&["pattern", "gen", "round-robin", "K5", "--s", "0", "--t", "4", "--out", table.to_str().unwrap()]);
    assert_eq!(code(&gen), 0);
    let v = frrlab(&["verify", "K5", table.to_str().unwrap(), "--mode", "perfect"]);
    assert_eq!(code(&v), 1);
    assert!(stdout(&v).starts_with("Counterexample"));
}

#[test]
fn attacks_exit_with_one() {
    for candidate in ["distance2", "ham-route", "round-robin"] {
        let out = frrlab(&["attack", "--complete-r", "1", "--candidate", candidate]);
        assert_eq!(code(&out), 1, "{candidate}: {out:?}");
        assert!(stdout(&out).contains("Looped"), "{candidate}: {}", stdout(&out));
    }
    let gadget = frrlab(&["attack", "--gadget", "k7_source_dest"]);
    assert_eq!(code(&gadget), 0);
    assert!(stdout(&gadget).contains("14 failed"));
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(code(&frrlab(&["classify", "no-such-file.graphml"])), 2);
    assert_eq!(code(&frrlab(&["attack", "--gadget", "k9_nonsense"])), 2);
    assert_eq!(code(&frrlab(&["verify", "K5", "missing.json", "--mode", "perfect"])), 2);
    assert_eq!(code(&frrlab(&["verify", "K5", "missing.json", "--mode", "sideways"])), 2);
}

#[test]
fn classify_prints_json() {
    let out = frrlab(&["classify", "netrail", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 7);
    assert_eq!(v["outerplanar"], false);
}

#[test]
fn ham_touring_holds() {
    let out = frrlab(&["tour", "K7", "--k", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("Holds"));
}

#[test]
fn report_writes_every_format_and_is_reproducible() {
    let data = scratch("report-data");
    std::fs::write(data.join("ring.txt"), "0 1\n1 2\n2 3\n3 0\n").unwrap();
    std::fs::write(data.join("k5.txt"), "0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    let graphml = r#"<graphml><graph edgedefault="undirected">
        <node id="a"/><node id="b"/><node id="c"/><node id="d"/>
        <edge source="a" target="b"/><edge source="b" target="c"/><edge source="c" target="d"/>
        <edge source="d" target="a"/><edge source="a" target="c"/><edge source="b" target="d"/>
        </graph></graphml>"#;
    std::fs::write(data.join("k4.graphml"), graphml).unwrap();
    let ingest = frrlab(&["ingest", data.to_str().unwrap()]);
    assert_eq!(code(&ingest), 0);
    assert!(stdout(&ingest).contains("3 topologies"));

    let run = |dir: &PathBuf| {
        let mut args = vec!["report", data.to_str().unwrap(), "--out", dir.to_str().unwrap()];
        for format in ["csv", "json", "svg-bars", "dot-gadgets"] {
            args.extend(["--format", format]);
        }
        let out = frrlab(&args);
        assert_eq!(code(&out), 0, "{out:?}");
        std::fs::read(dir.join("classification.csv")).unwrap()
    };
    let (a, b) = (scratch("report-a"), scratch("report-b"));
    assert_eq!(run(&a), run(&b));
    for file in ["classification.csv", "aggregates.csv", "report.json", "verdicts.svg", "k7_source_dest.dot"] {
        assert!(a.join(file).exists(), "{file}");
    }
    let csv = String::from_utf8(std::fs::read(a.join("classification.csv")).unwrap()).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("k4,") && l.contains("Impossible")), "{csv}");
}
