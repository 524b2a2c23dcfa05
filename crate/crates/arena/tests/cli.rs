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

use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

const BIN: &str = env!("CARGO_BIN_EXE_crosstalk-arena");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn data_rows(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn path_query_prints_the_route() {
    let out = ok(&["path-query", "--src", "0", "--dst", "108"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["hops"], 24);
    assert_eq!(v["nodes"][14], 64);
}

#[test]
fn experiment2_is_byte_identical_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        ok(&["experiment2", "--shots", "1024", "--out", d.to_str().unwrap()]);
    }
    let mut names: Vec<_> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "experiment2.csv",
            "experiment2.csv.provenance.json",
            "experiment2.json",
            "experiment2.json.provenance.json"
        ]
    );
    for n in &names {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap(), "{n}");
    }
    assert_eq!(data_rows(&a.join("experiment2.csv")), 10);
    let prov: serde_json::Value =
        serde_json::from_slice(&std::fs::read(a.join("experiment2.csv.provenance.json")).unwrap())
            .unwrap();
    let digest: String = Sha256::digest(std::fs::read(a.join("experiment2.csv")).unwrap())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(prov["sha256"], digest);
    assert_eq!(prov["config"]["shots"], 1024);
}

#[test]
fn experiment1_reports_every_option() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["experiment1", "--probe-shots", "64", "--shots", "128", "--out", out]);
    assert_eq!(data_rows(&dir.path().join("experiment1_options.csv")), 124);
    assert_eq!(data_rows(&dir.path().join("experiment1_accuracy_by_position.csv")), 124);
    assert!(data_rows(&dir.path().join("experiment1_path_informed.csv")) < 124);
}

#[test]
fn learn_observe_predict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["learn", "--experiment", "3", "--shots", "512", "--out", out]);
    ok(&["learn", "--experiment", "3", "--shots", "512", "--seed", "99", "--observe", "40", "--out", out]);
    let ds = dir.path().join("experiment3_dataset.json");
    let obs = dir.path().join("observed-40.json");
    let line = ok(&[
        "predict",
        "--dataset",
        ds.to_str().unwrap(),
        "--observed",
        obs.to_str().unwrap(),
        "--true-label",
        "40",
        "--out",
        out,
    ]);
    assert!(line.contains("predicted 40"), "{line}");
    assert_eq!(data_rows(&dir.path().join("prediction.csv")), 32);
    let restricted = ok(&[
        "predict",
        "--dataset",
        ds.to_str().unwrap(),
        "--observed",
        obs.to_str().unwrap(),
        "--strategy",
        "optimal",
        "--k",
        "8",
        "--out",
        out,
    ]);
    assert!(restricted.starts_with("predicted"));
    // --strategy without --k is a configuration conflict.
    let conflict = code(&[
        "predict",
        "--dataset",
        ds.to_str().unwrap(),
        "--observed",
        obs.to_str().unwrap(),
        "--strategy",
        "optimal",
        "--out",
        out,
    ]);
    assert_eq!(conflict, 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    std::fs::write(p("bad.json"), "{\"gamma_path\": 0.1}").unwrap();
    std::fs::write(p("file"), "").unwrap();

    assert_eq!(code(&["path-query", "--src", "0"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["experiment2", "--shots", "0"]), 2);
    assert_eq!(code(&["experiment2", "--noise", &p("bad.json")]), 2);
    assert_eq!(code(&["experiment2", "--noise", &p("missing.json")]), 4);
    assert_eq!(code(&["experiment2", "--device", &p("missing.json")]), 4);
    assert_eq!(code(&["experiment3", "--strategy", "best", "--k", "4", "--repetitions", "1"]), 2);
    assert_eq!(code(&["learn", "--experiment", "5"]), 2);
    assert_eq!(code(&["path-query", "--src", "0", "--dst", "500"]), 3);
    assert_eq!(code(&["path-query", "--src", "7", "--dst", "7"]), 3);
    assert_eq!(
        code(&["attack", "--attacker", "64,5", "--shots", "64", "--out", &p("o")]),
        3
    );
    assert_eq!(
        code(&["attack", "--attacker", "0,108", "--shots", "64", "--out", &p("file")]),
        4
    );
    let o = Command::new(BIN)
        .args(["path-query", "--src", "0", "--dst", "1"])
        .env("CROSSTALK_ARENA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(code(&["--help"]), 0);
}
