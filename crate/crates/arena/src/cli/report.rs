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

//! Report files: CSV/JSON builders, provenance sidecars and atomic writes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::active::{AttackOption, AttackReport};
use crate::experiments::MseMatrix;
use crate::passive::{CurvePoint, PredictionResult};
use crate::Error;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Output files collected in memory and written together at the end, so a
/// failing run leaves nothing behind.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

#[derive(Serialize)]
struct ProvenanceFile<'a> {
    file: &'a str,
    sha256: String,
    command: &'a str,
    config_hash: String,
    config: &'a serde_json::Value,
    crate_name: &'static str,
    crate_version: &'static str,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) {
        let mut text = serde_json::to_string_pretty(value).expect("report serializes");
        text.push('\n');
        self.add(name, text);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    /// Writes every file plus a `<name>.provenance.json` sidecar.
    pub fn commit(
        self,
        dir: &Path,
        command: &str,
        config: &serde_json::Value,
    ) -> Result<Vec<PathBuf>, Error> {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let config_text = serde_json::to_string(config).expect("config serializes");
        let config_hash = sha256_hex(config_text.as_bytes());
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            let prov = ProvenanceFile {
                file: name,
                sha256: sha256_hex(bytes),
                command,
                config_hash: config_hash.clone(),
                config,
                crate_name: env!("CARGO_PKG_NAME"),
                crate_version: env!("CARGO_PKG_VERSION"),
            };
            let mut prov_text = serde_json::to_string_pretty(&prov).expect("provenance serializes");
            prov_text.push('\n');
            written.push(write_atomic(&dir.join(name), bytes)?);
            written.push(write_atomic(
                &dir.join(format!("{name}.provenance.json")),
                prov_text.as_bytes(),
            )?);
        }
        Ok(written)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<PathBuf, Error> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = path.with_file_name(format!(
        ".{}.tmp-{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })?;
    Ok(path.to_path_buf())
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Second-qubit options in the fixed-first-qubit table layout.
pub fn options_csv(options: &[AttackOption]) -> Vec<u8> {
    csv_bytes(
        &["second_qubit", "acc0", "deviation_pct", "severity"],
        options
            .iter()
            .map(|o| {
                vec![
                    o.attacker_pair.1.to_string(),
                    format!("{:.5}", o.acc0),
                    format!("{:.2}", o.deviation_pct),
                    o.severity.to_string(),
                ]
            })
            .collect(),
    )
}

/// Victim sweep in the position/intersection table layout.
pub fn sweep_csv(reports: &[AttackReport]) -> Vec<u8> {
    csv_bytes(
        &["v1", "v2", "intersects", "acc0", "deviation_pct", "severity"],
        reports
            .iter()
            .map(|r| {
                vec![
                    r.victim_layout[0].to_string(),
                    r.victim_layout[1].to_string(),
                    if r.intersected { "TRUE" } else { "FALSE" }.to_string(),
                    format!("{:.5}", r.acc0),
                    format!("{:.2}", r.deviation_pct),
                    r.severity.to_string(),
                ]
            })
            .collect(),
    )
}

pub fn curve_csv(points: &[CurvePoint]) -> Vec<u8> {
    csv_bytes(
        &["k", "mean_acc1", "mean_confidence", "exact", "evaluations"],
        points
            .iter()
            .map(|p| {
                vec![
                    p.k.to_string(),
                    format!("{:.6}", p.mean_acc1),
                    format!("{:.6}", p.mean_confidence),
                    p.exact.to_string(),
                    p.evaluations.to_string(),
                ]
            })
            .collect(),
    )
}

pub fn matrix_csv(labels: &[String], m: &MseMatrix) -> Vec<u8> {
    let mut header = vec!["observed"];
    header.extend(labels.iter().map(String::as_str));
    csv_bytes(
        &header,
        m.values
            .iter()
            .zip(labels)
            .map(|(row, l)| {
                let mut r = vec![l.clone()];
                r.extend(row.iter().map(|v| format!("{v:.4}")));
                r
            })
            .collect(),
    )
}

pub fn prediction_csv(p: &PredictionResult) -> Vec<u8> {
    csv_bytes(
        &["label", "mse", "rank"],
        p.ranked_labels
            .iter()
            .zip(&p.mse_values)
            .enumerate()
            .map(|(i, (l, m))| vec![l.clone(), format!("{m:.6}"), i.to_string()])
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::active::SeverityClass;

    #[test]
    fn options_layout() {
        let csv = options_csv(&[AttackOption {
            attacker_pair: (0, 66),
            acc0: 0.18042,
            deviation_pct: 81.958,
            severity: SeverityClass::Critical,
        }]);
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "second_qubit,acc0,deviation_pct,severity\n66,0.18042,81.96,Critical\n"
        );
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"x").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"x");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
