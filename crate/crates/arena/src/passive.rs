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

//! Passive SWAP attack: signature collection, qubit ranking, nearest-MSE
//! prediction and the listening-size tradeoff.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::active::Seeds;
use crate::circuits::{listening_circuit, merge_tenants, LogicalCircuit};
use crate::noise::{execute, CrosstalkModel, ShotRecords};
use crate::rng;
use crate::router::Layout;
use crate::topology::DeviceTopology;
use crate::Error;

pub const DEFAULT_EVAL_REPETITIONS: usize = 5;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum PassiveError {
    #[error("listening qubit {0} is missing from the shot records")]
    MissingQubit(usize),
    #[error("signature shapes differ")]
    ShapeMismatch,
    #[error("true label {0:?} is not in the dataset")]
    UnknownTrueLabel(String),
    #[error("ranking needs at least two dataset entries")]
    DatasetTooSmall,
    #[error("k = {k} is outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("victim of {size} qubits does not fit the {scheme} scheme on {device} qubits")]
    SizeOverflow {
        size: usize,
        scheme: &'static str,
        device: usize,
    },
    #[error("label {0:?} appears twice")]
    DuplicateLabel(String),
    #[error("listening qubit {0} overlaps the victim")]
    FootprintConflict(usize),
    #[error("unknown strategy {0:?} (expected optimal, default or non-optimal)")]
    UnknownStrategy(String),
    #[error("malformed dataset file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosstalkSignature {
    pub listening_qubits: Vec<usize>,
    pub ones_counts: Vec<u64>,
    pub shots: u64,
}

impl CrosstalkSignature {
    /// Keeps only `qubits`, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> Result<Self, PassiveError> {
        let idx = positions(&self.listening_qubits, qubits)?;
        Ok(CrosstalkSignature {
            listening_qubits: qubits.to_vec(),
            ones_counts: idx.iter().map(|&i| self.ones_counts[i]).collect(),
            shots: self.shots,
        })
    }
}

fn positions(listening: &[usize], qubits: &[usize]) -> Result<Vec<usize>, PassiveError> {
    qubits
        .iter()
        .map(|q| {
            listening
                .iter()
                .position(|x| x == q)
                .ok_or(PassiveError::MissingQubit(*q))
        })
        .collect()
}

/// Ones-count per listening qubit, ordered by ascending physical index.
pub fn signature(
    records: &ShotRecords,
    listening_qubits: &[usize],
) -> Result<CrosstalkSignature, PassiveError> {
    let mut qubits = listening_qubits.to_vec();
    qubits.sort_unstable();
    let idx = positions(&records.qubits, &qubits)?;
    let all = records.ones_per_qubit();
    Ok(CrosstalkSignature {
        ones_counts: idx.iter().map(|&i| all[i]).collect(),
        listening_qubits: qubits,
        shots: records.shots() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: CrosstalkModel,
    pub transpile_seed: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureDataset {
    pub listening_qubits: Vec<usize>,
    pub shots: u64,
    /// Label order is the tie-break order for predictions.
    pub entries: Vec<(String, Vec<u64>)>,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    listening_qubits: Vec<usize>,
    shots: u64,
    entries: IndexMap<String, Vec<u64>>,
    provenance: Provenance,
}

impl SignatureDataset {
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<CrosstalkSignature> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, counts)| CrosstalkSignature {
                listening_qubits: self.listening_qubits.clone(),
                ones_counts: counts.clone(),
                shots: self.shots,
            })
    }

    pub fn restrict(&self, qubits: &[usize]) -> Result<Self, PassiveError> {
        let idx = positions(&self.listening_qubits, qubits)?;
        Ok(SignatureDataset {
            listening_qubits: qubits.to_vec(),
            shots: self.shots,
            entries: self
                .entries
                .iter()
                .map(|(l, c)| (l.clone(), idx.iter().map(|&i| c[i]).collect()))
                .collect(),
            provenance: self.provenance.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        let file = DatasetFile {
            listening_qubits: self.listening_qubits.clone(),
            shots: self.shots,
            entries: self.entries.iter().cloned().collect(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&file).expect("dataset serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, PassiveError> {
        let file: DatasetFile =
            serde_json::from_str(text).map_err(|e| PassiveError::Parse(e.to_string()))?;
        let width = file.listening_qubits.len();
        for (label, counts) in &file.entries {
            if counts.len() != width || counts.iter().any(|&c| c > file.shots) {
                return Err(PassiveError::Parse(format!(
                    "entry {label:?} does not match {width} listening qubits at {} shots",
                    file.shots
                )));
            }
        }
        Ok(SignatureDataset {
            listening_qubits: file.listening_qubits,
            shots: file.shots,
            entries: file.entries.into_iter().collect(),
            provenance: file.provenance,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Ok(Self::from_json_str(&text)?)
    }

    fn check_shape(&self, s: &CrosstalkSignature) -> Result<(), PassiveError> {
        if s.listening_qubits != self.listening_qubits || s.shots != self.shots {
            Err(PassiveError::ShapeMismatch)
        } else {
            Ok(())
        }
    }
}

fn mse_slices(a: &[u64], b: &[u64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    sum / a.len() as f64
}

fn mse_indexed(a: &[u64], b: &[u64], idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 0.0;
    }
    let sum: f64 = idx
        .iter()
        .map(|&i| {
            let d = a[i] as f64 - b[i] as f64;
            d * d
        })
        .sum();
    sum / idx.len() as f64
}

pub fn mse(a: &CrosstalkSignature, b: &CrosstalkSignature) -> Result<f64, PassiveError> {
    if a.listening_qubits != b.listening_qubits || a.shots != b.shots {
        return Err(PassiveError::ShapeMismatch);
    }
    Ok(mse_slices(&a.ones_counts, &b.ones_counts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionResult {
    /// Ascending by MSE; ties keep dataset order.
    pub ranked_labels: Vec<String>,
    /// MSE of each entry of `ranked_labels`.
    pub mse_values: Vec<f64>,
    pub predicted: String,
    pub true_rank: Option<usize>,
    pub acc1: Option<f64>,
    pub confidence: f64,
}

/// `(MSE_second - MSE_best) / max MSE`, clamped to `[0, 1]`.
pub fn confidence(sorted_mse: &[f64]) -> f64 {
    let Some(&max) = sorted_mse.last() else {
        return 0.0;
    };
    if sorted_mse.len() < 2 || max <= 0.0 {
        return 0.0;
    }
    ((sorted_mse[1] - sorted_mse[0]) / max).clamp(0.0, 1.0)
}

/// Rank-based accuracy `(n - i) / n`.
pub fn acc1(n: usize, true_rank: usize) -> f64 {
    (n - true_rank) as f64 / n as f64
}

fn rank(mses: Vec<f64>) -> Vec<(usize, f64)> {
    let mut order: Vec<(usize, f64)> = mses.into_iter().enumerate().collect();
    order.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    order
}

fn predict_ranked(
    dataset: &SignatureDataset,
    order: Vec<(usize, f64)>,
    true_label: Option<&str>,
) -> Result<PredictionResult, PassiveError> {
    let true_idx = match true_label {
        Some(l) => Some(
            dataset
                .entries
                .iter()
                .position(|(x, _)| x == l)
                .ok_or_else(|| PassiveError::UnknownTrueLabel(l.to_string()))?,
        ),
        None => None,
    };
    let true_rank = true_idx.map(|t| order.iter().position(|&(i, _)| i == t).unwrap());
    let mse_values: Vec<f64> = order.iter().map(|&(_, m)| m).collect();
    let ranked_labels: Vec<String> = order
        .iter()
        .map(|&(i, _)| dataset.entries[i].0.clone())
        .collect();
    Ok(PredictionResult {
        predicted: ranked_labels[0].clone(),
        acc1: true_rank.map(|r| acc1(order.len(), r)),
        confidence: confidence(&mse_values),
        true_rank,
        ranked_labels,
        mse_values,
    })
}

pub fn predict(
    dataset: &SignatureDataset,
    observed: &CrosstalkSignature,
    true_label: Option<&str>,
) -> Result<PredictionResult, PassiveError> {
    dataset.check_shape(observed)?;
    if dataset.is_empty() {
        return Err(PassiveError::DatasetTooSmall);
    }
    let mses = dataset
        .entries
        .iter()
        .map(|(_, c)| mse_slices(&observed.ones_counts, c))
        .collect();
    predict_ranked(dataset, rank(mses), true_label)
}

/// Across-label population variance of each listening qubit's count,
/// highest first, ties by ascending qubit index.
pub fn rank_qubits(dataset: &SignatureDataset) -> Result<Vec<(usize, f64)>, PassiveError> {
    if dataset.len() < 2 {
        return Err(PassiveError::DatasetTooSmall);
    }
    let n = dataset.len() as f64;
    let mut scores: Vec<(usize, f64)> = dataset
        .listening_qubits
        .iter()
        .enumerate()
        .map(|(j, &q)| {
            let mean = dataset.entries.iter().map(|(_, c)| c[j] as f64).sum::<f64>() / n;
            let var = dataset
                .entries
                .iter()
                .map(|(_, c)| (c[j] as f64 - mean).powi(2))
                .sum::<f64>()
                / n;
            (q, var)
        })
        .collect();
    scores.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(scores)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SelectionStrategy {
    Optimal,
    Default,
    NonOptimal,
}

impl SelectionStrategy {
    pub const ALL: [SelectionStrategy; 3] = [
        SelectionStrategy::Optimal,
        SelectionStrategy::Default,
        SelectionStrategy::NonOptimal,
    ];
}

impl fmt::Display for SelectionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionStrategy::Optimal => "optimal",
            SelectionStrategy::Default => "default",
            SelectionStrategy::NonOptimal => "non-optimal",
        })
    }
}

impl FromStr for SelectionStrategy {
    type Err = PassiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "optimal" => Ok(SelectionStrategy::Optimal),
            "default" => Ok(SelectionStrategy::Default),
            "non-optimal" | "nonoptimal" | "non_optimal" => Ok(SelectionStrategy::NonOptimal),
            _ => Err(PassiveError::UnknownStrategy(s.to_string())),
        }
    }
}

pub fn select_qubits(
    ranked: &[(usize, f64)],
    k: usize,
    strategy: SelectionStrategy,
) -> Result<Vec<usize>, PassiveError> {
    if k == 0 || k > ranked.len() {
        return Err(PassiveError::KOutOfRange {
            k,
            max: ranked.len(),
        });
    }
    Ok(match strategy {
        SelectionStrategy::Optimal => ranked[..k].iter().map(|&(q, _)| q).collect(),
        SelectionStrategy::NonOptimal => ranked.iter().rev().take(k).map(|&(q, _)| q).collect(),
        SelectionStrategy::Default => {
            let mut qs: Vec<usize> = ranked.iter().map(|&(q, _)| q).collect();
            qs.sort_unstable();
            qs.truncate(k);
            qs
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationScheme {
    /// Indices 0, 2, 4, ...
    Even,
    /// `size` positions spread from 0 to the last qubit.
    Spread,
}

pub fn allocate_even_victim(
    device: &DeviceTopology,
    victim_size: usize,
    scheme: AllocationScheme,
) -> Result<Layout, Error> {
    let n = device.num_qubits();
    let overflow = |scheme| PassiveError::SizeOverflow {
        size: victim_size,
        scheme,
        device: n,
    };
    let mapping = match scheme {
        AllocationScheme::Even => {
            if victim_size == 0 || victim_size > n.div_ceil(2) {
                return Err(overflow("even").into());
            }
            (0..victim_size).map(|j| 2 * j).collect()
        }
        AllocationScheme::Spread => {
            if victim_size == 0 || victim_size > n {
                return Err(overflow("spread").into());
            }
            if victim_size == 1 {
                vec![0]
            } else {
                (0..victim_size).map(|j| j * (n - 1) / (victim_size - 1)).collect()
            }
        }
    };
    Ok(Layout::new(mapping)?)
}

/// Places a Simon circuit's registers pairwise into `slots`: input qubit
/// `i` on `slots[2i]`, output qubit `i` on `slots[2i + 1]`.
pub fn interleaved_layout(slots: &[usize], n: usize) -> Result<Layout, Error> {
    if slots.len() < 2 * n {
        return Err(PassiveError::SizeOverflow {
            size: 2 * n,
            scheme: "interleaved",
            device: slots.len(),
        }
        .into());
    }
    let mut mapping = vec![0; 2 * n];
    for i in 0..n {
        mapping[i] = slots[2 * i];
        mapping[n + i] = slots[2 * i + 1];
    }
    Ok(Layout::new(mapping)?)
}

/// Victim for a label, as a circuit and its placement.
pub type VictimBuilder<'a> = dyn Fn(&str) -> Result<(LogicalCircuit, Layout), Error> + Sync + 'a;

/// Runs one victim next to a listening circuit and returns the listener's
/// signature.
#[allow(clippy::too_many_arguments)]
pub fn measure_signature(
    label: &str,
    victim_builder: &VictimBuilder,
    listening_qubits: &[usize],
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    transpile_seed: u64,
    rng_seed: u64,
) -> Result<CrosstalkSignature, Error> {
    let (circuit, layout) = victim_builder(label)?;
    if let Some(&q) = listening_qubits.iter().find(|&&q| layout.contains(q)) {
        return Err(PassiveError::FootprintConflict(q).into());
    }
    let mut listeners = listening_qubits.to_vec();
    listeners.sort_unstable();
    let program = merge_tenants(
        vec![
            (circuit, layout),
            (listening_circuit(listeners.len())?, Layout::new(listeners.clone())?),
        ],
        device,
    )?;
    let ex = execute(&program, model, shots, transpile_seed, rng_seed)?;
    Ok(signature(&ex.records[1], &listeners)?)
}

fn learn_seed(master: u64, label: &str) -> u64 {
    rng::derive_seed(master, &[0x1EA2, rng::label_key(label)])
}

fn eval_seed(master: u64, repetition: usize, label: &str) -> u64 {
    rng::derive_seed(master, &[0xE7A1, repetition as u64, rng::label_key(label)])
}

pub fn learn_signatures(
    labels: &[String],
    victim_builder: &VictimBuilder,
    listening_qubits: &[usize],
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    seeds: Seeds,
) -> Result<SignatureDataset, Error> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(PassiveError::DuplicateLabel(l.clone()).into());
        }
    }
    let sigs = labels
        .par_iter()
        .map(|l| {
            measure_signature(
                l,
                victim_builder,
                listening_qubits,
                device,
                model,
                shots,
                seeds.transpile,
                learn_seed(seeds.master, l),
            )
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let listening = sigs
        .first()
        .map(|s| s.listening_qubits.clone())
        .unwrap_or_default();
    Ok(SignatureDataset {
        listening_qubits: listening,
        shots: shots as u64,
        entries: labels.iter().cloned().zip(sigs.into_iter().map(|s| s.ones_counts)).collect(),
        provenance: Provenance {
            model: *model,
            transpile_seed: seeds.transpile,
            seed: seeds.master,
            note: String::new(),
        },
    })
}

/// Fresh labelled measurements for evaluation, `repetitions` per label,
/// on streams disjoint from the ones [`learn_signatures`] uses.
#[allow(clippy::too_many_arguments)]
pub fn eval_runs(
    labels: &[String],
    victim_builder: &VictimBuilder,
    listening_qubits: &[usize],
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    seeds: Seeds,
    repetitions: usize,
) -> Result<Vec<(String, CrosstalkSignature)>, Error> {
    let jobs: Vec<(usize, &String)> = (0..repetitions)
        .flat_map(|r| labels.iter().map(move |l| (r, l)))
        .collect();
    jobs.par_iter()
        .map(|&(r, l)| {
            let sig = measure_signature(
                l,
                victim_builder,
                listening_qubits,
                device,
                model,
                shots,
                seeds.transpile,
                eval_seed(seeds.master, r, l),
            )?;
            Ok((l.clone(), sig))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    pub mean_acc1: f64,
    pub mean_confidence: f64,
    /// Evaluations whose true label ranked first.
    pub exact: usize,
    pub evaluations: usize,
}

pub fn tradeoff_curve(
    dataset: &SignatureDataset,
    strategy: SelectionStrategy,
    eval_victims: &[(String, CrosstalkSignature)],
    k_range: &[usize],
) -> Result<Vec<CurvePoint>, PassiveError> {
    let ranked = rank_qubits(dataset)?;
    for (_, s) in eval_victims {
        dataset.check_shape(s)?;
    }
    k_range
        .par_iter()
        .map(|&k| {
            let chosen = select_qubits(&ranked, k, strategy)?;
            let idx = positions(&dataset.listening_qubits, &chosen)?;
            let mut acc_sum = 0.0;
            let mut conf_sum = 0.0;
            let mut exact = 0;
            for (label, obs) in eval_victims {
                let mses = dataset
                    .entries
                    .iter()
                    .map(|(_, c)| mse_indexed(&obs.ones_counts, c, &idx))
                    .collect();
                let r = predict_ranked(dataset, rank(mses), Some(label))?;
                acc_sum += r.acc1.unwrap();
                conf_sum += r.confidence;
                exact += usize::from(r.true_rank == Some(0));
            }
            let n = eval_victims.len().max(1) as f64;
            Ok(CurvePoint {
                k,
                mean_acc1: acc_sum / n,
                mean_confidence: conf_sum / n,
                exact,
                evaluations: eval_victims.len(),
            })
        })
        .collect()
}

/// Pairwise MSE between eval observations (rows) and dataset entries
/// (columns) over `qubits`.
pub fn mse_matrix(
    dataset: &SignatureDataset,
    observations: &[(String, CrosstalkSignature)],
    qubits: &[usize],
) -> Result<Vec<Vec<f64>>, PassiveError> {
    let idx = positions(&dataset.listening_qubits, qubits)?;
    observations
        .iter()
        .map(|(_, obs)| {
            dataset.check_shape(obs)?;
            Ok(dataset
                .entries
                .iter()
                .map(|(_, c)| mse_indexed(&obs.ones_counts, c, &idx))
                .collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_heavy_hex;

    fn sig(counts: &[u64]) -> CrosstalkSignature {
        CrosstalkSignature {
            listening_qubits: (0..counts.len()).collect(),
            ones_counts: counts.to_vec(),
            shots: 100,
        }
    }

    fn dataset(entries: &[(&str, &[u64])]) -> SignatureDataset {
        SignatureDataset {
            listening_qubits: (0..entries[0].1.len()).collect(),
            shots: 100,
            entries: entries.iter().map(|(l, c)| (l.to_string(), c.to_vec())).collect(),
            provenance: Provenance {
                model: CrosstalkModel::zero(),
                transpile_seed: 0,
                seed: 0,
                note: String::new(),
            },
        }
    }

    #[test]
    fn mse_arithmetic() {
        assert_eq!(mse(&sig(&[1, 2]), &sig(&[3, 4])).unwrap(), 4.0);
        assert_eq!(mse(&sig(&[5, 6]), &sig(&[5, 6])).unwrap(), 0.0);
        assert_eq!(mse(&sig(&[1]), &sig(&[1, 2])), Err(PassiveError::ShapeMismatch));
    }

    #[test]
    fn self_match() {
        let d = dataset(&[("a", &[0, 10]), ("b", &[10, 0]), ("c", &[5, 5])]);
        let r = predict(&d, &d.get("b").unwrap(), Some("b")).unwrap();
        assert_eq!(r.predicted, "b");
        assert_eq!(r.true_rank, Some(0));
        assert_eq!(r.acc1, Some(1.0));
        assert_eq!(r.mse_values[0], 0.0);
        assert!(matches!(
            predict(&d, &d.get("b").unwrap(), Some("z")),
            Err(PassiveError::UnknownTrueLabel(_))
        ));
    }

    #[test]
    fn rank_sixteen_of_thirty_two() {
        assert_eq!(acc1(32, 16), 0.5);
        assert_eq!(acc1(32, 0), 1.0);
        let entries: Vec<(String, Vec<u64>)> =
            (0..32).map(|i| (i.to_string(), vec![i as u64])).collect();
        let refs: Vec<(&str, &[u64])> = entries.iter().map(|(l, c)| (l.as_str(), c.as_slice())).collect();
        let d = dataset(&refs);
        // Observation 0 ranks label 16 at position 16.
        let r = predict(&d, &sig(&[0]), Some("16")).unwrap();
        assert_eq!(r.true_rank, Some(16));
        assert_eq!(r.acc1, Some(0.5));
    }

    #[test]
    fn confidence_rules() {
        assert_eq!(confidence(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(confidence(&[1.0, 1.0, 4.0]), 0.0);
        assert_eq!(confidence(&[1.0, 3.0, 4.0]), 0.5);
        assert_eq!(confidence(&[2.0]), 0.0);
    }

    #[test]
    fn ties_follow_label_order() {
        let d = dataset(&[("x", &[2]), ("y", &[0]), ("z", &[2])]);
        let r = predict(&d, &sig(&[1]), None).unwrap();
        assert_eq!(r.ranked_labels, vec!["x", "y", "z"]);
    }

    #[test]
    fn ranking_and_selection() {
        let d = dataset(&[("a", &[7, 0, 3, 100]), ("b", &[7, 100, 4, 0])]);
        let ranked = rank_qubits(&d).unwrap();
        assert_eq!(ranked[0].0, 1);
        assert_eq!(ranked[1].0, 3);
        assert_eq!(ranked[3], (0, 0.0));
        assert_eq!(select_qubits(&ranked, 2, SelectionStrategy::Optimal).unwrap(), vec![1, 3]);
        assert_eq!(select_qubits(&ranked, 2, SelectionStrategy::NonOptimal).unwrap(), vec![0, 2]);
        assert_eq!(select_qubits(&ranked, 3, SelectionStrategy::Default).unwrap(), vec![0, 1, 2]);
        assert!(select_qubits(&ranked, 0, SelectionStrategy::Optimal).is_err());
        assert!(select_qubits(&ranked, 5, SelectionStrategy::Optimal).is_err());
        assert_eq!(rank_qubits(&dataset(&[("a", &[1])])), Err(PassiveError::DatasetTooSmall));
    }

    #[test]
    fn allocation_schemes() {
        let dev = build_heavy_hex(127).unwrap();
        let even = allocate_even_victim(&dev, 64, AllocationScheme::Even).unwrap();
        assert_eq!(even.physical(), (0..64).map(|i| 2 * i).collect::<Vec<_>>().as_slice());
        let spread = allocate_even_victim(&dev, 14, AllocationScheme::Spread).unwrap();
        assert_eq!(
            spread.physical(),
            &[0, 9, 19, 29, 38, 48, 58, 67, 77, 87, 96, 106, 116, 126]
        );
        assert_eq!(allocate_even_victim(&dev, 1, AllocationScheme::Spread).unwrap().physical(), &[0]);
        assert!(allocate_even_victim(&dev, 65, AllocationScheme::Even).is_err());
    }

    #[test]
    fn interleaving() {
        let l = interleaved_layout(&[10, 11, 12, 13], 2).unwrap();
        assert_eq!(l.physical(), &[10, 12, 11, 13]);
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("non-optimal".parse::<SelectionStrategy>().unwrap(), SelectionStrategy::NonOptimal);
        assert!("best".parse::<SelectionStrategy>().is_err());
    }

    #[test]
    fn dataset_json_keeps_order() {
        let d = dataset(&[("64", &[1, 2]), ("2", &[3, 4])]);
        let back = SignatureDataset::from_json_str(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.labels().collect::<Vec<_>>(), vec!["64", "2"]);
    }
}
