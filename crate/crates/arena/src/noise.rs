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

//! Crosstalk noise engine: per-qubit flip probabilities from routed gate
//! activity, and seeded shot sampling.
//!
//! A measured qubit `q` of one tenant collects, from every two-qubit gate
//! `g` routed for another tenant:
//!
//! * `gamma_path` per physical gate of `g`'s expansion when `q` lies on
//!   `g`'s SWAP path, or
//! * one `gamma_adjacent * decay^(d-1)` term otherwise, `d >= 1` being the
//!   hop distance from `q` to the nearer end of `g`'s meeting edge.
//!
//! Terms combine by independent-OR and the result is capped at `cap`.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{Family, LogicalCircuit, MultiTenantProgram};
use crate::rng;
use crate::router::{transpile, RoutedCircuit};
use crate::statevector::{output_distribution, MAX_DENSE_QUBITS};

/// Shots per independently seeded sampling chunk.
pub const SHOT_CHUNK: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("noise model field {field} = {value} is out of range")]
    InvalidModel { field: &'static str, value: f64 },
    #[error("routing does not match the program: {0}")]
    InconsistentRouting(String),
    #[error("tenant {tenant} has {qubits} qubits; dense simulation stops at {max}")]
    TooManyQubits {
        tenant: usize,
        qubits: usize,
        max: usize,
    },
    #[error("expected output has {expected} bits, counts have {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("malformed noise profile: {0}")]
    Parse(String),
    #[error("cannot read noise profile: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosstalkModel {
    pub gamma_path: f64,
    pub gamma_adjacent: f64,
    pub decay: f64,
    pub cap: f64,
}

impl Default for CrosstalkModel {
    fn default() -> Self {
        Self::calibrated()
    }
}

impl CrosstalkModel {
    /// Shipped profile, calibrated to the attack bands of the reference
    /// experiments rather than to hardware.
    pub const fn calibrated() -> Self {
        CrosstalkModel {
            gamma_path: 0.02,
            gamma_adjacent: 0.12,
            decay: 0.85,
            cap: 1.0,
        }
    }

    /// No crosstalk at all; only calibration noise remains.
    pub const fn zero() -> Self {
        CrosstalkModel {
            gamma_path: 0.0,
            gamma_adjacent: 0.0,
            decay: 1.0,
            cap: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        let unit = |field, value: f64| {
            if (0.0..=1.0).contains(&value) {
                Ok(())
            } else {
                Err(NoiseError::InvalidModel { field, value })
            }
        };
        unit("gamma_path", self.gamma_path)?;
        unit("gamma_adjacent", self.gamma_adjacent)?;
        unit("cap", self.cap)?;
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(NoiseError::InvalidModel {
                field: "decay",
                value: self.decay,
            });
        }
        Ok(())
    }

    /// Crosstalk from one foreign gate whose path covers `path_len` nodes,
    /// on a qubit that is on the path or `d` hops from its meeting edge.
    pub fn gate_term(&self, on_path: bool, path_len: usize, d: usize) -> f64 {
        if on_path {
            1.0 - (1.0 - self.gamma_path).powi((2 * path_len - 3) as i32)
        } else {
            self.gamma_adjacent * self.decay.powi(d as i32 - 1)
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, NoiseError> {
        let m: CrosstalkModel =
            serde_json::from_str(text).map_err(|e| NoiseError::Parse(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }
}

pub fn load_noise_profile(path: impl AsRef<Path>) -> Result<CrosstalkModel, NoiseError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| NoiseError::Io(format!("{}: {e}", path.as_ref().display())))?;
    CrosstalkModel::from_json_str(&text)
}

/// Flip probability per physical qubit. Qubits nobody measures stay 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipProbMap {
    pub baseline: Vec<f64>,
    pub crosstalk: Vec<f64>,
}

impl FlipProbMap {
    pub fn total(&self, q: usize) -> f64 {
        1.0 - (1.0 - self.baseline[q]) * (1.0 - self.crosstalk[q])
    }
}

fn check_routing(program: &MultiTenantProgram, routed: &[RoutedCircuit]) -> Result<(), NoiseError> {
    if routed.len() != program.tenants().len() {
        return Err(NoiseError::InconsistentRouting(format!(
            "{} routed circuits for {} tenants",
            routed.len(),
            program.tenants().len()
        )));
    }
    for (t, (tenant, r)) in program.tenants().iter().zip(routed).enumerate() {
        if r.layout != tenant.layout {
            return Err(NoiseError::InconsistentRouting(format!(
                "tenant {t} was routed with a different layout"
            )));
        }
        let two_q = tenant
            .circuit
            .gates()
            .iter()
            .filter(|g| g.two_qubit().is_some())
            .count();
        if two_q != r.swap_paths.len() {
            return Err(NoiseError::InconsistentRouting(format!(
                "tenant {t} has {two_q} two-qubit gates but {} swap paths",
                r.swap_paths.len()
            )));
        }
    }
    Ok(())
}

pub fn accumulate_flip_probs(
    program: &MultiTenantProgram,
    routed: &[RoutedCircuit],
    model: &CrosstalkModel,
) -> Result<FlipProbMap, NoiseError> {
    model.validate()?;
    check_routing(program, routed)?;
    let device = program.device();
    let n = device.num_qubits();
    let mut baseline = vec![0.0; n];
    let mut crosstalk = vec![0.0; n];

    for (t, tenant) in program.tenants().iter().enumerate() {
        let measured = routed[t].measured_physical(&tenant.circuit);
        let mut is_measured = vec![false; n];
        for &q in &measured {
            is_measured[q] = true;
        }

        let mut own_survival = vec![1.0; n];
        for g in &routed[t].physical_gates {
            if let Some((a, b)) = g.two_qubit() {
                let err = device.two_qubit_gate_error(a, b).ok_or_else(|| {
                    NoiseError::InconsistentRouting(format!("gate on non-edge ({a},{b})"))
                })?;
                for q in [a, b] {
                    if is_measured[q] {
                        own_survival[q] *= 1.0 - err;
                    }
                }
            }
        }

        let mut foreign_survival = vec![1.0; n];
        for (u, other) in routed.iter().enumerate() {
            if u == t {
                continue;
            }
            for path in &other.swap_paths {
                let (ea, eb) = path.meeting_edge();
                let da = device.distances_to(ea).expect("edge is on device");
                let db = device.distances_to(eb).expect("edge is on device");
                for &q in &measured {
                    let on_path = path.contains(q);
                    let d = da[q].min(db[q]) as usize;
                    foreign_survival[q] *= 1.0 - model.gate_term(on_path, path.nodes.len(), d);
                }
            }
        }

        for &q in &measured {
            baseline[q] = 1.0 - (1.0 - device.baseline_flip(q)) * own_survival[q];
            crosstalk[q] = (1.0 - foreign_survival[q]).clamp(0.0, model.cap);
        }
    }
    Ok(FlipProbMap {
        baseline,
        crosstalk,
    })
}

/// Per-shot measured bits of one tenant. Bit `j` of a shot is the tenant's
/// `j`-th measured qubit, which sits on physical qubit `qubits[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecords {
    pub qubits: Vec<usize>,
    shots: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ShotRecords {
    pub fn from_shots(qubits: Vec<usize>, shots: &[Vec<bool>]) -> Self {
        let words = qubits.len().div_ceil(64).max(1);
        let mut bits = vec![0u64; words * shots.len()];
        for (s, shot) in shots.iter().enumerate() {
            assert_eq!(shot.len(), qubits.len(), "shot width mismatch");
            for (j, &b) in shot.iter().enumerate() {
                if b {
                    bits[s * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        ShotRecords {
            qubits,
            shots: shots.len(),
            words,
            bits,
        }
    }

    pub fn shots(&self) -> usize {
        self.shots
    }

    pub fn bit(&self, shot: usize, j: usize) -> bool {
        (self.bits[shot * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn ones(&self, j: usize) -> u64 {
        (0..self.shots).filter(|&s| self.bit(s, j)).count() as u64
    }

    pub fn ones_per_qubit(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.qubits.len()];
        for s in 0..self.shots {
            let row = &self.bits[s * self.words..(s + 1) * self.words];
            for (w, &word) in row.iter().enumerate() {
                let mut x = word;
                while x != 0 {
                    out[w * 64 + x.trailing_zeros() as usize] += 1;
                    x &= x - 1;
                }
            }
        }
        out
    }

    pub fn bitstring(&self, shot: usize) -> String {
        (0..self.qubits.len())
            .map(|j| if self.bit(shot, j) { '1' } else { '0' })
            .collect()
    }

    pub fn counts(&self) -> CountsMap {
        let mut counts = BTreeMap::new();
        for s in 0..self.shots {
            *counts.entry(self.bitstring(s)).or_insert(0) += 1;
        }
        CountsMap {
            counts,
            total: self.shots as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsMap {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl CountsMap {
    pub fn width(&self) -> Option<usize> {
        self.counts.keys().next().map(|k| k.len())
    }
}

pub fn output_accuracy(counts: &CountsMap, expected: &str) -> Result<f64, NoiseError> {
    if let Some(w) = counts.width() {
        if w != expected.len() {
            return Err(NoiseError::LengthMismatch {
                expected: expected.len(),
                actual: w,
            });
        }
    }
    if counts.total == 0 {
        return Ok(0.0);
    }
    Ok(counts.counts.get(expected).copied().unwrap_or(0) as f64 / counts.total as f64)
}

enum Sampler {
    Zeros,
    Simon { shift: Vec<u64>, pivot: usize, n: usize },
    Table { cdf: Vec<f64> },
}

impl Sampler {
    fn for_circuit(tenant: usize, circuit: &LogicalCircuit) -> Result<Self, NoiseError> {
        if circuit.num_qubits() <= MAX_DENSE_QUBITS {
            let probs = output_distribution(circuit).expect("within dense limit");
            // Round-off can leave ~1e-33 mass on impossible outcomes.
            let mut acc = 0.0;
            let mut cdf: Vec<f64> = probs
                .iter()
                .map(|&p| {
                    acc += if p < 1e-12 { 0.0 } else { p };
                    acc
                })
                .collect();
            for c in &mut cdf {
                *c /= acc;
            }
            return Ok(Sampler::Table { cdf });
        }
        match circuit.family() {
            Family::Listening => Ok(Sampler::Zeros),
            Family::Simon { shift } => {
                let n = shift.len();
                let mut words = vec![0u64; n.div_ceil(64)];
                for (j, &b) in shift.iter().enumerate() {
                    if b {
                        words[j / 64] |= 1 << (j % 64);
                    }
                }
                let pivot = shift.iter().position(|&b| b).unwrap_or(usize::MAX);
                Ok(Sampler::Simon {
                    shift: words,
                    pivot,
                    n,
                })
            }
            Family::Generic => Err(NoiseError::TooManyQubits {
                tenant,
                qubits: circuit.num_qubits(),
                max: MAX_DENSE_QUBITS,
            }),
        }
    }

    /// Writes one noiseless outcome into `out` (zeroed by the caller).
    fn draw(&self, rng: &mut ChaCha8Rng, out: &mut [u64]) {
        match self {
            Sampler::Zeros => {}
            Sampler::Table { cdf } => {
                let u: f64 = rng.gen();
                let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                out[0] = k as u64;
            }
            Sampler::Simon { shift, pivot, n } => {
                for (w, slot) in out.iter_mut().enumerate().take(shift.len()) {
                    let width = (*n - 64 * w).min(64);
                    let mask = if width == 64 { u64::MAX } else { (1 << width) - 1 };
                    *slot = rng.gen::<u64>() & mask;
                }
                if *pivot != usize::MAX {
                    let parity = out
                        .iter()
                        .zip(shift)
                        .map(|(z, s)| (z & s).count_ones())
                        .sum::<u32>();
                    if parity % 2 == 1 {
                        out[pivot / 64] ^= 1 << (pivot % 64);
                    }
                }
            }
        }
    }
}

/// Samples every tenant. Shots are cut into [`SHOT_CHUNK`]-sized chunks,
/// each with its own stream keyed by `(rng_seed, tenant, chunk)`, so the
/// result is the same however the chunks are spread over threads.
pub fn sample_shots(
    program: &MultiTenantProgram,
    flipmap: &FlipProbMap,
    shots: usize,
    rng_seed: u64,
) -> Result<Vec<ShotRecords>, NoiseError> {
    if shots == 0 {
        return Err(NoiseError::ZeroShots);
    }
    let mut out = Vec::with_capacity(program.tenants().len());
    for (t, tenant) in program.tenants().iter().enumerate() {
        let sampler = Sampler::for_circuit(t, &tenant.circuit)?;
        let qubits: Vec<usize> = tenant
            .circuit
            .measured_qubits()
            .into_iter()
            .map(|q| tenant.layout.physical()[q])
            .collect();
        let probs: Vec<f64> = qubits.iter().map(|&q| flipmap.total(q)).collect();
        let words = qubits.len().div_ceil(64).max(1);
        let chunks = shots.div_ceil(SHOT_CHUNK);

        let parts: Vec<Vec<u64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = SHOT_CHUNK.min(shots - c * SHOT_CHUNK);
                let mut rng = rng::stream(rng_seed, &[t as u64, c as u64]);
                let mut bits = vec![0u64; words * len];
                for row in bits.chunks_mut(words) {
                    sampler.draw(&mut rng, row);
                    for (j, &p) in probs.iter().enumerate() {
                        if p > 0.0 && rng.gen::<f64>() < p {
                            row[j / 64] ^= 1 << (j % 64);
                        }
                    }
                }
                bits
            })
            .collect();

        out.push(ShotRecords {
            qubits,
            shots,
            words,
            bits: parts.concat(),
        });
    }
    Ok(out)
}

/// Route, accumulate and sample in one go.
#[derive(Debug, Clone)]
pub struct Execution {
    pub routed: Vec<RoutedCircuit>,
    pub flips: FlipProbMap,
    pub records: Vec<ShotRecords>,
}

pub fn route_all(
    program: &MultiTenantProgram,
    transpile_seed: u64,
) -> Result<Vec<RoutedCircuit>, crate::Error> {
    program
        .tenants()
        .iter()
        .map(|t| Ok(transpile(&t.circuit, program.device(), &t.layout, transpile_seed)?))
        .collect()
}

pub fn execute(
    program: &MultiTenantProgram,
    model: &CrosstalkModel,
    shots: usize,
    transpile_seed: u64,
    rng_seed: u64,
) -> Result<Execution, crate::Error> {
    let routed = route_all(program, transpile_seed)?;
    let flips = accumulate_flip_probs(program, &routed, model)?;
    let records = sample_shots(program, &flips, shots, rng_seed)?;
    Ok(Execution {
        routed,
        flips,
        records,
    })
}
