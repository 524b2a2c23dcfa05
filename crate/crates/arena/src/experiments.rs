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

//! The four reference experiments as library calls. The CLI and the
//! examples are thin wrappers around these.

use serde::Serialize;

use crate::active::{
    execute_active, recon_exhaustive, recon_path_informed, sweep_victim_positions, AttackOption,
    AttackReport, PathInformedRecon, Seeds, Victim,
};
use crate::circuits::{grover_2q, simon, simon_one_to_one, LogicalCircuit};
use crate::noise::CrosstalkModel;
use crate::passive::{
    allocate_even_victim, eval_runs, interleaved_layout, learn_signatures, mse_matrix,
    rank_qubits, select_qubits, tradeoff_curve, AllocationScheme, CrosstalkSignature, CurvePoint,
    SelectionStrategy, SignatureDataset, DEFAULT_EVAL_REPETITIONS,
};
use crate::router::{Layout, SwapPath};
use crate::topology::DeviceTopology;
use crate::Error;

pub const DEFAULT_SHOTS: usize = 4096;
pub const EXP3_MATRIX_KS: [usize; 3] = [63, 11, 4];
pub const EXP4_K_STAR: usize = 22;
pub const EXP4_SHIFT_BITS: usize = 7;

/// Settings shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSettings {
    pub model: CrosstalkModel,
    pub shots: usize,
    pub seeds: Seeds,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            model: CrosstalkModel::calibrated(),
            shots: DEFAULT_SHOTS,
            seeds: Seeds {
                transpile: 0,
                master: 2024,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exp1Params {
    pub victim_marked: String,
    pub victim_qubits: (usize, usize),
    pub fixed_attacker_qubit: usize,
    pub probe_shots: usize,
}

impl Default for Exp1Params {
    fn default() -> Self {
        Exp1Params {
            victim_marked: "11".into(),
            victim_qubits: (63, 64),
            fixed_attacker_qubit: 0,
            probe_shots: crate::active::DEFAULT_PROBE_SHOTS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Exp1Result {
    /// Probe-fidelity options, sorted by deviation.
    pub probes: Vec<AttackOption>,
    /// Every option re-measured at full shots, sorted by deviation.
    pub options: Vec<AttackOption>,
    /// Second qubit, SWAP path and intersection flag, by qubit index.
    pub paths: Vec<(usize, SwapPath, bool)>,
    pub informed: PathInformedRecon,
}

pub fn experiment1(
    device: &DeviceTopology,
    params: &Exp1Params,
    run: &RunSettings,
) -> Result<Exp1Result, Error> {
    let victim = Victim {
        circuit: grover_2q(&params.victim_marked)?,
        layout: Layout::new(vec![params.victim_qubits.0, params.victim_qubits.1])?,
    };
    let fixed = params.fixed_attacker_qubit;
    let probes = recon_exhaustive(&victim, fixed, device, &run.model, params.probe_shots, run.seeds)?;
    let informed =
        recon_path_informed(&victim, fixed, device, &run.model, params.probe_shots, run.seeds)?;

    let mut options = Vec::with_capacity(probes.len());
    let mut paths = Vec::with_capacity(probes.len());
    for p in &probes {
        let r = execute_active(&victim, p.attacker_pair, device, &run.model, run.shots, run.seeds)?;
        paths.push((
            p.attacker_pair.1,
            SwapPath {
                nodes: r.swap_path.clone(),
                seed: run.seeds.transpile,
            },
            r.intersected,
        ));
        options.push(r.option());
    }
    options.sort_by(|a, b| {
        b.deviation_pct
            .total_cmp(&a.deviation_pct)
            .then(a.attacker_pair.cmp(&b.attacker_pair))
    });
    paths.sort_by_key(|(q, _, _)| *q);
    Ok(Exp1Result {
        probes,
        options,
        paths,
        informed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exp2Params {
    pub victim_marked: String,
    pub attacker_pair: (usize, usize),
    pub positions: Vec<(usize, usize)>,
}

impl Default for Exp2Params {
    fn default() -> Self {
        Exp2Params {
            victim_marked: "11".into(),
            attacker_pair: (0, 108),
            positions: (60..70).map(|v| (v, v + 1)).collect(),
        }
    }
}

pub fn experiment2(
    device: &DeviceTopology,
    params: &Exp2Params,
    run: &RunSettings,
) -> Result<Vec<AttackReport>, Error> {
    sweep_victim_positions(
        params.attacker_pair,
        &grover_2q(&params.victim_marked)?,
        &params.positions,
        device,
        &run.model,
        run.shots,
        run.seeds,
    )
}

/// Victim sizes 2, 4, ..., 64.
pub fn exp3_labels() -> Vec<String> {
    (1..=32).map(|n| (2 * n).to_string()).collect()
}

/// Odd qubits 1, 3, ..., 125.
pub fn exp3_listeners() -> Vec<usize> {
    (0..63).map(|i| 2 * i + 1).collect()
}

/// Simon victim of `size` qubits with an all-ones shift, registers
/// interleaved over the even-index envelope.
pub fn exp3_victim(device: &DeviceTopology, size: usize) -> Result<(LogicalCircuit, Layout), Error> {
    if size < 2 || size % 2 == 1 {
        return Err(crate::passive::PassiveError::SizeOverflow {
            size,
            scheme: "even",
            device: device.num_qubits(),
        }
        .into());
    }
    let n = size / 2;
    let envelope = allocate_even_victim(device, size, AllocationScheme::Even)?;
    Ok((simon(&"1".repeat(n))?, interleaved_layout(envelope.physical(), n)?))
}

/// All 7-bit shifts; character `j` is bit `j`, listed in increasing
/// integer value of `sum s_j 2^j`.
pub fn exp4_labels() -> Vec<String> {
    (0..1u32 << EXP4_SHIFT_BITS)
        .map(|v| {
            (0..EXP4_SHIFT_BITS)
                .map(|j| if (v >> j) & 1 == 1 { '1' } else { '0' })
                .collect()
        })
        .collect()
}

pub fn exp4_victim(device: &DeviceTopology, shift: &str) -> Result<(LogicalCircuit, Layout), Error> {
    let n = shift.len();
    let envelope = allocate_even_victim(device, 2 * n, AllocationScheme::Spread)?;
    let circuit = if shift.chars().all(|c| c == '0') {
        simon_one_to_one(n)?
    } else {
        simon(shift)?
    };
    Ok((circuit, interleaved_layout(envelope.physical(), n)?))
}

pub fn exp4_listeners(device: &DeviceTopology) -> Result<Vec<usize>, Error> {
    let envelope = allocate_even_victim(device, 2 * EXP4_SHIFT_BITS, AllocationScheme::Spread)?;
    Ok((0..device.num_qubits())
        .filter(|q| !envelope.contains(*q))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassiveParams {
    pub k_grid: Vec<usize>,
    pub matrix_ks: Vec<usize>,
    pub matrix_strategies: Vec<SelectionStrategy>,
    pub repetitions: usize,
}

impl PassiveParams {
    pub fn exp3() -> Self {
        PassiveParams {
            k_grid: vec![1, 2, 3, 4, 5, 6, 7, 8, 11, 16, 24, 32, 48, 63],
            matrix_ks: EXP3_MATRIX_KS.to_vec(),
            matrix_strategies: vec![SelectionStrategy::Optimal],
            repetitions: DEFAULT_EVAL_REPETITIONS,
        }
    }

    pub fn exp4() -> Self {
        PassiveParams {
            k_grid: vec![1, 2, 4, 8, 11, 16, 22, 32, 48, 64, 96, 113],
            matrix_ks: vec![EXP4_K_STAR],
            matrix_strategies: SelectionStrategy::ALL.to_vec(),
            repetitions: DEFAULT_EVAL_REPETITIONS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MseMatrix {
    pub strategy: SelectionStrategy,
    pub k: usize,
    pub qubits: Vec<usize>,
    /// Row: first-repetition observation of a label. Column: dataset label.
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct PassiveResult {
    pub dataset: SignatureDataset,
    pub evals: Vec<(String, CrosstalkSignature)>,
    pub curves: Vec<(SelectionStrategy, Vec<CurvePoint>)>,
    pub matrices: Vec<MseMatrix>,
}

impl PassiveResult {
    pub fn curve(&self, strategy: SelectionStrategy) -> &[CurvePoint] {
        &self
            .curves
            .iter()
            .find(|(s, _)| *s == strategy)
            .expect("all strategies evaluated")
            .1
    }

    pub fn point(&self, strategy: SelectionStrategy, k: usize) -> Option<CurvePoint> {
        self.curve(strategy).iter().find(|p| p.k == k).copied()
    }
}

fn run_passive(
    labels: &[String],
    builder: &crate::passive::VictimBuilder,
    listeners: &[usize],
    device: &DeviceTopology,
    params: &PassiveParams,
    run: &RunSettings,
) -> Result<PassiveResult, Error> {
    let dataset = learn_signatures(labels, builder, listeners, device, &run.model, run.shots, run.seeds)?;
    let evals = eval_runs(
        labels,
        builder,
        listeners,
        device,
        &run.model,
        run.shots,
        run.seeds,
        params.repetitions,
    )?;
    let mut curves = Vec::new();
    for s in SelectionStrategy::ALL {
        curves.push((s, tradeoff_curve(&dataset, s, &evals, &params.k_grid)?));
    }
    let ranked = rank_qubits(&dataset)?;
    let first_rep = &evals[..labels.len().min(evals.len())];
    let mut matrices = Vec::new();
    for &strategy in &params.matrix_strategies {
        for &k in &params.matrix_ks {
            let qubits = select_qubits(&ranked, k, strategy)?;
            matrices.push(MseMatrix {
                strategy,
                k,
                values: mse_matrix(&dataset, first_rep, &qubits)?,
                qubits,
            });
        }
    }
    Ok(PassiveResult {
        dataset,
        evals,
        curves,
        matrices,
    })
}

pub fn experiment3(
    device: &DeviceTopology,
    params: &PassiveParams,
    run: &RunSettings,
) -> Result<PassiveResult, Error> {
    let builder = |label: &str| {
        let size: usize = label
            .parse()
            .map_err(|_| crate::passive::PassiveError::Parse(format!("size label {label:?}")))?;
        exp3_victim(device, size)
    };
    run_passive(&exp3_labels(), &builder, &exp3_listeners(), device, params, run)
}

pub fn experiment4(
    device: &DeviceTopology,
    params: &PassiveParams,
    run: &RunSettings,
) -> Result<PassiveResult, Error> {
    let builder = |label: &str| exp4_victim(device, label);
    run_passive(&exp4_labels(), &builder, &exp4_listeners(device)?, device, params, run)
}
