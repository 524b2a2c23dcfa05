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

//! Active SWAP attack: severity bands, reconnaissance, attack execution and
//! the fixed-attacker victim sweep.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{attacker_cnot, merge_tenants, LogicalCircuit};
use crate::noise::{execute, output_accuracy, CrosstalkModel};
use crate::rng;
use crate::router::{path_intersects, swap_path, Layout, SwapPath};
use crate::topology::DeviceTopology;
use crate::Error;

pub const DEFAULT_PROBE_SHOTS: usize = 1024;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ActiveError {
    #[error("deviation {0} is outside [0, 100]")]
    OutOfRange(f64),
    #[error("attacker qubit {0} overlaps the victim footprint")]
    FootprintConflict(usize),
    #[error("victim position ({0},{1}) is not a device edge")]
    NotAnEdge(usize, usize),
    #[error("victim circuit has no expected output to score against")]
    NoExpectedOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SeverityClass {
    NoAttack,
    Minor,
    Moderate,
    Severe,
    Critical,
}

impl fmt::Display for SeverityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeverityClass::NoAttack => "No Attack",
            SeverityClass::Minor => "Minor",
            SeverityClass::Moderate => "Moderate",
            SeverityClass::Severe => "Severe",
            SeverityClass::Critical => "Critical",
        })
    }
}

/// Half-open 20-point bands; 100 itself is Critical.
pub fn classify_severity(deviation_pct: f64) -> Result<SeverityClass, ActiveError> {
    if !(0.0..=100.0).contains(&deviation_pct) {
        return Err(ActiveError::OutOfRange(deviation_pct));
    }
    Ok(match deviation_pct {
        d if d < 20.0 => SeverityClass::NoAttack,
        d if d < 40.0 => SeverityClass::Minor,
        d if d < 60.0 => SeverityClass::Moderate,
        d if d < 80.0 => SeverityClass::Severe,
        _ => SeverityClass::Critical,
    })
}

pub fn deviation_pct(acc0: f64) -> f64 {
    (1.0 - acc0) * 100.0
}

/// Seeds shared by a run: routing tie-break seed and the master sampling
/// seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub transpile: u64,
    pub master: u64,
}

impl Seeds {
    /// Sampling seed for one attacker pair, independent of probe order.
    pub fn for_pair(&self, pair: (usize, usize)) -> u64 {
        rng::derive_seed(self.master, &[0xA77A, pair.0 as u64, pair.1 as u64])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackOption {
    pub attacker_pair: (usize, usize),
    pub acc0: f64,
    pub deviation_pct: f64,
    pub severity: SeverityClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub victim_layout: Vec<usize>,
    pub attacker_layout: Vec<usize>,
    pub swap_path: Vec<usize>,
    pub acc0: f64,
    pub deviation_pct: f64,
    pub severity: SeverityClass,
    pub intersected: bool,
    pub shots: usize,
    pub transpile_seed: u64,
    pub rng_seed: u64,
}

impl AttackReport {
    pub fn option(&self) -> AttackOption {
        AttackOption {
            attacker_pair: (self.attacker_layout[0], self.attacker_layout[1]),
            acc0: self.acc0,
            deviation_pct: self.deviation_pct,
            severity: self.severity,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Victim {
    pub circuit: LogicalCircuit,
    pub layout: Layout,
}

fn check_disjoint(victim: &Victim, qubits: &[usize]) -> Result<(), ActiveError> {
    match qubits.iter().find(|&&q| victim.layout.contains(q)) {
        Some(&q) => Err(ActiveError::FootprintConflict(q)),
        None => Ok(()),
    }
}

/// Runs victim and attacker CNOT together with sampling seed `rng_seed`.
pub fn execute_active_seeded(
    victim: &Victim,
    attacker_pair: (usize, usize),
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    transpile_seed: u64,
    rng_seed: u64,
) -> Result<AttackReport, Error> {
    let expected = victim
        .circuit
        .expected_output()
        .ok_or(ActiveError::NoExpectedOutput)?
        .to_string();
    check_disjoint(victim, &[attacker_pair.0, attacker_pair.1])?;
    let attacker_layout = Layout::new(vec![attacker_pair.0, attacker_pair.1])?;
    let program = merge_tenants(
        vec![
            (victim.circuit.clone(), victim.layout.clone()),
            (attacker_cnot(), attacker_layout),
        ],
        device,
    )?;
    let ex = execute(&program, model, shots, transpile_seed, rng_seed)?;
    let path = ex.routed[1].swap_paths[0].clone();
    let acc0 = output_accuracy(&ex.records[0].counts(), &expected)?;
    let dev = deviation_pct(acc0);
    Ok(AttackReport {
        victim_layout: victim.layout.physical().to_vec(),
        attacker_layout: vec![attacker_pair.0, attacker_pair.1],
        intersected: path_intersects(&path, victim.layout.physical()),
        swap_path: path.nodes,
        acc0,
        deviation_pct: dev,
        severity: classify_severity(dev.clamp(0.0, 100.0))?,
        shots,
        transpile_seed,
        rng_seed,
    })
}

/// Attack with the pair's derived sampling seed (see [`Seeds::for_pair`]).
pub fn execute_active(
    victim: &Victim,
    attacker_pair: (usize, usize),
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    seeds: Seeds,
) -> Result<AttackReport, Error> {
    execute_active_seeded(
        victim,
        attacker_pair,
        device,
        model,
        shots,
        seeds.transpile,
        seeds.for_pair(attacker_pair),
    )
}

fn candidates(victim: &Victim, fixed: usize, device: &DeviceTopology) -> Result<Vec<usize>, Error> {
    device.check_index(fixed)?;
    check_disjoint(victim, &[fixed])?;
    Ok((0..device.num_qubits())
        .filter(|&q| q != fixed && !victim.layout.contains(q))
        .collect())
}

fn sort_options(options: &mut [AttackOption]) {
    options.sort_by(|a, b| {
        b.deviation_pct
            .total_cmp(&a.deviation_pct)
            .then(a.attacker_pair.cmp(&b.attacker_pair))
    });
}

fn probe_all(
    victim: &Victim,
    fixed: usize,
    seconds: &[usize],
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    seeds: Seeds,
) -> Result<Vec<AttackOption>, Error> {
    let mut options = seconds
        .par_iter()
        .map(|&q| Ok(execute_active(victim, (fixed, q), device, model, shots, seeds)?.option()))
        .collect::<Result<Vec<_>, Error>>()?;
    sort_options(&mut options);
    Ok(options)
}

/// Scenario 1: probe every free second qubit next to `fixed`.
pub fn recon_exhaustive(
    victim: &Victim,
    fixed_attacker_qubit: usize,
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    seeds: Seeds,
) -> Result<Vec<AttackOption>, Error> {
    let seconds = candidates(victim, fixed_attacker_qubit, device)?;
    probe_all(victim, fixed_attacker_qubit, &seconds, device, model, shots, seeds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathInformedRecon {
    pub options: Vec<AttackOption>,
    /// Pairs actually simulated.
    pub searched: usize,
    /// Pairs an exhaustive search would simulate.
    pub candidates: usize,
}

/// Scenario 2: the attacker knows SWAP paths, so only pairs whose path
/// crosses the victim are simulated.
pub fn recon_path_informed(
    victim: &Victim,
    fixed_attacker_qubit: usize,
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    seeds: Seeds,
) -> Result<PathInformedRecon, Error> {
    let all = candidates(victim, fixed_attacker_qubit, device)?;
    let mut crossing = Vec::new();
    for &q in &all {
        let path: SwapPath = swap_path(device, fixed_attacker_qubit, q, seeds.transpile)?;
        if path_intersects(&path, victim.layout.physical()) {
            crossing.push(q);
        }
    }
    let options = probe_all(victim, fixed_attacker_qubit, &crossing, device, model, shots, seeds)?;
    Ok(PathInformedRecon {
        options,
        searched: crossing.len(),
        candidates: all.len(),
    })
}

/// Moves a 2-qubit victim over `positions` while the attacker stays put.
pub fn sweep_victim_positions(
    attacker_pair: (usize, usize),
    victim_circuit: &LogicalCircuit,
    positions: &[(usize, usize)],
    device: &DeviceTopology,
    model: &CrosstalkModel,
    shots: usize,
    seeds: Seeds,
) -> Result<Vec<AttackReport>, Error> {
    let mut victims = Vec::with_capacity(positions.len());
    for &(a, b) in positions {
        device.check_index(a)?;
        device.check_index(b)?;
        if !device.has_edge(a, b) {
            return Err(ActiveError::NotAnEdge(a, b).into());
        }
        let victim = Victim {
            circuit: victim_circuit.clone(),
            layout: Layout::new(vec![a, b])?,
        };
        check_disjoint(&victim, &[attacker_pair.0, attacker_pair.1])?;
        victims.push(victim);
    }
    victims
        .par_iter()
        .map(|v| {
            let p = v.layout.physical();
            let seed = rng::derive_seed(seeds.master, &[0x5EE9, p[0] as u64, p[1] as u64]);
            execute_active_seeded(v, attacker_pair, device, model, shots, seeds.transpile, seed)
        })
        .collect()
}
