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

//! Seeded shortest-path SWAP router.
//!
//! A two-qubit gate on non-adjacent qubits walks its first operand along the
//! SWAP path until it sits next to the second operand, runs the gate on that
//! meeting edge, then walks back so the layout is unchanged afterwards.

use rand::Rng;
use thiserror::Error;

use crate::circuits::{Gate, LogicalCircuit};
use crate::rng;
use crate::topology::{DeviceTopology, TopologyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RouteError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("source and destination are both qubit {0}")]
    SameQubit(usize),
    #[error("layout maps two logical qubits to physical qubit {0}")]
    NotInjective(usize),
    #[error("layout covers {layout} logical qubits, circuit needs {needed}")]
    LayoutIncomplete { layout: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    mapping: Vec<usize>,
}

impl Layout {
    /// `mapping[i]` is the physical qubit of logical qubit `i`.
    pub fn new(mapping: Vec<usize>) -> Result<Self, RouteError> {
        let mut seen = mapping.clone();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(RouteError::NotInjective(w[0]));
        }
        Ok(Layout { mapping })
    }

    pub fn physical(&self) -> &[usize] {
        &self.mapping
    }

    pub fn get(&self, logical: usize) -> Option<usize> {
        self.mapping.get(logical).copied()
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn contains(&self, physical: usize) -> bool {
        self.mapping.contains(&physical)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapPath {
    pub nodes: Vec<usize>,
    pub seed: u64,
}

impl SwapPath {
    /// The edge the routed gate finally acts on.
    pub fn meeting_edge(&self) -> (usize, usize) {
        let n = self.nodes.len();
        (self.nodes[n - 2], self.nodes[n - 1])
    }

    /// Physical two-qubit gates emitted for one routed gate: SWAPs in, the
    /// gate itself, SWAPs out.
    pub fn physical_gate_count(&self) -> usize {
        2 * self.nodes.len() - 3
    }

    pub fn contains(&self, q: usize) -> bool {
        self.nodes.contains(&q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    pub physical_gates: Vec<Gate>,
    /// One entry per logical two-qubit gate, in gate order.
    pub swap_paths: Vec<SwapPath>,
    pub layout: Layout,
    /// Layout after the last gate. Restore semantics keep it equal to
    /// `layout`; it is tracked independently as a check.
    pub final_layout: Layout,
}

impl RoutedCircuit {
    /// Physical qubits measured, in the circuit's outcome-bit order.
    pub fn measured_physical(&self, circuit: &LogicalCircuit) -> Vec<usize> {
        circuit
            .measured_qubits()
            .into_iter()
            .map(|q| self.layout.physical()[q])
            .collect()
    }
}

pub fn swap_path(
    topology: &DeviceTopology,
    src: usize,
    dst: usize,
    seed: u64,
) -> Result<SwapPath, RouteError> {
    topology.check_index(src)?;
    topology.check_index(dst)?;
    if src == dst {
        return Err(RouteError::SameQubit(src));
    }
    let to_dst = topology.distances_to(dst)?;
    let mut tie_rng = (seed != 0).then(|| rng::stream(seed, &[src as u64, dst as u64]));
    let mut nodes = vec![src];
    let mut cur = src;
    while cur != dst {
        let next_dist = to_dst[cur] - 1;
        let candidates: Vec<usize> = topology.neighbors(cur)?
            .iter()
            .copied()
            .filter(|&v| to_dst[v] == next_dist)
            .collect();
        cur = match &mut tie_rng {
            Some(r) if candidates.len() > 1 => candidates[r.gen_range(0..candidates.len())],
            _ => candidates[0],
        };
        nodes.push(cur);
    }
    Ok(SwapPath { nodes, seed })
}

pub fn transpile(
    circuit: &LogicalCircuit,
    topology: &DeviceTopology,
    layout: &Layout,
    seed: u64,
) -> Result<RoutedCircuit, RouteError> {
    if layout.len() < circuit.num_qubits() {
        return Err(RouteError::LayoutIncomplete {
            layout: layout.len(),
            needed: circuit.num_qubits(),
        });
    }
    for &p in layout.physical() {
        topology.check_index(p)?;
    }

    // `at[p]` is the logical qubit currently held by physical qubit `p`.
    let mut at: Vec<Option<usize>> = vec![None; topology.num_qubits()];
    for (l, &p) in layout.physical().iter().enumerate() {
        at[p] = Some(l);
    }
    let mut pos = layout.physical().to_vec();
    let mut physical_gates = Vec::new();
    let mut swap_paths = Vec::new();

    for gate in circuit.gates() {
        match gate.two_qubit() {
            None => physical_gates.push(gate.remap(|q| pos[q])),
            Some((a, b)) => {
                let path = swap_path(topology, pos[a], pos[b], seed)?;
                let n = path.nodes.len();
                for w in path.nodes[..n - 1].windows(2) {
                    apply_swap(w[0], w[1], &mut at, &mut pos, &mut physical_gates);
                }
                let (ma, mb) = path.meeting_edge();
                physical_gates.push(gate.with_two_qubit_operands(ma, mb));
                for w in path.nodes[..n - 1].windows(2).rev() {
                    apply_swap(w[0], w[1], &mut at, &mut pos, &mut physical_gates);
                }
                swap_paths.push(path);
            }
        }
    }

    Ok(RoutedCircuit {
        physical_gates,
        swap_paths,
        layout: layout.clone(),
        final_layout: Layout { mapping: pos },
    })
}

fn apply_swap(a: usize, b: usize, at: &mut [Option<usize>], pos: &mut [usize], out: &mut Vec<Gate>) {
    out.push(Gate::Swap(a, b));
    at.swap(a, b);
    for p in [a, b] {
        if let Some(l) = at[p] {
            pos[l] = p;
        }
    }
}

pub fn path_intersects(path: &SwapPath, qubits: &[usize]) -> bool {
    qubits.iter().any(|&q| path.contains(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::attacker_cnot;
    use crate::topology::build_heavy_hex;

    fn line(n: usize) -> DeviceTopology {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        DeviceTopology::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn adjacent_and_line_paths() {
        let hh = build_heavy_hex(127).unwrap();
        assert_eq!(swap_path(&hh, 63, 64, 0).unwrap().nodes, vec![63, 64]);
        assert_eq!(swap_path(&line(4), 0, 3, 0).unwrap().nodes, vec![0, 1, 2, 3]);
        assert_eq!(swap_path(&hh, 5, 5, 0).unwrap_err(), RouteError::SameQubit(5));
    }

    #[test]
    fn line_routing_restores_layout() {
        let t = line(4);
        let layout = Layout::new(vec![0, 3]).unwrap();
        let r = transpile(&attacker_cnot(), &t, &layout, 0).unwrap();
        assert_eq!(
            r.physical_gates,
            vec![
                Gate::Swap(0, 1),
                Gate::Swap(1, 2),
                Gate::Cnot(2, 3),
                Gate::Swap(1, 2),
                Gate::Swap(0, 1),
                Gate::Measure(0),
                Gate::Measure(3),
            ]
        );
        assert_eq!(r.final_layout, layout);
        assert_eq!(r.swap_paths.len(), 1);
    }

    #[test]
    fn adjacent_gate_has_length_two_path() {
        let hh = build_heavy_hex(127).unwrap();
        let r = transpile(&attacker_cnot(), &hh, &Layout::new(vec![63, 64]).unwrap(), 0).unwrap();
        assert_eq!(r.physical_gates[0], Gate::Cnot(63, 64));
        assert_eq!(r.swap_paths[0].nodes, vec![63, 64]);
        assert_eq!(r.swap_paths[0].physical_gate_count(), 1);
    }

    #[test]
    fn layout_errors() {
        assert_eq!(Layout::new(vec![1, 1]).unwrap_err(), RouteError::NotInjective(1));
        let t = line(4);
        let err = transpile(&attacker_cnot(), &t, &Layout::new(vec![0]).unwrap(), 0).unwrap_err();
        assert_eq!(err, RouteError::LayoutIncomplete { layout: 1, needed: 2 });
    }

    #[test]
    fn intersection() {
        let p = SwapPath { nodes: vec![3, 4, 5], seed: 0 };
        assert!(path_intersects(&p, &[5, 9]));
        assert!(!path_intersects(&p, &[9]));
        assert!(!path_intersects(&p, &[]));
    }

    #[test]
    fn seeded_paths_are_shortest_and_stable() {
        let hh = build_heavy_hex(127).unwrap();
        for seed in [1u64, 2, 99] {
            let a = swap_path(&hh, 0, 108, seed).unwrap();
            assert_eq!(a, swap_path(&hh, 0, 108, seed).unwrap());
            assert_eq!(a.nodes.len(), hh.hop_distance(0, 108).unwrap() + 1);
        }
    }
}
