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

//! Test-side oracles, written independently of the library internals.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use crosstalk_arena::circuits::{Gate, LogicalCircuit};
use crosstalk_arena::topology::{CalibrationTable, DeviceTopology};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn line(n: usize) -> DeviceTopology {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    DeviceTopology::from_edges(n, &edges).unwrap()
}

/// Random connected graph: a random tree plus `extra` random chords.
pub fn random_connected_edges<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges
}

/// Calibration with no error anywhere.
pub fn quiet_device(n: usize, edges: &[(usize, usize)]) -> DeviceTopology {
    let cal = CalibrationTable {
        readout_error: vec![0.0; n],
        idle_flip_rate: vec![0.0; n],
        two_qubit_gate_error: edges.iter().map(|&(a, b)| ((a.min(b), a.max(b)), 0.0)).collect(),
    };
    DeviceTopology::with_calibration(n, edges, cal).unwrap()
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

pub fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Every shortest path from `src` to `dst`.
pub fn all_shortest_paths(adj: &[Vec<usize>], src: usize, dst: usize) -> Vec<Vec<usize>> {
    let to_dst = bfs(adj, dst);
    let mut out = Vec::new();
    let mut stack = vec![vec![src]];
    while let Some(p) = stack.pop() {
        let u = *p.last().unwrap();
        if u == dst {
            out.push(p);
            continue;
        }
        for &v in &adj[u] {
            if to_dst[v] == Some(to_dst[u].unwrap() - 1) {
                let mut q = p.clone();
                q.push(v);
                stack.push(q);
            }
        }
    }
    out
}

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Applies one gate to a state over `n` qubits; basis bit `q` is qubit `q`.
/// Built from explicit 2x2 / 4x4 matrices.
pub fn apply_gate(state: &[Complex64], gate: &Gate) -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one: [[f64; 2]; 2] = match gate {
        Gate::H(_) => [[h, h], [h, -h]],
        Gate::X(_) => [[0.0, 1.0], [1.0, 0.0]],
        Gate::Z(_) => [[1.0, 0.0], [0.0, -1.0]],
        _ => [[0.0; 2]; 2],
    };
    let two: [[f64; 4]; 4] = match gate {
        // Local index = bit(first) + 2 * bit(second).
        Gate::Cnot(..) => [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ],
        Gate::Cz(..) => [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ],
        Gate::Swap(..) => [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        _ => [[0.0; 4]; 4],
    };
    let mut out = vec![c(0.0); state.len()];
    match *gate {
        Gate::Measure(_) => return state.to_vec(),
        Gate::H(q) | Gate::X(q) | Gate::Z(q) => {
            for (i, &a) in state.iter().enumerate() {
                let b = (i >> q) & 1;
                for nb in 0..2 {
                    let j = (i & !(1 << q)) | (nb << q);
                    out[j] += c(one[nb][b]) * a;
                }
            }
        }
        Gate::Cnot(p, q) | Gate::Cz(p, q) | Gate::Swap(p, q) => {
            for (i, &a) in state.iter().enumerate() {
                let local = ((i >> p) & 1) | (((i >> q) & 1) << 1);
                for nl in 0..4 {
                    let m = two[nl][local];
                    if m != 0.0 {
                        let j = (i & !(1 << p) & !(1 << q)) | ((nl & 1) << p) | ((nl >> 1) << q);
                        out[j] += c(m) * a;
                    }
                }
            }
        }
    }
    out
}

pub fn run_gates(state: &[Complex64], gates: &[Gate]) -> Vec<Complex64> {
    gates.iter().fold(state.to_vec(), |s, g| apply_gate(&s, g))
}

/// Dense unitary of a logical circuit, column `j` = image of basis `j`.
pub fn unitary(circuit: &LogicalCircuit) -> Matrix {
    let dim = 1 << circuit.num_qubits();
    (0..dim)
        .map(|j| {
            let mut e = vec![c(0.0); dim];
            e[j] = c(1.0);
            run_gates(&e, circuit.gates())
        })
        .collect()
}

/// Applies `u` (columns as returned by [`unitary`]) to the qubits
/// `positions` of an `n`-qubit state; logical bit `i` sits at `positions[i]`.
pub fn apply_embedded(u: &Matrix, positions: &[usize], state: &[Complex64]) -> Vec<Complex64> {
    let mask: usize = positions.iter().map(|&p| 1 << p).sum();
    let extract = |i: usize| -> usize {
        positions
            .iter()
            .enumerate()
            .map(|(j, &p)| ((i >> p) & 1) << j)
            .sum()
    };
    let deposit = |l: usize| -> usize {
        positions
            .iter()
            .enumerate()
            .map(|(j, &p)| ((l >> j) & 1) << p)
            .sum()
    };
    let mut out = vec![c(0.0); state.len()];
    for (i, &a) in state.iter().enumerate() {
        if a == c(0.0) {
            continue;
        }
        let col = &u[extract(i)];
        let rest = i & !mask;
        for (l2, &m) in col.iter().enumerate() {
            out[rest | deposit(l2)] += m * a;
        }
    }
    out
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random circuit on `m` logical qubits with a final measurement of all.
pub fn random_circuit<R: Rng>(rng: &mut R, m: usize, len: usize) -> LogicalCircuit {
    let mut gates = Vec::new();
    for _ in 0..len {
        let q: Vec<usize> = (0..m).collect::<Vec<_>>().choose_multiple(rng, 2).copied().collect();
        gates.push(match rng.gen_range(0..6) {
            0 => Gate::H(q[0]),
            1 => Gate::X(q[0]),
            2 => Gate::Z(q[0]),
            3 => Gate::Cnot(q[0], q[1]),
            4 => Gate::Cz(q[0], q[1]),
            _ => Gate::Swap(q[0], q[1]),
        });
    }
    gates.extend((0..m).map(Gate::Measure));
    LogicalCircuit::new(m, gates, None).unwrap()
}

/// Routed-vs-logical check on a basis of logical inputs plus a few random
/// full-register states. Returns the worst amplitude difference.
pub fn routing_error<R: Rng>(
    rng: &mut R,
    circuit: &LogicalCircuit,
    routed_gates: &[Gate],
    n: usize,
    layout: &[usize],
) -> f64 {
    let u = unitary(circuit);
    let mut inputs: Vec<Vec<Complex64>> = (0..1usize << circuit.num_qubits())
        .map(|l| {
            let idx: usize = layout.iter().enumerate().map(|(j, &p)| ((l >> j) & 1) << p).sum();
            let mut e = vec![c(0.0); 1 << n];
            e[idx] = c(1.0);
            e
        })
        .collect();
    inputs.extend((0..3).map(|_| random_state(rng, n)));
    inputs
        .iter()
        .map(|s| max_diff(&run_gates(s, routed_gates), &apply_embedded(&u, layout, s)))
        .fold(0.0, f64::max)
}

/// Outcome distribution keyed by bitstring (bit `j` = `j`-th measured qubit).
pub fn distribution(circuit: &LogicalCircuit) -> BTreeMap<String, f64> {
    let dim = 1 << circuit.num_qubits();
    let mut e = vec![c(0.0); dim];
    e[0] = c(1.0);
    let s = run_gates(&e, circuit.gates());
    let measured = circuit.measured_qubits();
    let mut out = BTreeMap::new();
    for (i, a) in s.iter().enumerate() {
        let p = a.norm_sqr();
        if p > 1e-12 {
            let key: String = measured
                .iter()
                .map(|&q| if (i >> q) & 1 == 1 { '1' } else { '0' })
                .collect();
            *out.entry(key).or_insert(0.0) += p;
        }
    }
    out
}
