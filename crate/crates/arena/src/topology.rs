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

//! Physical device model: coupling graph, calibration table and the
//! 127-qubit heavy-hex generator.
//!
//! Heavy-hex row map used by [`build_heavy_hex`]:
//!
//! ```text
//! row 0   qubits   0..=13   columns 0..=13
//! row 1   qubits  18..=32   columns 0..=14
//! row 2   qubits  37..=51   columns 0..=14
//! row 3   qubits  56..=70   columns 0..=14
//! row 4   qubits  75..=89   columns 0..=14
//! row 5   qubits  94..=108  columns 0..=14
//! row 6   qubits 113..=126  columns 1..=14
//! ```
//!
//! Bridge qubits join consecutive rows: 14-17 (rows 0/1), 33-36 (1/2),
//! 52-55 (2/3), 71-74 (3/4), 90-93 (4/5) and 109-112 (5/6). Bridges below an
//! even row sit at columns 0, 4, 8, 12; below an odd row at 2, 6, 10, 14.

use std::collections::{BTreeMap, VecDeque};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_READOUT_ERROR: f64 = 0.02;
pub const DEFAULT_TWO_QUBIT_GATE_ERROR: f64 = 0.01;
pub const DEFAULT_IDLE_FLIP_RATE: f64 = 0.005;

/// Sizes accepted by [`build_heavy_hex`].
pub const SUPPORTED_HEAVY_HEX_SIZES: &[usize] = &[127];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("unsupported heavy-hex size {requested}; supported sizes: {supported:?}")]
    UnsupportedSize {
        requested: usize,
        supported: &'static [usize],
    },
    #[error("qubit index {index} out of range for a {num_qubits}-qubit device")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("self-loop edge on qubit {0}")]
    SelfLoop(usize),
    #[error("coupling graph is not connected")]
    Disconnected,
    #[error("device must have at least one qubit")]
    Empty,
    #[error("{field} entry {key} = {value} is not a probability in [0,1]")]
    Probability {
        field: &'static str,
        key: String,
        value: f64,
    },
    #[error("calibration key {key:?} in {field} is malformed or unknown")]
    CalibrationKey { field: &'static str, key: String },
    #[error("malformed topology file: {0}")]
    Parse(String),
    #[error("cannot read topology file: {0}")]
    Io(String),
}

/// Per-qubit and per-edge error rates.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTable {
    pub readout_error: Vec<f64>,
    pub idle_flip_rate: Vec<f64>,
    pub two_qubit_gate_error: BTreeMap<(usize, usize), f64>,
}

impl CalibrationTable {
    /// Defaults for every qubit and edge.
    pub fn uniform(num_qubits: usize, edges: &[(usize, usize)]) -> Self {
        CalibrationTable {
            readout_error: vec![DEFAULT_READOUT_ERROR; num_qubits],
            idle_flip_rate: vec![DEFAULT_IDLE_FLIP_RATE; num_qubits],
            two_qubit_gate_error: edges
                .iter()
                .map(|&e| (e, DEFAULT_TWO_QUBIT_GATE_ERROR))
                .collect(),
        }
    }
}

#[derive(Debug)]
pub struct DeviceTopology {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    calibration: CalibrationTable,
    distances: OnceLock<Vec<u32>>,
}

impl Clone for DeviceTopology {
    fn clone(&self) -> Self {
        DeviceTopology {
            num_qubits: self.num_qubits,
            edges: self.edges.clone(),
            adjacency: self.adjacency.clone(),
            calibration: self.calibration.clone(),
            distances: OnceLock::new(),
        }
    }
}

impl PartialEq for DeviceTopology {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits
            && self.edges == other.edges
            && self.calibration == other.calibration
    }
}

fn norm_edge(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_prob(field: &'static str, key: String, value: f64) -> Result<(), TopologyError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(TopologyError::Probability { field, key, value })
    }
}

impl DeviceTopology {
    /// Builds a topology with default calibration. Duplicate edges collapse.
    pub fn from_edges(num_qubits: usize, edges: &[(usize, usize)]) -> Result<Self, TopologyError> {
        let normalized = Self::normalize_edges(num_qubits, edges)?;
        let calibration = CalibrationTable::uniform(num_qubits, &normalized);
        Self::with_calibration(num_qubits, &normalized, calibration)
    }

    pub fn with_calibration(
        num_qubits: usize,
        edges: &[(usize, usize)],
        calibration: CalibrationTable,
    ) -> Result<Self, TopologyError> {
        let edges = Self::normalize_edges(num_qubits, edges)?;
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        if calibration.readout_error.len() != num_qubits
            || calibration.idle_flip_rate.len() != num_qubits
        {
            return Err(TopologyError::Parse(
                "calibration table does not cover every qubit".into(),
            ));
        }
        for (q, &p) in calibration.readout_error.iter().enumerate() {
            check_prob("readout_error", q.to_string(), p)?;
        }
        for (q, &p) in calibration.idle_flip_rate.iter().enumerate() {
            check_prob("idle_flip_rate", q.to_string(), p)?;
        }
        for e in &edges {
            match calibration.two_qubit_gate_error.get(e) {
                Some(&p) => check_prob("two_qubit_gate_error", format!("{}-{}", e.0, e.1), p)?,
                None => {
                    return Err(TopologyError::CalibrationKey {
                        field: "two_qubit_gate_error",
                        key: format!("{}-{}", e.0, e.1),
                    })
                }
            }
        }
        if calibration.two_qubit_gate_error.len() != edges.len() {
            let stray = calibration
                .two_qubit_gate_error
                .keys()
                .find(|k| edges.binary_search(k).is_err())
                .map(|k| format!("{}-{}", k.0, k.1))
                .unwrap_or_default();
            return Err(TopologyError::CalibrationKey {
                field: "two_qubit_gate_error",
                key: stray,
            });
        }

        let topo = DeviceTopology {
            num_qubits,
            edges,
            adjacency,
            calibration,
            distances: OnceLock::new(),
        };
        if !topo.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        Ok(topo)
    }

    fn normalize_edges(
        num_qubits: usize,
        edges: &[(usize, usize)],
    ) -> Result<Vec<(usize, usize)>, TopologyError> {
        if num_qubits == 0 {
            return Err(TopologyError::Empty);
        }
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for q in [a, b] {
                if q >= num_qubits {
                    return Err(TopologyError::IndexOutOfRange {
                        index: q,
                        num_qubits,
                    });
                }
            }
            if a == b {
                return Err(TopologyError::SelfLoop(a));
            }
            out.push(norm_edge(a, b));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != u32::MAX)
    }

    fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.num_qubits];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn all_distances(&self) -> &[u32] {
        self.distances.get_or_init(|| {
            let n = self.num_qubits;
            let mut table = Vec::with_capacity(n * n);
            for q in 0..n {
                table.extend(self.bfs(q));
            }
            table
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Sorted `(low, high)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn calibration(&self) -> &CalibrationTable {
        &self.calibration
    }

    pub fn check_index(&self, q: usize) -> Result<(), TopologyError> {
        if q < self.num_qubits {
            Ok(())
        } else {
            Err(TopologyError::IndexOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            })
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.binary_search(&norm_edge(a, b)).is_ok()
    }

    pub fn neighbors(&self, q: usize) -> Result<&[usize], TopologyError> {
        self.check_index(q)?;
        Ok(&self.adjacency[q])
    }

    pub fn hop_distance(&self, a: usize, b: usize) -> Result<usize, TopologyError> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.all_distances()[a * self.num_qubits + b] as usize)
    }

    /// Hop distances from every qubit to `q`, indexed by qubit.
    pub fn distances_to(&self, q: usize) -> Result<&[u32], TopologyError> {
        self.check_index(q)?;
        let n = self.num_qubits;
        Ok(&self.all_distances()[q * n..(q + 1) * n])
    }

    pub fn two_qubit_gate_error(&self, a: usize, b: usize) -> Option<f64> {
        self.calibration
            .two_qubit_gate_error
            .get(&norm_edge(a, b))
            .copied()
    }

    /// Idle flip and readout error combined by independent-OR.
    pub fn baseline_flip(&self, q: usize) -> f64 {
        let c = &self.calibration;
        1.0 - (1.0 - c.idle_flip_rate[q]) * (1.0 - c.readout_error[q])
    }

    pub fn to_file(&self) -> TopologyFile {
        let c = &self.calibration;
        TopologyFile {
            num_qubits: self.num_qubits,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            calibration: CalibrationFile {
                readout_error: c
                    .readout_error
                    .iter()
                    .enumerate()
                    .map(|(q, &p)| (q.to_string(), p))
                    .collect(),
                two_qubit_gate_error: c
                    .two_qubit_gate_error
                    .iter()
                    .map(|(&(a, b), &p)| (format!("{a}-{b}"), p))
                    .collect(),
                idle_flip_rate: c
                    .idle_flip_rate
                    .iter()
                    .enumerate()
                    .map(|(q, &p)| (q.to_string(), p))
                    .collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("topology serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, TopologyError> {
        let file: TopologyFile =
            serde_json::from_str(text).map_err(|e| TopologyError::Parse(e.to_string()))?;
        file.into_topology()
    }
}

/// On-disk JSON shape. Absent calibration keys take the defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyFile {
    pub num_qubits: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub calibration: CalibrationFile,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    #[serde(default)]
    pub readout_error: BTreeMap<String, f64>,
    #[serde(default)]
    pub two_qubit_gate_error: BTreeMap<String, f64>,
    #[serde(default)]
    pub idle_flip_rate: BTreeMap<String, f64>,
}

fn parse_qubit_key(field: &'static str, key: &str, n: usize) -> Result<usize, TopologyError> {
    let q: usize = key.trim().parse().map_err(|_| TopologyError::CalibrationKey {
        field,
        key: key.to_string(),
    })?;
    if q >= n {
        return Err(TopologyError::IndexOutOfRange {
            index: q,
            num_qubits: n,
        });
    }
    Ok(q)
}

impl TopologyFile {
    pub fn into_topology(self) -> Result<DeviceTopology, TopologyError> {
        let n = self.num_qubits;
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let edges = DeviceTopology::normalize_edges(n, &pairs)?;
        let mut cal = CalibrationTable::uniform(n, &edges);

        for (key, &p) in &self.calibration.readout_error {
            let q = parse_qubit_key("readout_error", key, n)?;
            check_prob("readout_error", key.clone(), p)?;
            cal.readout_error[q] = p;
        }
        for (key, &p) in &self.calibration.idle_flip_rate {
            let q = parse_qubit_key("idle_flip_rate", key, n)?;
            check_prob("idle_flip_rate", key.clone(), p)?;
            cal.idle_flip_rate[q] = p;
        }
        for (key, &p) in &self.calibration.two_qubit_gate_error {
            let bad = || TopologyError::CalibrationKey {
                field: "two_qubit_gate_error",
                key: key.clone(),
            };
            let (a, b) = key.split_once('-').ok_or_else(bad)?;
            let a = parse_qubit_key("two_qubit_gate_error", a, n)?;
            let b = parse_qubit_key("two_qubit_gate_error", b, n)?;
            check_prob("two_qubit_gate_error", key.clone(), p)?;
            let e = norm_edge(a, b);
            match cal.two_qubit_gate_error.get_mut(&e) {
                Some(slot) => *slot = p,
                None => return Err(bad()),
            }
        }
        DeviceTopology::with_calibration(n, &edges, cal)
    }
}

pub fn load_topology(path: impl AsRef<Path>) -> Result<DeviceTopology, TopologyError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| TopologyError::Io(format!("{}: {e}", path.as_ref().display())))?;
    DeviceTopology::from_json_str(&text)
}

/// Qubit indices of each heavy-hex row together with the column of the
/// first entry.
fn heavy_hex_127_rows() -> Vec<(Vec<usize>, usize)> {
    let mut rows = vec![((0..14).collect::<Vec<_>>(), 0)];
    let mut start = 18;
    for _ in 0..5 {
        rows.push(((start..start + 15).collect(), 0));
        start += 19;
    }
    rows.push(((113..127).collect(), 1));
    rows
}

pub fn build_heavy_hex(num_qubits: usize) -> Result<DeviceTopology, TopologyError> {
    if !SUPPORTED_HEAVY_HEX_SIZES.contains(&num_qubits) {
        return Err(TopologyError::UnsupportedSize {
            requested: num_qubits,
            supported: SUPPORTED_HEAVY_HEX_SIZES,
        });
    }
    let rows = heavy_hex_127_rows();
    let mut edges = Vec::with_capacity(144);
    for (row, _) in &rows {
        edges.extend(row.windows(2).map(|w| (w[0], w[1])));
    }
    let at_column = |r: usize, col: usize| {
        let (row, first) = &rows[r];
        row[col - first]
    };
    for r in 0..rows.len() - 1 {
        let bridge_base = rows[r].0.last().unwrap() + 1;
        let columns: [usize; 4] = if r % 2 == 0 { [0, 4, 8, 12] } else { [2, 6, 10, 14] };
        for (i, &col) in columns.iter().enumerate() {
            let bridge = bridge_base + i;
            edges.push((at_column(r, col), bridge));
            edges.push((bridge, at_column(r + 1, col)));
        }
    }
    DeviceTopology::from_edges(num_qubits, &edges)
}
