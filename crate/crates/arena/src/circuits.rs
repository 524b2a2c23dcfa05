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

//! Logical circuit IR, the circuit constructors used by the attacks, and
//! multi-tenant composition.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::router::Layout;
use crate::topology::DeviceTopology;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),
    #[error("hidden shift must not be all zeros")]
    ZeroShift,
    #[error("hidden shift must have at least one bit")]
    EmptyShift,
    #[error("circuit size must be at least 1")]
    InvalidSize,
    #[error("gate {gate} operand {operand} out of range for {num_qubits} qubits")]
    OperandOutOfRange {
        gate: usize,
        operand: usize,
        num_qubits: usize,
    },
    #[error("gate {gate} uses qubit {qubit} twice")]
    RepeatedOperand { gate: usize, qubit: usize },
    #[error("gate {gate} acts on qubit {qubit} after it was measured")]
    AfterMeasure { gate: usize, qubit: usize },
    #[error("expected output {expected:?} does not match {measured} measured qubits")]
    ExpectedLength { expected: String, measured: usize },
    #[error("tenant footprints overlap on physical qubit {0}")]
    OverlapError(usize),
    #[error("tenants need {needed} qubits, device has {available}")]
    DeviceOverflow { needed: usize, available: usize },
    #[error("tenant {tenant}: layout covers {layout} qubits, circuit has {circuit}")]
    LayoutSize {
        tenant: usize,
        layout: usize,
        circuit: usize,
    },
    #[error("unknown gate name {0:?}")]
    UnknownGate(String),
    #[error("malformed circuit file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
    Swap(usize, usize),
    Measure(usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::Cz(..) => "cz",
            Gate::Cnot(..) => "cnot",
            Gate::Swap(..) => "swap",
            Gate::Measure(_) => "measure",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Measure(q) => vec![q],
            Gate::Cz(a, b) | Gate::Cnot(a, b) | Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn two_qubit(&self) -> Option<(usize, usize)> {
        match *self {
            Gate::Cz(a, b) | Gate::Cnot(a, b) | Gate::Swap(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Same gate kind on new operands.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Z(q) => Gate::Z(f(q)),
            Gate::Measure(q) => Gate::Measure(f(q)),
            Gate::Cz(a, b) => Gate::Cz(f(a), f(b)),
            Gate::Cnot(a, b) => Gate::Cnot(f(a), f(b)),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
        }
    }

    pub fn with_two_qubit_operands(&self, a: usize, b: usize) -> Gate {
        match self {
            Gate::Cz(..) => Gate::Cz(a, b),
            Gate::Cnot(..) => Gate::Cnot(a, b),
            Gate::Swap(..) => Gate::Swap(a, b),
            other => *other,
        }
    }
}

/// Noiseless output structure known without dense simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Generic,
    /// Measure-only circuit: always all zeros.
    Listening,
    /// Input register uniform over `{z : z . s = 0}`. An all-zero shift
    /// means a one-to-one oracle, so every `z` is possible.
    Simon { shift: Vec<bool> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    expected_output: Option<String>,
    family: Family,
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>, CircuitError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CircuitError::InvalidBitstring(s.to_string())),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl LogicalCircuit {
    pub fn new(
        num_qubits: usize,
        gates: Vec<Gate>,
        expected_output: Option<String>,
    ) -> Result<Self, CircuitError> {
        Self::with_family(num_qubits, gates, expected_output, Family::Generic)
    }

    fn with_family(
        num_qubits: usize,
        gates: Vec<Gate>,
        expected_output: Option<String>,
        family: Family,
    ) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::InvalidSize);
        }
        let mut measured = vec![false; num_qubits];
        for (i, g) in gates.iter().enumerate() {
            let qs = g.qubits();
            for &q in &qs {
                if q >= num_qubits {
                    return Err(CircuitError::OperandOutOfRange {
                        gate: i,
                        operand: q,
                        num_qubits,
                    });
                }
                if measured[q] {
                    return Err(CircuitError::AfterMeasure { gate: i, qubit: q });
                }
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(CircuitError::RepeatedOperand {
                    gate: i,
                    qubit: qs[0],
                });
            }
            if let Gate::Measure(q) = g {
                measured[*q] = true;
            }
        }
        let circuit = LogicalCircuit {
            num_qubits,
            gates,
            expected_output,
            family,
        };
        if let Some(exp) = &circuit.expected_output {
            parse_bits(exp)?;
            if exp.len() != circuit.measured_qubits().len() {
                return Err(CircuitError::ExpectedLength {
                    expected: exp.clone(),
                    measured: circuit.measured_qubits().len(),
                });
            }
        }
        Ok(circuit)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn expected_output(&self) -> Option<&str> {
        self.expected_output.as_deref()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Measured logical qubits in ascending order; bit `j` of every outcome
    /// string refers to entry `j`.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Measure(q) => Some(*q),
                _ => None,
            })
            .collect();
        qs.sort_unstable();
        qs
    }

    pub fn to_json(&self) -> String {
        let gates: Vec<serde_json::Value> = self
            .gates
            .iter()
            .map(|g| {
                let mut row = vec![serde_json::Value::from(g.name())];
                row.extend(g.qubits().into_iter().map(serde_json::Value::from));
                serde_json::Value::Array(row)
            })
            .collect();
        let file = CircuitFile {
            num_qubits: self.num_qubits,
            gates,
            expected: self.expected_output.clone(),
        };
        serde_json::to_string_pretty(&file).expect("circuit serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, CircuitError> {
        let file: CircuitFile =
            serde_json::from_str(text).map_err(|e| CircuitError::Parse(e.to_string()))?;
        let mut gates = Vec::with_capacity(file.gates.len());
        for row in &file.gates {
            let items = row
                .as_array()
                .ok_or_else(|| CircuitError::Parse(format!("gate entry {row} is not an array")))?;
            let name = items
                .first()
                .and_then(|v| v.as_str())
                .ok_or_else(|| CircuitError::Parse(format!("gate entry {row} has no name")))?;
            let ops: Vec<usize> = items[1..]
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| CircuitError::Parse(format!("bad operand in {row}")))
                })
                .collect::<Result<_, _>>()?;
            let arity = |n: usize| {
                if ops.len() == n {
                    Ok(())
                } else {
                    Err(CircuitError::Parse(format!("{name} takes {n} operand(s)")))
                }
            };
            let gate = match name.to_ascii_lowercase().as_str() {
                "h" => arity(1).map(|_| Gate::H(ops[0])),
                "x" => arity(1).map(|_| Gate::X(ops[0])),
                "z" => arity(1).map(|_| Gate::Z(ops[0])),
                "measure" => arity(1).map(|_| Gate::Measure(ops[0])),
                "cz" => arity(2).map(|_| Gate::Cz(ops[0], ops[1])),
                "cnot" | "cx" => arity(2).map(|_| Gate::Cnot(ops[0], ops[1])),
                "swap" => arity(2).map(|_| Gate::Swap(ops[0], ops[1])),
                other => Err(CircuitError::UnknownGate(other.to_string())),
            }?;
            gates.push(gate);
        }
        LogicalCircuit::new(file.num_qubits, gates, file.expected)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    num_qubits: usize,
    gates: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
}

/// One iteration of 2-qubit Grover search for `marked`.
pub fn grover_2q(marked: &str) -> Result<LogicalCircuit, CircuitError> {
    let bits = parse_bits(marked)?;
    if bits.len() != 2 {
        return Err(CircuitError::InvalidBitstring(marked.to_string()));
    }
    let mut g = vec![Gate::H(0), Gate::H(1)];
    let flips: Vec<Gate> = (0..2).filter(|&q| !bits[q]).map(Gate::X).collect();
    g.extend(&flips);
    g.push(Gate::Cz(0, 1));
    g.extend(&flips);
    g.extend([Gate::H(0), Gate::H(1), Gate::X(0), Gate::X(1)]);
    g.push(Gate::Cz(0, 1));
    g.extend([Gate::X(0), Gate::X(1), Gate::H(0), Gate::H(1)]);
    g.extend([Gate::Measure(0), Gate::Measure(1)]);
    LogicalCircuit::new(2, g, Some(marked.to_string()))
}

fn simon_gates(shift: &[bool], fan_out: bool) -> Vec<Gate> {
    let n = shift.len();
    let mut g: Vec<Gate> = (0..n).map(Gate::H).collect();
    g.extend((0..n).map(|i| Gate::Cnot(i, n + i)));
    if fan_out {
        if let Some(k) = shift.iter().position(|&b| b) {
            g.extend((0..n).filter(|&j| shift[j]).map(|j| Gate::Cnot(k, n + j)));
        }
    }
    g.extend((0..n).map(Gate::H));
    g.extend((0..n).map(Gate::Measure));
    g
}

/// Simon's problem with hidden shift `s` on `2n` qubits: input register
/// `0..n`, output register `n..2n`, only the input register is measured.
pub fn simon(hidden_shift: &str) -> Result<LogicalCircuit, CircuitError> {
    let shift = parse_bits(hidden_shift)?;
    if shift.is_empty() {
        return Err(CircuitError::EmptyShift);
    }
    if !shift.iter().any(|&b| b) {
        return Err(CircuitError::ZeroShift);
    }
    let n = shift.len();
    LogicalCircuit::with_family(
        2 * n,
        simon_gates(&shift, true),
        None,
        Family::Simon { shift },
    )
}

/// The `s = 0` member of the Simon family: copy layer only, so the oracle
/// is one-to-one and the input register reads uniformly random.
pub fn simon_one_to_one(n: usize) -> Result<LogicalCircuit, CircuitError> {
    if n == 0 {
        return Err(CircuitError::EmptyShift);
    }
    let shift = vec![false; n];
    LogicalCircuit::with_family(
        2 * n,
        simon_gates(&shift, false),
        None,
        Family::Simon { shift },
    )
}

pub fn attacker_cnot() -> LogicalCircuit {
    LogicalCircuit::new(
        2,
        vec![Gate::Cnot(0, 1), Gate::Measure(0), Gate::Measure(1)],
        Some("00".into()),
    )
    .expect("static circuit is valid")
}

pub fn listening_circuit(k: usize) -> Result<LogicalCircuit, CircuitError> {
    if k == 0 {
        return Err(CircuitError::InvalidSize);
    }
    LogicalCircuit::with_family(
        k,
        (0..k).map(Gate::Measure).collect(),
        Some("0".repeat(k)),
        Family::Listening,
    )
}

#[derive(Debug, Clone)]
pub struct Tenant {
    pub circuit: LogicalCircuit,
    pub layout: Layout,
}

#[derive(Debug, Clone)]
pub struct MultiTenantProgram<'d> {
    tenants: Vec<Tenant>,
    schedule: Vec<(usize, usize)>,
    device: &'d DeviceTopology,
}

impl<'d> MultiTenantProgram<'d> {
    pub fn tenants(&self) -> &[Tenant] {
        &self.tenants
    }

    /// `(tenant, gate index)` in execution order.
    pub fn schedule(&self) -> &[(usize, usize)] {
        &self.schedule
    }

    pub fn device(&self) -> &'d DeviceTopology {
        self.device
    }
}

pub fn merge_tenants<'d>(
    tenants: Vec<(LogicalCircuit, Layout)>,
    device: &'d DeviceTopology,
) -> Result<MultiTenantProgram<'d>, CircuitError> {
    let needed: usize = tenants.iter().map(|(c, _)| c.num_qubits()).sum();
    if needed > device.num_qubits() {
        return Err(CircuitError::DeviceOverflow {
            needed,
            available: device.num_qubits(),
        });
    }
    let mut owner = vec![false; device.num_qubits()];
    for (t, (circuit, layout)) in tenants.iter().enumerate() {
        if layout.len() != circuit.num_qubits() {
            return Err(CircuitError::LayoutSize {
                tenant: t,
                layout: layout.len(),
                circuit: circuit.num_qubits(),
            });
        }
        for &p in layout.physical() {
            if p >= device.num_qubits() {
                return Err(CircuitError::DeviceOverflow {
                    needed: p + 1,
                    available: device.num_qubits(),
                });
            }
            if owner[p] {
                return Err(CircuitError::OverlapError(p));
            }
            owner[p] = true;
        }
    }

    let longest = tenants.iter().map(|(c, _)| c.gates().len()).max().unwrap_or(0);
    let mut schedule = Vec::new();
    for i in 0..longest {
        for (t, (c, _)) in tenants.iter().enumerate() {
            if i < c.gates().len() {
                schedule.push((t, i));
            }
        }
    }
    Ok(MultiTenantProgram {
        tenants: tenants
            .into_iter()
            .map(|(circuit, layout)| Tenant { circuit, layout })
            .collect(),
        schedule,
        device,
    })
}
