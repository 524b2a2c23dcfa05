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

//! Dense state-vector simulator for small circuits.
//!
//! Basis index bit `q` holds qubit `q`.

use num_complex::Complex64;

use crate::circuits::{Gate, LogicalCircuit};

pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two(), "length must be a power of two");
        StateVector {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Applies a unitary gate. `Measure` is a no-op here.
    pub fn apply(&mut self, gate: &Gate) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *gate {
            Gate::H(q) => {
                let m = 1 << q;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * s;
                        self.amps[i | m] = (a - b) * s;
                    }
                }
            }
            Gate::X(q) => {
                let m = 1 << q;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Z(q) => {
                let m = 1 << q;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Cz(a, b) => {
                let m = (1 << a) | (1 << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & m == m {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot(c, t) => {
                let (mc, mt) = (1 << c, 1 << t);
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (ma, mb) = (1 << a, 1 << b);
                for i in 0..self.amps.len() {
                    if i & ma != 0 && i & mb == 0 {
                        self.amps.swap(i, (i & !ma) | mb);
                    }
                }
            }
            Gate::Measure(_) => {}
        }
    }

    /// Probability of each outcome over `qubits`; outcome bit `j` is
    /// `qubits[j]`.
    pub fn marginal(&self, qubits: &[usize]) -> Vec<f64> {
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut k = 0;
            for (j, &q) in qubits.iter().enumerate() {
                k |= ((i >> q) & 1) << j;
            }
            probs[k] += p;
        }
        probs
    }
}

/// Measurement distribution of a circuit started in `|0...0>`, indexed by
/// outcome with bit `j` = `j`-th measured qubit. `None` above
/// [`MAX_DENSE_QUBITS`].
pub fn output_distribution(circuit: &LogicalCircuit) -> Option<Vec<f64>> {
    if circuit.num_qubits() > MAX_DENSE_QUBITS {
        return None;
    }
    let mut sv = StateVector::zero(circuit.num_qubits());
    for g in circuit.gates() {
        sv.apply(g);
    }
    Some(sv.marginal(&circuit.measured_qubits()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_pair() {
        let mut sv = StateVector::zero(2);
        sv.apply(&Gate::H(0));
        sv.apply(&Gate::Cnot(0, 1));
        let p = sv.marginal(&[0, 1]);
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn swap_moves_excitation() {
        let mut sv = StateVector::basis(3, 0b001);
        sv.apply(&Gate::Swap(0, 2));
        assert_eq!(sv.amplitudes()[0b100], Complex64::new(1.0, 0.0));
        sv.apply(&Gate::Swap(2, 0));
        assert_eq!(sv.amplitudes()[0b001], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hzh_is_x() {
        let mut a = StateVector::zero(1);
        for g in [Gate::H(0), Gate::Z(0), Gate::H(0)] {
            a.apply(&g);
        }
        assert!((a.marginal(&[0])[1] - 1.0).abs() < 1e-12);
    }
}
