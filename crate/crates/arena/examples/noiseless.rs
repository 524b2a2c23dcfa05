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

//! Noiseless reference outputs of the victim algorithms from the dense
//! state-vector simulator.

use crosstalk_arena::circuits::{format_bits, grover_2q, simon};
use crosstalk_arena::statevector::output_distribution;

fn outcomes(probs: &[f64], width: usize) -> Vec<(String, f64)> {
    probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-12)
        .map(|(i, &p)| {
            let bits: Vec<bool> = (0..width).map(|j| (i >> j) & 1 == 1).collect();
            (format_bits(&bits), p)
        })
        .collect()
}

fn main() -> Result<(), crosstalk_arena::Error> {
    for marked in ["00", "01", "10", "11"] {
        let dist = output_distribution(&grover_2q(marked)?).unwrap();
        for (z, p) in outcomes(&dist, 2) {
            println!("grover {marked}: {z} with p={p:.6}");
        }
    }

    for shift in ["11", "101", "1101", "100110"] {
        let c = simon(shift)?;
        let dist = output_distribution(&c).unwrap();
        let zs = outcomes(&dist, shift.len());
        println!("simon s={shift}: {} outcomes, each p={:.4}", zs.len(), zs[0].1);
        for (z, _) in zs.iter().take(4) {
            let dot = z.chars().zip(shift.chars()).filter(|&(a, b)| a == '1' && b == '1').count();
            println!("  z={z}  z.s mod 2 = {}", dot % 2);
        }
    }
    Ok(())
}
