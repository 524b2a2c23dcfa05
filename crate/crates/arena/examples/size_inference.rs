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

//! Passive attack on victim size. A Simon victim of 2..=64 qubits sits on
//! the even qubits; 63 odd qubits listen. Prints the accuracy/confidence
//! tradeoff as the listener set shrinks.
//!
//! ```text
//! cargo run --release --example size_inference -- [master-seed]
//! ```

use crosstalk_arena::experiments::{experiment3, PassiveParams, RunSettings};
use crosstalk_arena::passive::SelectionStrategy;
use crosstalk_arena::topology::build_heavy_hex;

fn main() -> Result<(), crosstalk_arena::Error> {
    let device = build_heavy_hex(127)?;
    let mut run = RunSettings::default();
    if let Some(seed) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        run.seeds.master = seed;
    }
    let r = experiment3(&device, &PassiveParams::exp3(), &run)?;

    for s in SelectionStrategy::ALL {
        println!("{s}:");
        for p in r.curve(s) {
            println!(
                "  k={:<3} acc1={:.4} confidence={:.5} exact {}/{}",
                p.k, p.mean_acc1, p.mean_confidence, p.exact, p.evaluations
            );
        }
    }
    for m in &r.matrices {
        let diag_wins = m
            .values
            .iter()
            .enumerate()
            .filter(|(i, row)| row.iter().enumerate().all(|(j, v)| j == *i || *v > row[*i]))
            .count();
        println!("mse matrix k={} ({}): {diag_wins}/32 rows minimal on the diagonal", m.k, m.strategy);
    }
    Ok(())
}
