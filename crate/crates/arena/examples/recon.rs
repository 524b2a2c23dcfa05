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

//! Reconnaissance for a fixed first attacker qubit: probe every free second
//! qubit, then repeat knowing the SWAP paths and skip pairs that miss the
//! victim.

use std::time::Instant;

use crosstalk_arena::experiments::{experiment1, Exp1Params, RunSettings};
use crosstalk_arena::topology::build_heavy_hex;

fn main() -> Result<(), crosstalk_arena::Error> {
    let device = build_heavy_hex(127)?;
    let params = Exp1Params::default();
    let run = RunSettings::default();

    let t = Instant::now();
    let r = experiment1(&device, &params, &run)?;
    println!(
        "probed {} second qubits in {:.2?}; path-informed search needed {} of {}",
        r.probes.len(),
        t.elapsed(),
        r.informed.searched,
        r.informed.candidates
    );

    println!("strongest options at {} shots:", run.shots);
    for o in r.options.iter().take(10) {
        let crosses = r.paths.iter().find(|(q, _, _)| *q == o.attacker_pair.1).unwrap().2;
        println!(
            "  second qubit {:>3}  acc0 {:.5}  deviation {:>6.2}%  {:<9} crosses={crosses}",
            o.attacker_pair.1, o.acc0, o.deviation_pct, o.severity
        );
    }
    println!("weakest:");
    for o in r.options.iter().rev().take(3) {
        println!("  second qubit {:>3}  deviation {:>6.2}%", o.attacker_pair.1, o.deviation_pct);
    }
    Ok(())
}
