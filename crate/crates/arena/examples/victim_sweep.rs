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

//! Fixed attacker (0, 108), victim slid along the row 60..=70. Only the
//! positions on the SWAP path should be hurt.

use crosstalk_arena::experiments::{experiment2, Exp2Params, RunSettings};
use crosstalk_arena::topology::build_heavy_hex;

fn main() -> Result<(), crosstalk_arena::Error> {
    let device = build_heavy_hex(127)?;
    let reports = experiment2(&device, &Exp2Params::default(), &RunSettings::default())?;
    println!("v1  v2  crosses  acc0     deviation  severity");
    for r in &reports {
        println!(
            "{:<3} {:<3} {:<8} {:.5}  {:>8.2}%  {}",
            r.victim_layout[0],
            r.victim_layout[1],
            if r.intersected { "TRUE" } else { "FALSE" },
            r.acc0,
            r.deviation_pct,
            r.severity
        );
    }
    Ok(())
}
