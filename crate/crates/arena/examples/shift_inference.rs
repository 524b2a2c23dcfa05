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

//! Passive attack on a 7-bit hidden shift. The 14-qubit Simon victim is
//! spread across the device and the remaining 113 qubits listen.

use crosstalk_arena::experiments::{experiment4, PassiveParams, RunSettings, EXP4_K_STAR};
use crosstalk_arena::passive::SelectionStrategy;
use crosstalk_arena::topology::build_heavy_hex;

fn main() -> Result<(), crosstalk_arena::Error> {
    let device = build_heavy_hex(127)?;
    let r = experiment4(&device, &PassiveParams::exp4(), &RunSettings::default())?;

    print!("{:>5}", "k");
    for s in SelectionStrategy::ALL {
        print!("{:>14}", s.to_string());
    }
    println!();
    for (i, p) in r.curve(SelectionStrategy::Optimal).iter().enumerate() {
        print!("{:>5}", p.k);
        for s in SelectionStrategy::ALL {
            print!("{:>14.4}", r.curve(s)[i].mean_acc1);
        }
        println!();
    }
    for m in &r.matrices {
        println!("k={EXP4_K_STAR} {} listeners: {:?}", m.strategy, &m.qubits[..6.min(m.qubits.len())]);
    }
    Ok(())
}
