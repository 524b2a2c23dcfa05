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

//! A single active attack: a 2-qubit Grover victim on (63, 64) next to
//! attacker CNOTs whose SWAP paths do or do not cross it.

use crosstalk_arena::active::{execute_active, Seeds, Victim};
use crosstalk_arena::circuits::grover_2q;
use crosstalk_arena::noise::CrosstalkModel;
use crosstalk_arena::router::Layout;
use crosstalk_arena::topology::build_heavy_hex;

fn main() -> Result<(), crosstalk_arena::Error> {
    let device = build_heavy_hex(127)?;
    let model = CrosstalkModel::calibrated();
    let seeds = Seeds {
        transpile: 0,
        master: 2024,
    };
    let victim = Victim {
        circuit: grover_2q("11")?,
        layout: Layout::new(vec![63, 64])?,
    };

    for attacker in [(0, 66), (0, 65), (0, 108), (0, 69), (0, 13)] {
        let r = execute_active(&victim, attacker, &device, &model, 4096, seeds)?;
        println!(
            "{attacker:?}: crosses={:<5} acc0={:.4} deviation={:>6.2}% {}",
            r.intersected, r.acc0, r.deviation_pct, r.severity
        );
    }

    let quiet = execute_active(&victim, (0, 66), &device, &CrosstalkModel::zero(), 4096, seeds)?;
    println!("(0, 66) without crosstalk: deviation={:.2}% {}", quiet.deviation_pct, quiet.severity);
    Ok(())
}
