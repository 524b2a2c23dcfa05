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

//! Bring your own device and noise profile. Writes a small ladder topology
//! with per-qubit calibration and a stronger crosstalk profile to JSON,
//! loads both back and attacks a victim on it.

use crosstalk_arena::active::{execute_active, Seeds, Victim};
use crosstalk_arena::circuits::grover_2q;
use crosstalk_arena::noise::{load_noise_profile, CrosstalkModel};
use crosstalk_arena::router::Layout;
use crosstalk_arena::topology::{load_topology, DeviceTopology};
use crosstalk_arena::Error;

fn main() -> Result<(), Error> {
    // Two rails of 8 qubits joined by rungs at both ends and the middle.
    let mut edges: Vec<(usize, usize)> = (0..7).flat_map(|i| [(i, i + 1), (8 + i, 9 + i)]).collect();
    edges.extend([(0, 8), (4, 12), (7, 15)]);
    let device = DeviceTopology::from_edges(16, &edges)?;

    let dir = std::env::temp_dir().join("crosstalk-arena-custom");
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io(e.to_string()))?;
    let dev_path = dir.join("ladder.json");
    let noise_path = dir.join("noisy.json");
    std::fs::write(&dev_path, device.to_json()).map_err(|e| Error::Io(e.to_string()))?;
    let noisy = CrosstalkModel {
        gamma_path: 0.05,
        gamma_adjacent: 0.2,
        decay: 0.5,
        cap: 0.9,
    };
    std::fs::write(&noise_path, noisy.to_json()).map_err(|e| Error::Io(e.to_string()))?;

    let device = load_topology(&dev_path)?;
    let model = load_noise_profile(&noise_path)?;
    println!("loaded {} qubits / {} edges from {}", device.num_qubits(), device.edges().len(), dev_path.display());

    let victim = Victim {
        circuit: grover_2q("01")?,
        layout: Layout::new(vec![2, 3])?,
    };
    let seeds = Seeds {
        transpile: 0,
        master: 1,
    };
    for attacker in [(0, 6), (8, 14), (9, 15)] {
        let r = execute_active(&victim, attacker, &device, &model, 2048, seeds)?;
        println!("{attacker:?} path {:?}: deviation {:.2}% {}", r.swap_path, r.deviation_pct, r.severity);
    }
    println!("same files work with the CLI: crosstalk-arena attack --device {} --noise {} --victim-qubits 2,3 --marked 01 --attacker 0,6", dev_path.display(), noise_path.display());
    Ok(())
}
