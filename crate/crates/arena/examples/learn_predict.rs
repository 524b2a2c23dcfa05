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

//! The passive attack by hand: learn a signature dataset, save and reload
//! it, capture one fresh signature and match it.

use crosstalk_arena::active::Seeds;
use crosstalk_arena::experiments::{exp3_labels, exp3_listeners, exp3_victim};
use crosstalk_arena::noise::CrosstalkModel;
use crosstalk_arena::passive::{
    learn_signatures, measure_signature, predict, rank_qubits, select_qubits, SelectionStrategy,
    SignatureDataset,
};
use crosstalk_arena::topology::build_heavy_hex;
use crosstalk_arena::Error;

fn main() -> Result<(), Error> {
    let device = build_heavy_hex(127)?;
    let model = CrosstalkModel::calibrated();
    let seeds = Seeds {
        transpile: 0,
        master: 7,
    };
    let builder = |label: &str| -> Result<_, Error> {
        let size = label.parse().map_err(|_| Error::Config(format!("bad size {label}")))?;
        exp3_victim(&device, size)
    };

    let dataset = learn_signatures(&exp3_labels(), &builder, &exp3_listeners(), &device, &model, 4096, seeds)?;
    let path = std::env::temp_dir().join("crosstalk-arena-dataset.json");
    std::fs::write(&path, dataset.to_json()).map_err(|e| Error::Io(e.to_string()))?;
    let dataset = SignatureDataset::load(&path)?;
    println!("learned {} signatures over {} listeners -> {}", dataset.len(), dataset.listening_qubits.len(), path.display());

    // A fresh run of a 38-qubit victim on an unrelated sampling seed.
    let observed = measure_signature("38", &builder, &exp3_listeners(), &device, &model, 4096, 0, 99)?;
    let full = predict(&dataset, &observed, Some("38"))?;
    println!("all listeners: predicted {} (confidence {:.4})", full.predicted, full.confidence);
    println!("  nearest: {:?}", &full.ranked_labels[..4]);

    let ranked = rank_qubits(&dataset)?;
    for k in [2, 4, 8] {
        let qs = select_qubits(&ranked, k, SelectionStrategy::Optimal)?;
        let p = predict(&dataset.restrict(&qs)?, &observed.restrict(&qs)?, Some("38"))?;
        println!("k={k} {qs:?}: predicted {} acc1 {:.4}", p.predicted, p.acc1.unwrap());
    }
    Ok(())
}
