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

//! Routes one long-range CNOT across the heavy-hex device and prints the
//! SWAP path, the physical gate list and which victim pairs it crosses.
//!
//! ```text
//! cargo run --example path_query -- 0 108
//! ```

use crosstalk_arena::circuits::attacker_cnot;
use crosstalk_arena::router::{path_intersects, swap_path, transpile, Layout};
use crosstalk_arena::topology::build_heavy_hex;

fn main() -> Result<(), crosstalk_arena::Error> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (src, dst) = match args[..] {
        [a, b, ..] => (a, b),
        _ => (0, 108),
    };
    let device = build_heavy_hex(127)?;

    let path = swap_path(&device, src, dst, 0)?;
    println!("{src} -> {dst}: {} hops", path.nodes.len() - 1);
    println!("path: {:?}", path.nodes);
    println!("meeting edge: {:?}", path.meeting_edge());

    let routed = transpile(&attacker_cnot(), &device, &Layout::new(vec![src, dst])?, 0)?;
    let two_q = routed.physical_gates.iter().filter(|g| g.two_qubit().is_some()).count();
    println!("{two_q} physical two-qubit gates, layout restored: {}", routed.final_layout == routed.layout);

    // Tie-breaking seeds pick other shortest paths of the same length.
    for seed in 1..4 {
        let p = swap_path(&device, src, dst, seed)?;
        println!("seed {seed}: {:?}", p.nodes);
    }

    let crossed: Vec<(usize, usize)> = (0..126)
        .filter(|&v| device.has_edge(v, v + 1) && v != src && v + 1 != dst)
        .filter(|&v| path_intersects(&path, &[v, v + 1]))
        .map(|v| (v, v + 1))
        .collect();
    println!("row pairs crossed by the path: {crossed:?}");
    Ok(())
}
