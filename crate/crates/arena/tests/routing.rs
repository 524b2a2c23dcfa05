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

mod common;

use common::{adjacency, all_shortest_paths, random_circuit, random_connected_edges, routing_error};
use crosstalk_arena::circuits::{attacker_cnot, simon, Gate};
use crosstalk_arena::router::{path_intersects, swap_path, transpile, Layout};
use crosstalk_arena::topology::{build_heavy_hex, DeviceTopology};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn seed_zero_is_lexicographically_smallest_shortest_path() {
    let t = build_heavy_hex(127).unwrap();
    let adj = adjacency(127, t.edges());
    for (a, b) in [(0, 108), (0, 69), (0, 66), (126, 3), (40, 90)] {
        let mut all = all_shortest_paths(&adj, a, b);
        all.sort();
        assert_eq!(swap_path(&t, a, b, 0).unwrap().nodes, all[0], "({a},{b})");
    }
    assert_eq!(
        swap_path(&t, 0, 108, 0).unwrap().nodes,
        vec![0, 1, 2, 3, 4, 15, 22, 23, 24, 34, 43, 44, 45, 54, 64, 65, 66, 73, 85, 86, 87, 93, 106, 107, 108]
    );
}

#[test]
fn seeded_tie_breaking_explores_several_shortest_paths() {
    let t = build_heavy_hex(127).unwrap();
    let adj = adjacency(127, t.edges());
    let all = all_shortest_paths(&adj, 0, 108);
    assert!(all.len() > 1);
    let mut seen = std::collections::BTreeSet::new();
    for seed in 1..40 {
        let p = swap_path(&t, 0, 108, seed).unwrap();
        assert!(all.contains(&p.nodes));
        seen.insert(p.nodes);
    }
    assert!(seen.len() > 1);
}

#[test]
fn victim_sweep_intersection_pattern() {
    let t = build_heavy_hex(127).unwrap();
    let p = swap_path(&t, 0, 108, 0).unwrap();
    let hits: Vec<usize> = (60..70).filter(|&v| path_intersects(&p, &[v, v + 1])).collect();
    assert_eq!(hits, vec![63, 64, 65, 66]);
    assert!(!path_intersects(&swap_path(&t, 0, 69, 0).unwrap(), &[63, 64]));
    assert!(path_intersects(&swap_path(&t, 0, 66, 0).unwrap(), &[63, 64]));
}

#[test]
fn routed_simon_matches_logical_unitary() {
    let edges: Vec<_> = (0..9).map(|i| (i, i + 1)).collect();
    let dev = DeviceTopology::from_edges(10, &edges).unwrap();
    let c = simon("101").unwrap();
    let layout = vec![0, 3, 9, 5, 1, 7];
    let r = transpile(&c, &dev, &Layout::new(layout.clone()).unwrap(), 0).unwrap();
    assert_eq!(r.final_layout.physical(), &layout[..]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(routing_error(&mut rng, &c, &r.physical_gates, 10, &layout) < 1e-10);
}

#[test]
fn gate_count_follows_path_length() {
    let t = build_heavy_hex(127).unwrap();
    let r = transpile(&attacker_cnot(), &t, &Layout::new(vec![0, 108]).unwrap(), 0).unwrap();
    let two_q = r.physical_gates.iter().filter(|g| g.two_qubit().is_some()).count();
    assert_eq!(two_q, 2 * 25 - 3);
    assert_eq!(r.swap_paths[0].meeting_edge(), (107, 108));
    assert!(r.physical_gates.contains(&Gate::Cnot(107, 108)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn routing_preserves_the_unitary(
        seed in any::<u64>(),
        n in 6usize..=10,
        m in 2usize..=4,
        extra in 0usize..4,
        len in 1usize..12,
        tseed in 0u64..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = random_connected_edges(&mut rng, n, extra);
        let dev = DeviceTopology::from_edges(n, &edges).unwrap();
        let c = random_circuit(&mut rng, m, len);
        let mut slots: Vec<usize> = (0..n).collect();
        slots.shuffle(&mut rng);
        let layout = slots[..m].to_vec();
        let r = transpile(&c, &dev, &Layout::new(layout.clone()).unwrap(), tseed).unwrap();
        prop_assert_eq!(r.final_layout.physical(), &layout[..]);
        for g in &r.physical_gates {
            if let Some((a, b)) = g.two_qubit() {
                prop_assert!(dev.has_edge(a, b));
            }
        }
        for p in &r.swap_paths {
            let (a, b) = (p.nodes[0], *p.nodes.last().unwrap());
            prop_assert_eq!(p.nodes.len(), dev.hop_distance(a, b).unwrap() + 1);
        }
        prop_assert!(routing_error(&mut rng, &c, &r.physical_gates, n, &layout) < 1e-10);
    }
}
