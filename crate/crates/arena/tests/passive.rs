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

use crosstalk_arena::active::Seeds;
use crosstalk_arena::experiments::{exp3_listeners, exp3_victim};
use crosstalk_arena::noise::CrosstalkModel;
use crosstalk_arena::passive::{
    acc1, confidence, eval_runs, learn_signatures, mse, mse_matrix, predict, rank_qubits,
    select_qubits, tradeoff_curve, CrosstalkSignature, Provenance, SelectionStrategy,
    SignatureDataset,
};
use crosstalk_arena::topology::build_heavy_hex;
use crosstalk_arena::Error;
use proptest::prelude::*;

const SEEDS: Seeds = Seeds {
    transpile: 0,
    master: 31,
};

fn sig(counts: Vec<u64>) -> CrosstalkSignature {
    CrosstalkSignature {
        listening_qubits: (0..counts.len()).collect(),
        ones_counts: counts,
        shots: 1000,
    }
}

fn dataset(entries: Vec<(&str, Vec<u64>)>) -> SignatureDataset {
    SignatureDataset {
        listening_qubits: (0..entries[0].1.len()).collect(),
        shots: 1000,
        entries: entries.into_iter().map(|(l, c)| (l.to_string(), c)).collect(),
        provenance: Provenance {
            model: CrosstalkModel::zero(),
            transpile_seed: 0,
            seed: 0,
            note: String::new(),
        },
    }
}

fn small_exp3() -> (Vec<String>, SignatureDataset) {
    let dev = build_heavy_hex(127).unwrap();
    let labels: Vec<String> = ["2", "4", "6", "8", "10", "12"].map(String::from).to_vec();
    let builder = |l: &str| -> Result<_, Error> { exp3_victim(&dev, l.parse().unwrap()) };
    let d = learn_signatures(
        &labels,
        &builder,
        &exp3_listeners(),
        &dev,
        &CrosstalkModel::calibrated(),
        1024,
        SEEDS,
    )
    .unwrap();
    (labels, d)
}

#[test]
fn rank_sixteen_of_thirty_two() {
    assert_eq!(acc1(32, 16), 0.5);
    assert_eq!(acc1(32, 0), 1.0);
    assert_eq!(acc1(32, 31), 1.0 / 32.0);
    let entries: Vec<(String, Vec<u64>)> = (0..32).map(|i| (i.to_string(), vec![i * 10])).collect();
    let mut d = dataset(vec![("x", vec![0])]);
    d.entries = entries;
    // 165 is equidistant from 160 and 170, so pairs tie all the way out.
    let r = predict(&d, &sig(vec![165]), Some("8")).unwrap();
    assert_eq!(r.ranked_labels[..2], ["16".to_string(), "17".to_string()]);
    assert_eq!(r.true_rank, Some(16));
    assert_eq!(r.acc1, Some(0.5));
}

#[test]
fn self_match_is_perfect() {
    let d = dataset(vec![("a", vec![1, 50, 9]), ("b", vec![40, 3, 7]), ("c", vec![20, 20, 20])]);
    for l in ["a", "b", "c"] {
        let r = predict(&d, &d.get(l).unwrap(), Some(l)).unwrap();
        assert_eq!(r.predicted, l);
        assert_eq!(r.mse_values[0], 0.0);
        assert_eq!(r.true_rank, Some(0));
        assert_eq!(r.acc1, Some(1.0));
        assert!(r.confidence > 0.0 && r.confidence <= 1.0);
    }
}

#[test]
fn ties_follow_dataset_order() {
    let d = dataset(vec![("z", vec![10]), ("a", vec![30])]);
    assert_eq!(predict(&d, &sig(vec![20]), None).unwrap().predicted, "z");
    assert_eq!(confidence(&[4.0, 4.0, 8.0]), 0.0);
    assert_eq!(confidence(&[0.0, 0.0]), 0.0);
    assert_eq!(confidence(&[1.0]), 0.0);
    assert_eq!(confidence(&[1.0, 3.0, 4.0]), 0.5);
}

#[test]
fn ranking_matches_naive_variance() {
    let (_, d) = small_exp3();
    let ranked = rank_qubits(&d).unwrap();
    assert_eq!(ranked.len(), 63);
    for (q, var) in &ranked {
        let j = d.listening_qubits.iter().position(|x| x == q).unwrap();
        let xs: Vec<f64> = d.entries.iter().map(|(_, c)| c[j] as f64).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let naive = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!((var - naive).abs() <= 1e-9 * naive.max(1.0));
    }
    assert!(ranked.windows(2).all(|w| w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0)));
    let opt = select_qubits(&ranked, 4, SelectionStrategy::Optimal).unwrap();
    let non = select_qubits(&ranked, 4, SelectionStrategy::NonOptimal).unwrap();
    let def = select_qubits(&ranked, 4, SelectionStrategy::Default).unwrap();
    assert_eq!(opt, ranked[..4].iter().map(|r| r.0).collect::<Vec<_>>());
    assert_eq!(non[0], ranked[62].0);
    assert_eq!(def, vec![1, 3, 5, 7]);
}

#[test]
fn learning_is_reproducible_and_round_trips() {
    let (_, a) = small_exp3();
    let (_, b) = small_exp3();
    assert_eq!(a, b);
    let back = SignatureDataset::from_json_str(&a.to_json()).unwrap();
    assert_eq!(back, a);
    assert_eq!(back.labels().collect::<Vec<_>>(), ["2", "4", "6", "8", "10", "12"]);
}

#[test]
fn restricted_prediction_agrees_with_curve_and_matrix() {
    let dev = build_heavy_hex(127).unwrap();
    let (labels, d) = small_exp3();
    let builder = |l: &str| -> Result<_, Error> { exp3_victim(&dev, l.parse().unwrap()) };
    let m = CrosstalkModel::calibrated();
    let evals = eval_runs(&labels, &builder, &exp3_listeners(), &dev, &m, 1024, SEEDS, 2).unwrap();
    assert_eq!(evals.len(), 12);
    assert_ne!(evals[0].1.ones_counts, d.entries[0].1);

    let ranked = rank_qubits(&d).unwrap();
    let k = 5;
    let qs = select_qubits(&ranked, k, SelectionStrategy::Optimal).unwrap();
    let sub = d.restrict(&qs).unwrap();
    let mut acc = 0.0;
    for (l, obs) in &evals {
        acc += predict(&sub, &obs.restrict(&qs).unwrap(), Some(l)).unwrap().acc1.unwrap();
    }
    let curve = tradeoff_curve(&d, SelectionStrategy::Optimal, &evals, &[k]).unwrap();
    assert!((curve[0].mean_acc1 - acc / evals.len() as f64).abs() < 1e-12);

    let mat = mse_matrix(&d, &evals[..labels.len()], &qs).unwrap();
    for (row, (_, obs)) in mat.iter().zip(&evals) {
        for (v, (l, _)) in row.iter().zip(&d.entries) {
            let direct = mse(&obs.restrict(&qs).unwrap(), &sub.get(l).unwrap()).unwrap();
            assert!((v - direct).abs() < 1e-9);
        }
    }
    // The full listener set separates these sizes easily.
    let full = tradeoff_curve(&d, SelectionStrategy::Optimal, &evals, &[63]).unwrap();
    assert_eq!(full[0].mean_acc1, 1.0);
}

proptest! {
    #[test]
    fn mse_is_a_symmetric_mean_square(
        pair in (1usize..20).prop_flat_map(|n| (
            proptest::collection::vec(0u64..1000, n),
            proptest::collection::vec(0u64..1000, n),
        ))
    ) {
        let (a, b) = pair;
        let (x, y) = (sig(a.clone()), sig(b.clone()));
        let m = mse(&x, &y).unwrap();
        let naive = a.iter().zip(&b).map(|(&p, &q)| (p as f64 - q as f64).powi(2)).sum::<f64>() / a.len() as f64;
        prop_assert!((m - naive).abs() < 1e-9);
        prop_assert_eq!(m, mse(&y, &x).unwrap());
        prop_assert_eq!(mse(&x, &x).unwrap(), 0.0);
        prop_assert!(m >= 0.0);
    }

    #[test]
    fn confidence_stays_in_unit_interval(mut v in proptest::collection::vec(0.0f64..1e6, 0..10)) {
        v.sort_by(f64::total_cmp);
        let c = confidence(&v);
        prop_assert!((0.0..=1.0).contains(&c));
    }
}
