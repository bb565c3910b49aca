// Copyright 2026 the twirlcode developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Fast-path twirls against the explicit group-average oracle.

mod common;

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use twirlcode::twirl::permutations;
use twirlcode::{
    brute_force_twirl, pauli_twirl, permutation_twirl, pip_twirl, GeneralChannel, PauliChannel,
    TwirlGroup,
};

const DENSE_CAP: usize = 5;

fn superop_distance(a: &GeneralChannel, b: &GeneralChannel) -> f64 {
    (a.superoperator() - b.superoperator()).norm()
}

#[test]
fn pauli_twirl_matches_the_group_average() {
    let mut rng = ChaCha12Rng::seed_from_u64(53);
    for n in 1..=3 {
        for kraus_count in [1, 2, 4] {
            let ch = GeneralChannel::random(n, kraus_count, &mut rng);
            let fast = pauli_twirl(&ch, DENSE_CAP).unwrap().to_general(DENSE_CAP).unwrap();
            let oracle = brute_force_twirl(&ch, TwirlGroup::Pauli).unwrap();
            let distance = superop_distance(&fast, &oracle);
            assert!(distance < 1e-10, "n={n} k={kraus_count}: {distance:e}");
        }
    }
}

#[test]
fn pip_twirl_matches_the_joint_group_average() {
    let mut rng = ChaCha12Rng::seed_from_u64(59);
    for n in 2..=3 {
        for _ in 0..4 {
            let ch = GeneralChannel::random(n, 2, &mut rng);
            let fast = pip_twirl(&ch, DENSE_CAP)
                .unwrap()
                .to_pauli_channel()
                .unwrap()
                .to_general(DENSE_CAP)
                .unwrap();
            let oracle = brute_force_twirl(&ch, TwirlGroup::Both).unwrap();
            let distance = superop_distance(&fast, &oracle);
            assert!(distance < 1e-10, "n={n}: {distance:e}");
        }
    }
}

#[test]
fn twirling_an_embedded_pauli_channel_changes_nothing() {
    let mut rng = ChaCha12Rng::seed_from_u64(61);
    for n in 1..=3 {
        let ops = twirlcode::enumerate_all(n).unwrap();
        let raw: Vec<f64> = (0..ops.len()).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let original = PauliChannel::new(
            n,
            ops.iter()
                .zip(raw.iter())
                .map(|(op, weight)| (*op, weight / total)),
        )
        .unwrap();
        let twirled = pauli_twirl(&original.to_general(DENSE_CAP).unwrap(), DENSE_CAP).unwrap();
        for (op, prob) in original.terms() {
            assert!(
                (twirled.probability(op) - prob).abs() < 1e-10,
                "{op}: {prob} vs {}",
                twirled.probability(op)
            );
        }
    }
}

#[test]
fn permutation_twirl_equals_the_factorial_average() {
    let mut rng = ChaCha12Rng::seed_from_u64(67);
    for n in 1..=4 {
        let ops = twirlcode::enumerate_all(n).unwrap();
        let raw: Vec<f64> = (0..ops.len()).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let ch = PauliChannel::new(
            n,
            ops.iter()
                .zip(raw.iter())
                .map(|(op, weight)| (*op, weight / total)),
        )
        .unwrap();

        // Oracle: average the relabeled distributions over all n! permutations.
        let perms = permutations(n);
        let share = 1.0 / perms.len() as f64;
        let mut averaged: std::collections::BTreeMap<twirlcode::PauliOp, f64> =
            std::collections::BTreeMap::new();
        for perm in &perms {
            for (op, prob) in ch.terms() {
                let moved = op.permuted(perm).unwrap();
                *averaged.entry(moved).or_insert(0.0) += prob * share;
            }
        }
        let oracle = PauliChannel::new(n, averaged).unwrap();

        let fast = permutation_twirl(&ch).to_pauli_channel().unwrap();
        for (op, prob) in oracle.terms() {
            assert!(
                (fast.probability(op) - prob).abs() < 1e-12,
                "n={n} {op}: {} vs {prob}",
                fast.probability(op)
            );
        }
    }
}

#[test]
fn twirl_order_does_not_matter_at_the_class_level() {
    let mut rng = ChaCha12Rng::seed_from_u64(71);
    for n in 2..=3 {
        let ch = GeneralChannel::random(n, 3, &mut rng);
        let direct = pip_twirl(&ch, DENSE_CAP).unwrap();
        let via_oracle = permutation_twirl(
            &pauli_twirl(
                &brute_force_twirl(&ch, TwirlGroup::Both).unwrap(),
                DENSE_CAP,
            )
            .unwrap(),
        );
        for (a, b) in direct.values().iter().zip(via_oracle.values()) {
            assert!((a - b).abs() < 1e-10, "n={n}");
        }
    }
}
