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

//! The omega matrix against brute-force conjugation averages.

mod common;

use common::dense_pauli;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use twirlcode::{
    anticommute_count, enumerate_class, ClassIndex, OmegaMatrix, PauliChannel, PipChannel, Rep,
};

/// Average conjugation sign of the class-w representative over the members of
/// class v, computed with dense matrices only.
fn brute_force_entry(n: usize, index: &ClassIndex, v: usize, w: usize) -> f64 {
    let members = enumerate_class(n, index.class_at(v)).unwrap();
    let rep = dense_pauli(&index.class_at(w).representative(n).unwrap());
    let mut signed: i64 = 0;
    for member in &members {
        let m = dense_pauli(member);
        let conjugated = &m * &rep * &m;
        if (&conjugated - &rep).norm() < 1e-9 {
            signed += 1;
        } else {
            assert!(
                (&conjugated + &rep).norm() < 1e-9,
                "conjugation did not yield ±representative"
            );
            signed -= 1;
        }
    }
    signed as f64 / members.len() as f64
}

#[test]
fn counting_formula_equals_brute_force_conjugation_exactly() {
    for n in 1..=3 {
        let omega = OmegaMatrix::build(n).unwrap();
        let index = omega.class_index();
        for v in 0..index.len() {
            for w in 0..index.len() {
                let fast = omega.entries()[(v, w)];
                let oracle = brute_force_entry(n, index, v, w);
                // Both sides are the same integer ratio evaluated by one f64
                // division, so the match is exact.
                assert_eq!(
                    fast,
                    oracle,
                    "n={n} v={} w={}",
                    index.class_at(v),
                    index.class_at(w)
                );
            }
        }
    }
}

#[test]
fn anticommute_counts_are_representative_independent() {
    for n in 1..=3 {
        let index = ClassIndex::new(n).unwrap();
        for v in index.classes() {
            let members_v = enumerate_class(n, *v).unwrap();
            for w in index.classes() {
                let expected = anticommute_count(n, *v, *w).unwrap();
                for rep in enumerate_class(n, *w).unwrap() {
                    let count = members_v
                        .iter()
                        .filter(|m| !m.commutes(&rep).unwrap())
                        .count() as u128;
                    assert_eq!(count, expected, "n={n} v={v} w={w} rep={rep}");
                }
            }
        }
    }
}

#[test]
fn probability_simplex_maps_into_the_eigenvalue_polytope() {
    let mut rng = ChaCha12Rng::seed_from_u64(37);
    let mut checked = 0;
    for n in 1..=4 {
        let k = twirlcode::class_count(n).unwrap();
        for _ in 0..250 {
            let raw: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let pip = PipChannel::new(n, Rep::Prob, probs).unwrap();
            let eigen = pip.to_eigen().unwrap();
            assert!((eigen.values()[0] - 1.0).abs() < 1e-12);
            for value in eigen.values() {
                assert!(value.abs() <= 1.0 + 1e-12);
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
}

#[test]
fn composition_multiplies_eigenvalues_elementwise() {
    let mut rng = ChaCha12Rng::seed_from_u64(41);
    for n in 1..=3 {
        let k = twirlcode::class_count(n).unwrap();
        for _ in 0..20 {
            let random_pip = |rng: &mut ChaCha12Rng| {
                let raw: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
                let total: f64 = raw.iter().sum();
                PipChannel::new(n, Rep::Prob, raw.iter().map(|x| x / total).collect()).unwrap()
            };
            let a = random_pip(&mut rng);
            let b = random_pip(&mut rng);

            // Route one: elementwise eigenvalue product.
            let eigen_product = a.compose(&b).unwrap();

            // Route two: expand to Pauli channels, convolve, re-twirl.
            let pauli_a = a.to_pauli_channel().unwrap();
            let pauli_b = b.to_pauli_channel().unwrap();
            let composed: PauliChannel = pauli_a.compose(&pauli_b).unwrap();
            let via_convolution = twirlcode::permutation_twirl(&composed)
                .to_eigen()
                .unwrap();

            for (x, y) in eigen_product
                .values()
                .iter()
                .zip(via_convolution.values())
            {
                assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn eigen_to_prob_conditioning_is_reported() {
    for n in 1..=6 {
        let omega = OmegaMatrix::build(n).unwrap();
        let cond = omega.condition_number();
        assert!(cond.is_finite() && cond >= 1.0, "n={n} cond={cond}");
    }
}
