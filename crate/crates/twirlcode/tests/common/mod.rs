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

//! Dense oracles shared by the integration suites. Everything here is built
//! from explicit 2x2 matrices and Kronecker products, independently of the
//! bit-mask fast paths it is used to check.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::prelude::*;
use twirlcode::clifford::Gate;
use twirlcode::{CliffordCircuit, PauliOp};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(letter: char) -> DMatrix<Complex64> {
    match letter {
        'I' => DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        'X' => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        'Y' => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        'Z' => DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        other => panic!("unknown letter {other}"),
    }
}

fn phase_factor(exp: u8) -> Complex64 {
    match exp % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

/// Dense matrix of a Pauli operator, built from its letter string by
/// Kronecker products.
pub fn dense_pauli(op: &PauliOp) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, phase_factor(op.prefix_exp()));
    for q in 1..=op.n_qubits() {
        out = out.kronecker(&letter_matrix(op.letter(q)));
    }
    out
}

/// Dense unitary of a gate, built from explicit local matrices.
pub fn dense_gate(n: usize, gate: Gate) -> DMatrix<Complex64> {
    match gate {
        Gate::H(q) => {
            let s = 1.0 / 2.0f64.sqrt();
            let local =
                DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
            embed(n, q, &local)
        }
        Gate::S(q) => {
            let local =
                DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
            embed(n, q, &local)
        }
        Gate::Cnot { control, target } => {
            let dim = 1usize << n;
            let mut out = DMatrix::zeros(dim, dim);
            let cbit = 1usize << (n - control);
            let tbit = 1usize << (n - target);
            for basis in 0..dim {
                let image = if basis & cbit != 0 { basis ^ tbit } else { basis };
                out[(image, basis)] = c(1.0, 0.0);
            }
            out
        }
    }
}

fn embed(n: usize, q: usize, local: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for position in 1..=n {
        if position == q {
            out = out.kronecker(local);
        } else {
            out = out.kronecker(&letter_matrix('I'));
        }
    }
    out
}

/// Dense unitary of a whole circuit, first gate applied first.
pub fn dense_circuit(circuit: &CliffordCircuit) -> DMatrix<Complex64> {
    let n = circuit.n_qubits();
    let dim = 1usize << n;
    let mut total = DMatrix::<Complex64>::identity(dim, dim);
    for gate in circuit.gates() {
        total = dense_gate(n, *gate) * total;
    }
    total
}

pub fn random_pauli(n: usize, rng: &mut impl Rng) -> PauliOp {
    let valid = (1u64 << n) - 1;
    PauliOp::from_masks(
        n,
        rng.gen::<u64>() & valid,
        rng.gen::<u64>() & valid,
        rng.gen_range(0..4),
    )
    .unwrap()
}

pub fn random_circuit(n: usize, len: usize, rng: &mut impl Rng) -> CliffordCircuit {
    let mut circuit = CliffordCircuit::new(n);
    for _ in 0..len {
        let gate = match rng.gen_range(0..3) {
            0 => Gate::H(rng.gen_range(1..=n)),
            1 => Gate::S(rng.gen_range(1..=n)),
            _ => {
                if n == 1 {
                    Gate::S(1)
                } else {
                    let control = rng.gen_range(1..=n);
                    let mut target = rng.gen_range(1..=n);
                    while target == control {
                        target = rng.gen_range(1..=n);
                    }
                    Gate::Cnot { control, target }
                }
            }
        };
        circuit.push(gate).unwrap();
    }
    circuit
}
