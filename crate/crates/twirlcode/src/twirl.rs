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

//! Twirling transformations.
//!
//! Twirling averages a channel under conjugation by a set of unitaries,
//! Λ̄(ρ) = (1/|G|) Σ_U U Λ(U† ρ U) U†. Two group choices matter here:
//!
//! - the Pauli group, which kills the off-diagonal process-matrix elements and
//!   leaves a [`PauliChannel`] ([`pauli_twirl`]);
//! - all qubit permutations, which collapse a Pauli channel onto weight-class
//!   masses and leave a [`PipChannel`] ([`permutation_twirl`]).
//!
//! The fast paths never enumerate group elements: the Pauli twirl reads off the
//! process-matrix diagonal and the permutation twirl sums class masses, which
//! is what makes larger-n work feasible. [`brute_force_twirl`] does the
//! explicit group average and exists as a test oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{chi_diagonal, pauli_matrix, GeneralChannel, PauliChannel, PipChannel};
use crate::error::{Error, Result};
use crate::pauli::enumerate_all;

/// Qubit cap for the explicit group-average oracle; the group has 4^n · n!
/// elements in the worst case.
pub const BRUTE_FORCE_CAP: usize = 3;

/// Which unitary set to average over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TwirlGroup {
    Pauli,
    Permutation,
    Both,
}

/// Pauli twirl: returns the Pauli channel whose probabilities are the diagonal
/// of the process matrix of `ch`.
pub fn pauli_twirl(ch: &GeneralChannel, dense_cap: usize) -> Result<PauliChannel> {
    chi_diagonal(ch, dense_cap)
}

/// Permutation twirl of a Pauli channel: qubit permutations act transitively
/// within each weight class, so the twirl collapses probabilities onto class
/// masses.
pub fn permutation_twirl(ch: &PauliChannel) -> PipChannel {
    let masses = ch.terms().map(|(op, p)| (op.weight_class(), p));
    PipChannel::from_class_masses(ch.n_qubits(), masses)
        .expect("class masses of a valid Pauli channel form a valid simplex")
}

/// Pauli twirl followed by permutation twirl.
pub fn pip_twirl(ch: &GeneralChannel, dense_cap: usize) -> Result<PipChannel> {
    Ok(permutation_twirl(&pauli_twirl(ch, dense_cap)?))
}

/// All unitaries of the requested twirl group as dense matrices. The identity
/// is always the first element.
pub fn twirl_group_unitaries(n: usize, group: TwirlGroup) -> Result<Vec<DMatrix<Complex64>>> {
    let paulis = || -> Result<Vec<DMatrix<Complex64>>> {
        Ok(enumerate_all(n)?.iter().map(pauli_matrix).collect())
    };
    let perms = || -> Vec<DMatrix<Complex64>> {
        permutations(n)
            .into_iter()
            .map(|perm| permutation_matrix(n, &perm))
            .collect()
    };
    let unitaries = match group {
        TwirlGroup::Pauli => paulis()?,
        TwirlGroup::Permutation => perms(),
        TwirlGroup::Both => {
            let ps = paulis()?;
            let ws = perms();
            let mut out = Vec::with_capacity(ps.len() * ws.len());
            for w in &ws {
                for p in &ps {
                    out.push(w * p);
                }
            }
            out
        }
    };
    Ok(unitaries)
}

/// Explicit uniform group average with Kraus set {U A_k U† / √|G|}.
///
/// Test oracle only: the Kraus list grows by a factor of |G| and no reduction
/// is attempted.
pub fn brute_force_twirl(ch: &GeneralChannel, group: TwirlGroup) -> Result<GeneralChannel> {
    let n = ch.n_qubits();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let unitaries = twirl_group_unitaries(n, group)?;
    let scale = Complex64::new(1.0 / (unitaries.len() as f64).sqrt(), 0.0);
    let mut kraus = Vec::with_capacity(unitaries.len() * ch.kraus().len());
    for u in &unitaries {
        let u_dag = u.adjoint();
        for a in ch.kraus() {
            kraus.push(u * a * &u_dag * scale);
        }
    }
    GeneralChannel::new(n, kraus)
}

/// All permutations of 0..n in a deterministic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    rec(&mut items, 0, &mut out);
    out
}

/// Dense matrix of the unitary that relabels qubit q as perm[q].
pub fn permutation_matrix(n: usize, perm: &[usize]) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let mut out = DMatrix::zeros(dim, dim);
    for basis in 0..dim {
        let mut image = 0usize;
        for q in 0..n {
            // Qubit q+1 occupies index bit n−1−q.
            let bit = (basis >> (n - 1 - q)) & 1;
            image |= bit << (n - 1 - perm[q]);
        }
        out[(image, basis)] = Complex64::new(1.0, 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::DEFAULT_DENSE_CAP;
    use crate::pauli::{PauliOp, WeightClass};

    fn p(text: &str) -> PauliOp {
        text.parse().unwrap()
    }

    #[test]
    fn pauli_twirl_of_identity_is_a_point_mass() {
        let twirled = pauli_twirl(&GeneralChannel::identity(2), DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(twirled.support_len(), 1);
        assert!((twirled.probability(&p("II")) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permutation_twirl_sums_class_masses() {
        let ch = PauliChannel::new(2, [(p("II"), 0.6), (p("XI"), 0.3), (p("IX"), 0.1)]).unwrap();
        let pip = permutation_twirl(&ch);
        assert!((pip.value_of(&WeightClass::new(0, 0, 0)).unwrap() - 0.6).abs() < 1e-15);
        assert!((pip.value_of(&WeightClass::new(1, 0, 0)).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn permutation_twirl_of_singleton_classes() {
        let ch = PauliChannel::new(2, [(p("II"), 0.5), (p("ZZ"), 0.5)]).unwrap();
        let pip = permutation_twirl(&ch);
        assert!((pip.value_of(&WeightClass::new(0, 0, 0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((pip.value_of(&WeightClass::new(0, 0, 2)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn permutation_twirl_is_idempotent_on_uniform_inputs() {
        let ch = PauliChannel::new(
            2,
            [(p("II"), 0.4), (p("XY"), 0.3), (p("YX"), 0.3)],
        )
        .unwrap();
        let pip = permutation_twirl(&ch);
        let again = permutation_twirl(&pip.to_pauli_channel().unwrap());
        assert_eq!(pip.values(), again.values());
    }

    #[test]
    fn twirl_groups_contain_the_identity_first() {
        for group in [TwirlGroup::Pauli, TwirlGroup::Permutation, TwirlGroup::Both] {
            for n in 1..=2 {
                let unitaries = twirl_group_unitaries(n, group).unwrap();
                let dim = 1usize << n;
                let eye = DMatrix::<Complex64>::identity(dim, dim);
                assert_eq!(unitaries[0], eye);
            }
        }
    }

    #[test]
    fn brute_force_twirl_of_identity_channel_is_identity() {
        for group in [TwirlGroup::Pauli, TwirlGroup::Permutation, TwirlGroup::Both] {
            let twirled = brute_force_twirl(&GeneralChannel::identity(2), group).unwrap();
            let defect = (twirled.superoperator()
                - GeneralChannel::identity(2).superoperator())
            .norm();
            assert!(defect < 1e-12);
        }
    }

    #[test]
    fn brute_force_cap_is_reported() {
        let err = brute_force_twirl(&GeneralChannel::identity(4), TwirlGroup::Pauli);
        assert!(matches!(err, Err(Error::BruteForceCap { .. })));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }
}
