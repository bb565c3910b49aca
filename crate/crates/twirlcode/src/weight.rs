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

//! The polynomial-size parameter space of permutation-invariant Pauli channels.
//!
//! Channels twirled over the Pauli group and all qubit permutations are fully
//! described by one real number per weight class, in either of two dual
//! pictures: a probability per class or an eigenvalue per class. The two are
//! related by the linear invertible map computed here ([`OmegaMatrix`]).
//!
//! The omega entry for applied class `v` and observed class `w` is
//!
//! ```text
//!     Ω[v, w] = 1 − 2·A(v, w) / |class v|
//! ```
//!
//! where `A(v, w)` counts the members of class `v` that anticommute with a
//! fixed representative of class `w`. By permutation invariance the count does
//! not depend on the chosen representative, and the normalization by the class
//! size makes the entry the exact average conjugation sign, which is what the
//! brute-force oracle measures.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{binomial, enumerate_class, WeightClass};

/// Largest qubit count for which an omega matrix will be constructed.
pub const OMEGA_CAP: usize = 12;

/// Class-size threshold below which anticommutation counts are obtained by
/// direct enumeration; larger classes use the per-block counting argument.
const ENUMERATION_LIMIT: u128 = 1 << 20;

/// Number of weight classes on `n` qubits: K_n = (n+1)(n+2)(n+3)/6, the number
/// of triples (w_x, w_y, w_z) with total weight at most n.
pub fn class_count(n: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::QubitCountOutOfRange(n));
    }
    Ok((n + 1) * (n + 2) * (n + 3) / 6)
}

/// The canonical ordering of all weight classes for a given qubit count, with
/// lookup in both directions.
///
/// The order is total and deterministic: ascending total weight, then w_x,
/// then w_y, then w_z. Serialized artifacts always carry explicit class labels
/// so this order stays an internal detail.
#[derive(Clone, Debug)]
pub struct ClassIndex {
    n: usize,
    classes: Vec<WeightClass>,
    positions: HashMap<WeightClass, usize>,
}

impl ClassIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::QubitCountOutOfRange(n));
        }
        let mut classes = Vec::with_capacity(class_count(n)?);
        for x in 0..=n {
            for y in 0..=(n - x) {
                for z in 0..=(n - x - y) {
                    classes.push(WeightClass::new(x, y, z));
                }
            }
        }
        classes.sort();
        let positions = classes
            .iter()
            .enumerate()
            .map(|(idx, class)| (*class, idx))
            .collect();
        Ok(Self {
            n,
            classes,
            positions,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[WeightClass] {
        &self.classes
    }

    pub fn class_at(&self, idx: usize) -> WeightClass {
        self.classes[idx]
    }

    pub fn index_of(&self, class: &WeightClass) -> Option<usize> {
        self.positions.get(class).copied()
    }
}

/// Number of phaseless Pauli operators in class `v` that anticommute with one
/// fixed canonical representative of class `w` (X letters first, then Y, then
/// Z, then identities). Permutation invariance makes the count independent of
/// the representative.
pub fn anticommute_count(n: usize, v: WeightClass, w: WeightClass) -> Result<u128> {
    let size_v = v.size(n)?;
    if !w.valid_for(n) {
        return Err(Error::ClassTooHeavy { class: w, n });
    }
    let signed = if size_v <= ENUMERATION_LIMIT {
        signed_sum_by_enumeration(n, v, w)?
    } else {
        signed_sum_by_counting(n, v, w)
    };
    Ok(((size_v as i128 - signed) / 2) as u128)
}

/// Sum over class-`v` members of +1 for commuting / −1 for anticommuting with
/// the class-`w` representative, by direct enumeration.
fn signed_sum_by_enumeration(n: usize, v: WeightClass, w: WeightClass) -> Result<i128> {
    let rep = w.representative(n)?;
    let mut signed: i128 = 0;
    for op in enumerate_class(n, v)? {
        if op.commutes(&rep).expect("equal sizes") {
            signed += 1;
        } else {
            signed -= 1;
        }
    }
    Ok(signed)
}

/// Same signed sum through a per-block counting argument, polynomial in n.
///
/// Partition the qubits by the representative's letter into an X block, a Y
/// block, a Z block and an identity block. A class-`v` member is an assignment
/// of its letters to the blocks; within a block of letter L every non-identity
/// letter other than L contributes one anticommuting position. Each block
/// therefore carries a sign-weighted generating polynomial in three variables
/// (one per letter of `v`), and the signed sum is one coefficient of the
/// four-block product.
fn signed_sum_by_counting(n: usize, v: WeightClass, w: WeightClass) -> i128 {
    let total_w = w.total();
    let blocks = [
        (w.x, BlockKind::X),
        (w.y, BlockKind::Y),
        (w.z, BlockKind::Z),
        (n - total_w, BlockKind::Identity),
    ];
    let mut product = TriPoly::one(n);
    for (size, kind) in blocks {
        if size == 0 {
            continue;
        }
        product = product.multiply(&TriPoly::block(n, size, kind));
    }
    product.coefficient(v.x, v.y, v.z)
}

#[derive(Clone, Copy)]
enum BlockKind {
    X,
    Y,
    Z,
    Identity,
}

/// Polynomial in three variables with signed integer coefficients, truncated
/// to total degree `n`.
struct TriPoly {
    n: usize,
    coeffs: Vec<i128>,
}

impl TriPoly {
    fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        (x * (self.n + 1) + y) * (self.n + 1) + z
    }

    fn one(n: usize) -> Self {
        let mut poly = Self {
            n,
            coeffs: vec![0; (n + 1) * (n + 1) * (n + 1)],
        };
        let at = poly.idx(0, 0, 0);
        poly.coeffs[at] = 1;
        poly
    }

    fn block(n: usize, size: usize, kind: BlockKind) -> Self {
        let mut poly = Self {
            n,
            coeffs: vec![0; (n + 1) * (n + 1) * (n + 1)],
        };
        for qx in 0..=size {
            for qy in 0..=(size - qx) {
                for qz in 0..=(size - qx - qy) {
                    let arrangements = (binomial(size, qx)
                        * binomial(size - qx, qy)
                        * binomial(size - qx - qy, qz)) as i128;
                    let conflicts = match kind {
                        BlockKind::X => qy + qz,
                        BlockKind::Y => qx + qz,
                        BlockKind::Z => qx + qy,
                        BlockKind::Identity => 0,
                    };
                    let signed = if conflicts % 2 == 0 {
                        arrangements
                    } else {
                        -arrangements
                    };
                    let at = poly.idx(qx, qy, qz);
                    poly.coeffs[at] = signed;
                }
            }
        }
        poly
    }

    fn multiply(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self {
            n,
            coeffs: vec![0; (n + 1) * (n + 1) * (n + 1)],
        };
        for ax in 0..=n {
            for ay in 0..=(n - ax) {
                for az in 0..=(n - ax - ay) {
                    let a = self.coeffs[self.idx(ax, ay, az)];
                    if a == 0 {
                        continue;
                    }
                    for bx in 0..=(n - ax - ay - az) {
                        for by in 0..=(n - ax - ay - az - bx) {
                            for bz in 0..=(n - ax - ay - az - bx - by) {
                                let b = other.coeffs[other.idx(bx, by, bz)];
                                if b == 0 {
                                    continue;
                                }
                                let at = out.idx(ax + bx, ay + by, az + bz);
                                out.coeffs[at] += a * b;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn coefficient(&self, x: usize, y: usize, z: usize) -> i128 {
        if x + y + z > self.n {
            return 0;
        }
        self.coeffs[self.idx(x, y, z)]
    }
}

/// The linear invertible map between the probability and eigenvalue
/// descriptions of a permutation-invariant Pauli channel.
///
/// Rows index the applied class `v`, columns the observed class `w`, both in
/// [`ClassIndex`] order. Every entry is an exact ratio of integers evaluated
/// in one division, so small-n entries match the brute-force conjugation
/// average bit for bit.
#[derive(Clone, Debug)]
pub struct OmegaMatrix {
    index: ClassIndex,
    entries: DMatrix<f64>,
}

impl OmegaMatrix {
    /// Builds the matrix for `n` qubits. Enumeration backs the counts up to
    /// n = 6; beyond that the per-block counting argument is used. Refuses
    /// n > [`OMEGA_CAP`].
    pub fn build(n: usize) -> Result<Self> {
        if n > OMEGA_CAP {
            return Err(Error::OmegaCap { n, cap: OMEGA_CAP });
        }
        let index = ClassIndex::new(n)?;
        let k = index.len();
        let classes = index.classes().to_vec();
        let sizes: Vec<i128> = classes
            .iter()
            .map(|class| class.size(n).expect("valid class") as i128)
            .collect();

        let rows: Vec<Vec<f64>> = if n <= 6 {
            // Enumerate each applied class once, then test it against every
            // observed representative.
            let reps: Vec<_> = classes
                .iter()
                .map(|w| w.representative(n).expect("valid class"))
                .collect();
            classes
                .par_iter()
                .zip(sizes.par_iter())
                .map(|(v, &size_v)| {
                    let members = enumerate_class(n, *v).expect("valid class");
                    reps.iter()
                        .map(|rep| {
                            let mut signed: i128 = 0;
                            for member in &members {
                                if member.commutes(rep).expect("equal sizes") {
                                    signed += 1;
                                } else {
                                    signed -= 1;
                                }
                            }
                            signed as f64 / size_v as f64
                        })
                        .collect()
                })
                .collect()
        } else {
            // One block-polynomial product per observed class yields the
            // signed sums for every applied class at once.
            let columns: Vec<Vec<i128>> = classes
                .par_iter()
                .map(|w| {
                    let total_w = w.total();
                    let blocks = [
                        (w.x, BlockKind::X),
                        (w.y, BlockKind::Y),
                        (w.z, BlockKind::Z),
                        (n - total_w, BlockKind::Identity),
                    ];
                    let mut product = TriPoly::one(n);
                    for (size, kind) in blocks {
                        if size == 0 {
                            continue;
                        }
                        product = product.multiply(&TriPoly::block(n, size, kind));
                    }
                    classes
                        .iter()
                        .map(|v| product.coefficient(v.x, v.y, v.z))
                        .collect()
                })
                .collect();
            (0..k)
                .map(|v_idx| {
                    (0..k)
                        .map(|w_idx| columns[w_idx][v_idx] as f64 / sizes[v_idx] as f64)
                        .collect()
                })
                .collect()
        };

        let entries = DMatrix::from_fn(k, k, |v_idx, w_idx| rows[v_idx][w_idx]);
        Ok(Self { index, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.index.n_qubits()
    }

    pub fn class_index(&self) -> &ClassIndex {
        &self.index
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Entry for applied class `v` and observed class `w`.
    pub fn entry(&self, v: &WeightClass, w: &WeightClass) -> Option<f64> {
        let row = self.index.index_of(v)?;
        let col = self.index.index_of(w)?;
        Some(self.entries[(row, col)])
    }

    /// Maps a probability vector (ClassIndex order) to the eigenvalue vector.
    pub fn eigen_from_prob(&self, probs: &[f64]) -> Result<Vec<f64>> {
        let k = self.index.len();
        if probs.len() != k {
            return Err(Error::SizeMismatch(probs.len(), k));
        }
        let p = nalgebra::DVector::from_column_slice(probs);
        let lambda = self.entries.transpose() * p;
        Ok(lambda.iter().copied().collect())
    }

    /// Solves for the probability vector reproducing the given eigenvalues.
    ///
    /// Uses a dense LU factorization with partial pivoting. Eigenvalue vectors
    /// whose solution leaves the probability simplex by more than `simplex_tol`
    /// are rejected as inconsistent, which is a distinct condition from a
    /// numerically singular system.
    pub fn prob_from_eigen(&self, eigen: &[f64], simplex_tol: f64) -> Result<Vec<f64>> {
        let k = self.index.len();
        if eigen.len() != k {
            return Err(Error::SizeMismatch(eigen.len(), k));
        }
        let rhs = nalgebra::DVector::from_column_slice(eigen);
        let lu = self.entries.transpose().lu();
        let solution = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("omega system is singular".into()))?;
        let min = solution.iter().copied().fold(f64::INFINITY, f64::min);
        let max = solution.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if min < -simplex_tol || max > 1.0 + simplex_tol {
            return Err(Error::EigenNotRealizable { min, max });
        }
        Ok(solution.iter().copied().collect())
    }

    /// 2-norm condition number, via singular values.
    pub fn condition_number(&self) -> f64 {
        let svd = self.entries.clone().svd(false, false);
        let max = svd.singular_values.max();
        let min = svd
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        max / min
    }

    pub fn inverse(&self) -> Option<DMatrix<f64>> {
        self.entries.clone().try_inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_enumeration() {
        let expected = [4, 10, 20, 35, 56, 84];
        for (n, want) in (1..=6).zip(expected) {
            assert_eq!(class_count(n).unwrap(), want);
            assert_eq!(ClassIndex::new(n).unwrap().len(), want);
        }
        for n in 7..=12 {
            let index = ClassIndex::new(n).unwrap();
            assert_eq!(index.len(), class_count(n).unwrap());
        }
        assert!(class_count(0).is_err());
    }

    #[test]
    fn class_order_is_by_total_weight_then_components() {
        let index = ClassIndex::new(1).unwrap();
        assert_eq!(
            index.classes(),
            &[
                WeightClass::new(0, 0, 0),
                WeightClass::new(0, 0, 1),
                WeightClass::new(0, 1, 0),
                WeightClass::new(1, 0, 0),
            ]
        );
        for n in 1..=5 {
            let index = ClassIndex::new(n).unwrap();
            for (idx, class) in index.classes().iter().enumerate() {
                assert_eq!(index.index_of(class), Some(idx));
            }
        }
    }

    #[test]
    fn anticommute_count_examples() {
        // X against Y on one qubit.
        assert_eq!(
            anticommute_count(1, WeightClass::new(1, 0, 0), WeightClass::new(0, 1, 0)).unwrap(),
            1
        );
        // Both XI and IX anticommute with ZZ.
        assert_eq!(
            anticommute_count(2, WeightClass::new(1, 0, 0), WeightClass::new(0, 0, 2)).unwrap(),
            2
        );
        // Everything commutes with the identity class.
        for n in 1..=4 {
            let index = ClassIndex::new(n).unwrap();
            for v in index.classes() {
                assert_eq!(
                    anticommute_count(n, *v, WeightClass::new(0, 0, 0)).unwrap(),
                    0
                );
            }
        }
    }

    #[test]
    fn counting_argument_matches_enumeration() {
        for n in 1..=5 {
            let index = ClassIndex::new(n).unwrap();
            for v in index.classes() {
                for w in index.classes() {
                    let by_enum = signed_sum_by_enumeration(n, *v, *w).unwrap();
                    let by_count = signed_sum_by_counting(n, *v, *w);
                    assert_eq!(by_enum, by_count, "n={n} v={v} w={w}");
                }
            }
        }
    }

    #[test]
    fn omega_identity_row_and_column_are_ones() {
        for n in 1..=4 {
            let omega = OmegaMatrix::build(n).unwrap();
            let identity = WeightClass::new(0, 0, 0);
            for w in omega.class_index().classes() {
                assert_eq!(omega.entry(&identity, w), Some(1.0));
                assert_eq!(omega.entry(w, &identity), Some(1.0));
            }
        }
    }

    #[test]
    fn omega_matrix_for_one_qubit() {
        let omega = OmegaMatrix::build(1).unwrap();
        // In any presentation order, distinct non-identity letters anticommute
        // and everything commutes with the identity.
        let classes = [
            WeightClass::new(0, 0, 0),
            WeightClass::new(1, 0, 0),
            WeightClass::new(0, 1, 0),
            WeightClass::new(0, 0, 1),
        ];
        for (i, v) in classes.iter().enumerate() {
            for (j, w) in classes.iter().enumerate() {
                let expected = if i == 0 || j == 0 || i == j { 1.0 } else { -1.0 };
                assert_eq!(omega.entry(v, w), Some(expected), "{v} vs {w}");
            }
        }
    }

    #[test]
    fn omega_entry_from_anticommute_example() {
        let omega = OmegaMatrix::build(2).unwrap();
        assert_eq!(
            omega.entry(&WeightClass::new(1, 0, 0), &WeightClass::new(0, 0, 2)),
            Some(-1.0)
        );
    }

    #[test]
    fn omega_entries_lie_in_unit_interval() {
        for n in 1..=5 {
            let omega = OmegaMatrix::build(n).unwrap();
            for value in omega.entries().iter() {
                assert!(*value >= -1.0 - 1e-15 && *value <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn omega_is_symmetric() {
        // With the class-size normalization the entry equals the probability
        // that random members of the two classes anticommute, which is
        // symmetric in the classes.
        for n in 1..=5 {
            let omega = OmegaMatrix::build(n).unwrap();
            let m = omega.entries();
            assert_eq!(m, &m.transpose());
        }
    }

    #[test]
    fn omega_inverse_roundtrips_to_identity() {
        for n in 1..=6 {
            let omega = OmegaMatrix::build(n).unwrap();
            let inv = omega.inverse().expect("invertible");
            let product = omega.entries() * inv;
            let k = omega.class_index().len();
            let eye = DMatrix::<f64>::identity(k, k);
            let defect = (product - eye).norm();
            assert!(defect < 1e-10, "n={n} defect={defect:e}");
        }
    }

    #[test]
    fn omega_cap_is_reported() {
        assert!(matches!(
            OmegaMatrix::build(OMEGA_CAP + 1),
            Err(Error::OmegaCap { .. })
        ));
    }
}
