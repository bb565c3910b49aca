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

//! Channel data models and exact small-n representation conversions.
//!
//! Three representations with increasing structure:
//!
//! - [`GeneralChannel`]: a dense Choi-Kraus operator list, for exact small-n work.
//! - [`PauliChannel`]: a sparse probability per phaseless Pauli operator; the
//!   result of a Pauli twirl (the diagonal of the process matrix).
//! - [`PipChannel`]: one real number per weight class, in the probability or the
//!   eigenvalue picture; the result of adding a qubit-permutation twirl.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{enumerate_all, enumerate_class, PauliOp, WeightClass};
use crate::weight::{ClassIndex, OmegaMatrix};

/// Frobenius tolerance on Σ A†A − 1 for trace preservation.
pub const TP_TOL: f64 = 1e-9;
/// Tolerance on |Σp − 1| for probability normalization.
pub const PROB_SUM_TOL: f64 = 1e-9;
/// Negative probabilities above this magnitude are rejected as genuinely
/// non-CP rather than clamped as numerical noise.
pub const PROB_CLAMP: f64 = 1e-12;
/// Simplex-membership tolerance for class probability vectors.
pub const SIMPLEX_TOL: f64 = 1e-9;
/// Allowed slack on eigenvalue magnitudes and on the identity-class eigenvalue.
pub const EIGEN_RANGE_TOL: f64 = 1e-9;
/// Default qubit cap for anything that materializes 2^n-dimensional matrices.
pub const DEFAULT_DENSE_CAP: usize = 5;
/// Qubit cap for expanding a class-labeled channel into individual Paulis.
pub const CLASS_EXPANSION_CAP: usize = 10;

/// Which of the two dual parameterizations a [`PipChannel`] carries.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rep {
    Prob,
    Eigen,
}

/// Non-mutating validation summary for any channel representation.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub kind: &'static str,
    pub tp_defect: Option<f64>,
    pub sum_defect: Option<f64>,
    pub min_prob: Option<f64>,
    pub max_abs_eigen: Option<f64>,
    pub identity_eigen_defect: Option<f64>,
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.is_valid() {
            format!("{} channel valid", self.kind)
        } else {
            format!("{} channel invalid: {}", self.kind, self.issues.join("; "))
        }
    }
}

/// Channels that assign an exact eigenvalue to every phaseless Pauli operator.
pub trait PauliEigenvalues {
    fn n_qubits(&self) -> usize;

    /// λ(q): the factor by which the channel scales the Pauli observable `q`.
    fn eigenvalue(&self, q: &PauliOp) -> Result<f64>;
}

// ---------------------------------------------------------------------------
// Dense Pauli matrices
// ---------------------------------------------------------------------------

/// Reverses the low `n` bits of a mask. Qubit 1 is the leftmost tensor factor
/// and therefore the most significant index bit of a dense matrix.
fn index_mask(mask: u64, n: usize) -> u64 {
    let mut out = 0u64;
    for q in 0..n {
        if mask >> q & 1 == 1 {
            out |= 1 << (n - 1 - q);
        }
    }
    out
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Dense 2^n × 2^n matrix of a Pauli operator, phase included.
pub fn pauli_matrix(p: &PauliOp) -> DMatrix<Complex64> {
    let n = p.n_qubits();
    let dim = 1usize << n;
    let x = index_mask(p.x_mask(), n) as usize;
    let z = index_mask(p.z_mask(), n) as usize;
    let phase = i_pow(p.phase_exp());
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let sign = if ((col & z).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        out[(col ^ x, col)] = phase * sign;
    }
    out
}

/// tr(P · A) in O(2^n), using the monomial structure of the Pauli matrix.
pub fn pauli_trace_product(p: &PauliOp, a: &DMatrix<Complex64>) -> Complex64 {
    let n = p.n_qubits();
    let dim = 1usize << n;
    debug_assert_eq!(a.nrows(), dim);
    let x = index_mask(p.x_mask(), n) as usize;
    let z = index_mask(p.z_mask(), n) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for col in 0..dim {
        let sign = if ((col & z).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        acc += a[(col, col ^ x)] * sign;
    }
    acc * i_pow(p.phase_exp())
}

/// Applies a Pauli operator to a state vector in place-free form.
pub fn pauli_apply_state(p: &PauliOp, state: &[Complex64]) -> Vec<Complex64> {
    let n = p.n_qubits();
    let dim = 1usize << n;
    debug_assert_eq!(state.len(), dim);
    let x = index_mask(p.x_mask(), n) as usize;
    let z = index_mask(p.z_mask(), n) as usize;
    let phase = i_pow(p.phase_exp());
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for col in 0..dim {
        let sign = if ((col & z).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        out[col ^ x] = phase * sign * state[col];
    }
    out
}

// ---------------------------------------------------------------------------
// GeneralChannel
// ---------------------------------------------------------------------------

/// A completely positive trace-preserving map given by dense Choi-Kraus
/// operators.
#[derive(Clone, Debug)]
pub struct GeneralChannel {
    n_qubits: usize,
    kraus: Vec<DMatrix<Complex64>>,
}

/// Report for raw Kraus data: CP holds by construction, trace preservation is
/// measured.
pub fn validate_kraus(n: usize, kraus: &[DMatrix<Complex64>]) -> ValidationReport {
    let mut report = ValidationReport {
        kind: "kraus",
        ..Default::default()
    };
    let dim = 1usize << n;
    if kraus.is_empty() {
        report.issues.push("no Kraus operators".into());
        return report;
    }
    for (idx, op) in kraus.iter().enumerate() {
        if op.nrows() != dim || op.ncols() != dim {
            report.issues.push(format!(
                "Kraus operator {idx} is {}x{}, expected {dim}x{dim}",
                op.nrows(),
                op.ncols()
            ));
            return report;
        }
    }
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for op in kraus {
        acc += op.adjoint() * op;
    }
    let defect = (&acc - DMatrix::<Complex64>::identity(dim, dim)).norm();
    report.tp_defect = Some(defect);
    if defect > TP_TOL {
        report
            .issues
            .push(format!("trace preservation defect {defect:.3e} exceeds {TP_TOL:.0e}"));
    }
    report
}

impl GeneralChannel {
    pub fn new(n_qubits: usize, kraus: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let report = validate_kraus(n_qubits, &kraus);
        if !report.is_valid() {
            return Err(Error::Validation(report.summary()));
        }
        Ok(Self { n_qubits, kraus })
    }

    /// The identity channel.
    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            kraus: vec![DMatrix::identity(dim, dim)],
        }
    }

    /// A unitary channel ρ ↦ UρU†.
    pub fn from_unitary(n_qubits: usize, unitary: DMatrix<Complex64>) -> Result<Self> {
        Self::new(n_qubits, vec![unitary])
    }

    /// A random channel: a Haar-style isometry sliced into `kraus_count`
    /// operators, trace preserving by construction.
    pub fn random(n_qubits: usize, kraus_count: usize, rng: &mut impl rand::Rng) -> Self {
        let dim = 1usize << n_qubits;
        let tall = DMatrix::from_fn(dim * kraus_count, dim, |_, _| {
            Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        });
        let q = tall.qr().q();
        let kraus = (0..kraus_count)
            .map(|k| q.rows(k * dim, dim).into_owned())
            .collect();
        Self { n_qubits, kraus }
    }

    /// A probabilistic mixture of unitaries Σ q_m U_m ρ U_m†.
    pub fn mixture_of_unitaries(
        n_qubits: usize,
        terms: &[(f64, DMatrix<Complex64>)],
    ) -> Result<Self> {
        let kraus = terms
            .iter()
            .map(|(weight, u)| u * Complex64::new(weight.sqrt(), 0.0))
            .collect();
        Self::new(n_qubits, kraus)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn kraus(&self) -> &[DMatrix<Complex64>] {
        &self.kraus
    }

    pub fn validate(&self) -> ValidationReport {
        validate_kraus(self.n_qubits, &self.kraus)
    }

    /// Composition self ∘ other (other acts first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a * b);
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            kraus,
        })
    }

    /// Dense superoperator acting on column-stacked density matrices.
    pub fn superoperator(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut acc = DMatrix::zeros(dim * dim, dim * dim);
        for op in &self.kraus {
            let conj = op.map(|entry| entry.conj());
            acc += conj.kronecker(op);
        }
        acc
    }
}

/// The diagonal of the process matrix in the Pauli basis:
/// [χ]_PP = Σ_k |tr(P·A_k) / 2^n|². These are exactly the probabilities of the
/// Pauli-twirled channel.
pub fn chi_diagonal(ch: &GeneralChannel, dense_cap: usize) -> Result<PauliChannel> {
    let n = ch.n_qubits();
    if n > dense_cap {
        return Err(Error::DenseCap { n, cap: dense_cap });
    }
    let dim = ch.dim() as f64;
    let mut terms = Vec::new();
    for p in enumerate_all(n)? {
        let mut prob = 0.0;
        for op in ch.kraus() {
            let trace = pauli_trace_product(&p, op) / dim;
            prob += trace.norm_sqr();
        }
        if prob > 1e-14 {
            terms.push((p, prob));
        }
    }
    PauliChannel::new(n, terms)
}

// ---------------------------------------------------------------------------
// PauliChannel
// ---------------------------------------------------------------------------

/// A Pauli channel: a sparse probability distribution over phaseless Pauli
/// conjugations. Keys are canonical Hermitian representatives and iterate in
/// canonical lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    n_qubits: usize,
    probs: BTreeMap<PauliOp, f64>,
}

/// Report for raw (Pauli, probability) terms.
pub fn validate_pauli_terms(n: usize, terms: &[(PauliOp, f64)]) -> ValidationReport {
    let mut report = ValidationReport {
        kind: "pauli",
        ..Default::default()
    };
    let mut sum = 0.0;
    let mut min_prob = f64::INFINITY;
    for (op, prob) in terms {
        if op.n_qubits() != n {
            report
                .issues
                .push(format!("term {op} has {} qubits, expected {n}", op.n_qubits()));
            return report;
        }
        sum += prob;
        min_prob = min_prob.min(*prob);
    }
    report.sum_defect = Some((sum - 1.0).abs());
    report.min_prob = Some(min_prob);
    if min_prob < -PROB_CLAMP {
        report.issues.push(format!(
            "negative probability {min_prob:.3e} below the clamp threshold (non-CP input)"
        ));
    }
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        report.issues.push(format!(
            "probabilities sum to {sum}, defect {:.3e}",
            (sum - 1.0).abs()
        ));
    }
    report
}

impl PauliChannel {
    /// Builds a Pauli channel from (operator, probability) terms. Phases are
    /// stripped (conjugation is phase-blind), duplicate phaseless keys merge,
    /// and probabilities in [−1e−12, 0) are clamped to zero.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (PauliOp, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<PauliOp, f64> = BTreeMap::new();
        for (op, prob) in terms {
            *merged.entry(op.phaseless()).or_insert(0.0) += prob;
        }
        let terms: Vec<(PauliOp, f64)> = merged.iter().map(|(op, p)| (*op, *p)).collect();
        let report = validate_pauli_terms(n_qubits, &terms);
        if !report.is_valid() {
            return Err(Error::Validation(report.summary()));
        }
        let probs = merged
            .into_iter()
            .map(|(op, p)| (op, p.max(0.0)))
            .filter(|(_, p)| *p > 0.0)
            .collect();
        Ok(Self { n_qubits, probs })
    }

    /// The identity channel: a point mass on the identity operator.
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, [(PauliOp::identity(n_qubits)?, 1.0)])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn probability(&self, op: &PauliOp) -> f64 {
        self.probs.get(&op.phaseless()).copied().unwrap_or(0.0)
    }

    /// Support terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliOp, f64)> {
        self.probs.iter().map(|(op, p)| (op, *p))
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn validate(&self) -> ValidationReport {
        let terms: Vec<_> = self.probs.iter().map(|(op, p)| (*op, *p)).collect();
        validate_pauli_terms(self.n_qubits, &terms)
    }

    /// Composition self ∘ other: probabilities convolve under phaseless
    /// operator multiplication.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        let mut merged: BTreeMap<PauliOp, f64> = BTreeMap::new();
        for (a, pa) in self.terms() {
            for (b, pb) in other.terms() {
                let key = a.multiply(b)?.phaseless();
                *merged.entry(key).or_insert(0.0) += pa * pb;
            }
        }
        Self::new(self.n_qubits, merged)
    }

    /// Embeds the channel as dense Kraus operators {√p · P}.
    pub fn to_general(&self, dense_cap: usize) -> Result<GeneralChannel> {
        let n = self.n_qubits;
        if n > dense_cap {
            return Err(Error::DenseCap { n, cap: dense_cap });
        }
        let kraus = self
            .terms()
            .map(|(op, p)| pauli_matrix(op) * Complex64::new(p.sqrt(), 0.0))
            .collect();
        GeneralChannel::new(n, kraus)
    }
}

impl PauliEigenvalues for PauliChannel {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// λ(q) = Σ_P p(P) · ε(P, q) with ε = +1 for commuting and −1 for
    /// anticommuting pairs.
    fn eigenvalue(&self, q: &PauliOp) -> Result<f64> {
        if q.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch(q.n_qubits(), self.n_qubits));
        }
        let mut acc = 0.0;
        for (op, p) in self.terms() {
            if op.commutes(q)? {
                acc += p;
            } else {
                acc -= p;
            }
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// PipChannel
// ---------------------------------------------------------------------------

/// A permutation-invariant Pauli channel: one real value per weight class in
/// canonical class order, in either the probability or eigenvalue picture.
#[derive(Clone, Debug, PartialEq)]
pub struct PipChannel {
    n_qubits: usize,
    rep: Rep,
    values: Vec<f64>,
}

/// Report for a raw class-value vector in the given representation.
pub fn validate_pip(n: usize, rep: Rep, values: &[f64]) -> ValidationReport {
    let mut report = ValidationReport {
        kind: "pip",
        ..Default::default()
    };
    let expected = match crate::weight::class_count(n) {
        Ok(k) => k,
        Err(err) => {
            report.issues.push(err.to_string());
            return report;
        }
    };
    if values.len() != expected {
        report.issues.push(format!(
            "expected {expected} class values for n = {n}, got {}",
            values.len()
        ));
        return report;
    }
    match rep {
        Rep::Prob => {
            let sum: f64 = values.iter().sum();
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            report.sum_defect = Some((sum - 1.0).abs());
            report.min_prob = Some(min);
            if min < -SIMPLEX_TOL {
                report
                    .issues
                    .push(format!("class probability {min:.3e} below zero"));
            }
            if (sum - 1.0).abs() > PROB_SUM_TOL {
                report.issues.push(format!(
                    "class probabilities sum to {sum}, defect {:.3e}",
                    (sum - 1.0).abs()
                ));
            }
        }
        Rep::Eigen => {
            let max_abs = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            report.max_abs_eigen = Some(max_abs);
            report.identity_eigen_defect = Some((values[0] - 1.0).abs());
            if max_abs > 1.0 + EIGEN_RANGE_TOL {
                report
                    .issues
                    .push(format!("eigenvalue magnitude {max_abs} exceeds 1"));
            }
            if (values[0] - 1.0).abs() > EIGEN_RANGE_TOL {
                report.issues.push(format!(
                    "identity-class eigenvalue is {}, must be 1",
                    values[0]
                ));
            }
        }
    }
    report
}

impl PipChannel {
    pub fn new(n_qubits: usize, rep: Rep, values: Vec<f64>) -> Result<Self> {
        let report = validate_pip(n_qubits, rep, &values);
        if !report.is_valid() {
            return Err(Error::Validation(report.summary()));
        }
        Ok(Self {
            n_qubits,
            rep,
            values,
        })
    }

    /// Builds a probability-representation channel from sparse class masses;
    /// unlisted classes get zero.
    pub fn from_class_masses(
        n_qubits: usize,
        masses: impl IntoIterator<Item = (WeightClass, f64)>,
    ) -> Result<Self> {
        let index = ClassIndex::new(n_qubits)?;
        let mut values = vec![0.0; index.len()];
        for (class, mass) in masses {
            let idx = index
                .index_of(&class)
                .ok_or(Error::ClassTooHeavy { class, n: n_qubits })?;
            values[idx] += mass;
        }
        Self::new(n_qubits, Rep::Prob, values)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn class_index(&self) -> ClassIndex {
        ClassIndex::new(self.n_qubits).expect("validated at construction")
    }

    pub fn value_of(&self, class: &WeightClass) -> Option<f64> {
        let index = self.class_index();
        index.index_of(class).map(|idx| self.values[idx])
    }

    pub fn validate(&self) -> ValidationReport {
        validate_pip(self.n_qubits, self.rep, &self.values)
    }

    /// Converts to the eigenvalue picture (identity if already there).
    pub fn to_eigen(&self) -> Result<Self> {
        match self.rep {
            Rep::Eigen => Ok(self.clone()),
            Rep::Prob => {
                let omega = OmegaMatrix::build(self.n_qubits)?;
                let eigen = omega.eigen_from_prob(&self.values)?;
                Self::new(self.n_qubits, Rep::Eigen, eigen)
            }
        }
    }

    /// Converts to the probability picture (identity if already there).
    /// Solving the linear system can reveal that the eigenvalue vector is not
    /// realizable by any probability vector, which is reported as a distinct
    /// error from numerical failure.
    pub fn to_prob(&self) -> Result<Self> {
        match self.rep {
            Rep::Prob => Ok(self.clone()),
            Rep::Eigen => {
                let omega = OmegaMatrix::build(self.n_qubits)?;
                let probs = omega.prob_from_eigen(&self.values, SIMPLEX_TOL)?;
                // Numerical slack may leave tiny negatives; clamp and fold the
                // correction into the identity class to preserve the sum.
                let mut cleaned = probs;
                let mut correction = 0.0;
                for value in cleaned.iter_mut().skip(1) {
                    if *value < 0.0 {
                        correction += *value;
                        *value = 0.0;
                    }
                }
                cleaned[0] += correction;
                Self::new(self.n_qubits, Rep::Prob, cleaned)
            }
        }
    }

    pub fn convert(&self, target: Rep) -> Result<Self> {
        match target {
            Rep::Prob => self.to_prob(),
            Rep::Eigen => self.to_eigen(),
        }
    }

    /// Expands class masses into an explicit Pauli channel, spreading each
    /// class mass uniformly over its members.
    pub fn to_pauli_channel(&self) -> Result<PauliChannel> {
        let n = self.n_qubits;
        if n > CLASS_EXPANSION_CAP {
            return Err(Error::ExpansionCap {
                n,
                cap: CLASS_EXPANSION_CAP,
            });
        }
        let prob = self.to_prob()?;
        let index = prob.class_index();
        let mut terms = Vec::new();
        for (idx, &mass) in prob.values.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let class = index.class_at(idx);
            let members = enumerate_class(n, class)?;
            let share = mass / members.len() as f64;
            terms.extend(members.into_iter().map(|op| (op, share)));
        }
        PauliChannel::new(n, terms)
    }

    /// Composition self ∘ other: eigenvalues multiply elementwise.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        let a = self.to_eigen()?;
        let b = other.to_eigen()?;
        let values = a
            .values
            .iter()
            .zip(b.values.iter())
            .map(|(x, y)| x * y)
            .collect();
        Self::new(self.n_qubits, Rep::Eigen, values)
    }
}

impl PauliEigenvalues for PipChannel {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Equals the eigenvalue-representation entry of the weight class of `q`.
    fn eigenvalue(&self, q: &PauliOp) -> Result<f64> {
        if q.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch(q.n_qubits(), self.n_qubits));
        }
        let eigen = self.to_eigen()?;
        let class = q.weight_class();
        eigen
            .value_of(&class)
            .ok_or(Error::ClassTooHeavy { class, n: self.n_qubits })
    }
}

/// Converts a class-parameterized channel between its two pictures.
pub fn convert_representation(ch: &PipChannel, target: Rep) -> Result<PipChannel> {
    ch.convert(target)
}
