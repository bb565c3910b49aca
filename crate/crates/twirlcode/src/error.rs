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

use crate::pauli::{WeightClass, MAX_QUBITS};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("invalid Pauli letter {letter:?} (expected I, X, Y or Z)")]
    BadPauliLetter { letter: char },

    #[error("qubit count {0} out of range (1..={MAX_QUBITS})")]
    QubitCountOutOfRange(usize),

    #[error("mask has bits outside the {n}-qubit range")]
    MaskOutOfRange { n: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndexOutOfRange { index: usize, n: usize },

    #[error("operator size mismatch: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),

    #[error("weight class {class} does not fit on {n} qubits")]
    ClassTooHeavy { class: WeightClass, n: usize },

    #[error("channel validation failed: {0}")]
    Validation(String),

    #[error("dense-simulation cap exceeded: n = {n} qubits > cap {cap}")]
    DenseCap { n: usize, cap: usize },

    #[error("fixed-set expansion cap exceeded: n = {n} qubits > cap {cap}")]
    ExpansionCap { n: usize, cap: usize },

    #[error("omega-matrix construction cap exceeded: n = {n} qubits > cap {cap}")]
    OmegaCap { n: usize, cap: usize },

    #[error("brute-force twirl cap exceeded: n = {n} qubits > cap {cap}")]
    BruteForceCap { n: usize, cap: usize },

    #[error(
        "eigenvalue vector is not realizable as a probability vector \
         (probabilities span [{min:.3e}, {max:.3e}])"
    )]
    EigenNotRealizable { min: f64, max: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("sign pattern not realizable by a logical Pauli: {0}")]
    InconsistentSigns(String),

    #[error("triplet operators are not symplectically independent: {0}")]
    DependentTriplets(String),

    #[error("sample count must be at least 2")]
    TooFewSamples,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for refusals caused by a configured resource cap.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::DenseCap { .. }
                | Error::ExpansionCap { .. }
                | Error::OmegaCap { .. }
                | Error::BruteForceCap { .. }
        )
    }

    /// True for errors caused by invalid input data (parse or validation).
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::EmptyPauli
                | Error::BadPauliLetter { .. }
                | Error::QubitCountOutOfRange(_)
                | Error::MaskOutOfRange { .. }
                | Error::QubitIndexOutOfRange { .. }
                | Error::SizeMismatch(_, _)
                | Error::ClassTooHeavy { .. }
                | Error::Validation(_)
                | Error::EigenNotRealizable { .. }
                | Error::Json(_)
        )
    }
}
