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

//! Channel twirling and the search for noiseless and unitarily correctable
//! qubit encodings.
//!
//! Averaging a noisy channel under conjugation by the Pauli group and by all
//! qubit permutations leaves a channel described by one real parameter per
//! weight class — polynomially many numbers instead of exponentially many.
//! Those parameters are enough to find encodings the noise cannot touch:
//! Pauli observables with unit-magnitude eigenvalues group into su(2) triplets,
//! each triplet is one protected qubit, and the encoding unitary is a Clifford
//! circuit. Any encoding correctable for the twirled channel is correctable
//! for the original channel, which the dense simulation layer checks directly
//! at small qubit counts.
//!
//! # Module map
//!
//! - [`pauli`]: exact symplectic Pauli algebra (masks + phase).
//! - [`weight`]: weight-class order, counting, and the Ω matrix between the
//!   probability and eigenvalue pictures.
//! - [`channel`]: Kraus / Pauli / class-parameterized channel models and
//!   conversions.
//! - [`twirl`]: Pauli and permutation twirls plus the brute-force oracle.
//! - [`codes`]: fixed-point classes, operator expansion, greedy su(2) triplet
//!   search.
//! - [`clifford`]: phase-exact conjugation, encoder synthesis, Pauli recovery.
//! - [`verify`]: density matrices, logical-channel extraction, average gate
//!   fidelity, Monte Carlo eigenvalue estimation.
//! - [`io`]: JSON documents for channels, reports and circuits.

pub mod channel;
pub mod clifford;
pub mod codes;
pub mod error;
pub mod io;
pub mod pauli;
pub mod twirl;
pub mod verify;
pub mod weight;

pub use channel::{
    chi_diagonal, convert_representation, GeneralChannel, PauliChannel, PauliEigenvalues,
    PipChannel, Rep, ValidationReport,
};
pub use clifford::{
    synthesize_encoder, synthesize_recovery, synthesize_recovery_from_report, CliffordCircuit,
    Gate,
};
pub use codes::{
    expand_fixed_set, find_codes, find_triplets, fixed_classes, CodeReport, Mode, SearchOptions,
    Sign, Triplet,
};
pub use error::{Error, Result};
pub use pauli::{enumerate_all, enumerate_class, PauliOp, WeightClass, MAX_QUBITS};
pub use twirl::{
    brute_force_twirl, pauli_twirl, permutation_twirl, pip_twirl, TwirlGroup,
};
pub use verify::{
    apply_channel, average_gate_fidelity, logical_channel, mc_estimate_eigenvalue,
    mc_estimate_eigenvalue_pauli, mc_estimate_eigenvalue_pip, verify_code, DensityMatrix,
    EstimationResult, FidelityReport, SimOptions, VerifyOutcome,
};
pub use weight::{anticommute_count, class_count, ClassIndex, OmegaMatrix};
