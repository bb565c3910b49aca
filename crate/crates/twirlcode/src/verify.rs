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

//! Dense small-n verification: density-matrix channel application, logical
//! channel extraction by process tomography, average gate fidelity, end-to-end
//! code verification, and a Monte Carlo simulation of the per-class eigenvalue
//! estimation experiment.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{
    pauli_apply_state, pauli_matrix, GeneralChannel, PauliChannel, PipChannel,
};
use crate::clifford::CliffordCircuit;
use crate::codes::CodeReport;
use crate::error::{Error, Result};
use crate::pauli::{enumerate_class, PauliOp, WeightClass};
use crate::twirl::pip_twirl;

/// Hermiticity and unit-trace tolerance for density matrices.
pub const DM_TOL: f64 = 1e-10;
/// Slack on the smallest eigenvalue in the positivity check; numerical, not
/// physical.
pub const PSD_TOL: f64 = -1e-9;
/// Logical fidelity below which a code found on the twirled channel but
/// failing on the original is surfaced as a counterexample.
pub const THEOREM_TOL: f64 = 1e-6;

/// Limits for the dense simulation layer.
#[derive(Clone, Copy, Debug)]
pub struct SimOptions {
    pub dense_cap: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            dense_cap: crate::channel::DEFAULT_DENSE_CAP,
        }
    }
}

/// A validated n-qubit density matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(n_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::SizeMismatch(matrix.nrows(), dim));
        }
        let herm_defect = (&matrix - matrix.adjoint()).norm();
        if herm_defect > DM_TOL {
            return Err(Error::Validation(format!(
                "density matrix is not Hermitian (defect {herm_defect:.3e})"
            )));
        }
        let trace_defect = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        if trace_defect > DM_TOL {
            return Err(Error::Validation(format!(
                "density matrix trace differs from 1 by {trace_defect:.3e}"
            )));
        }
        let min_eigen = matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eigen < PSD_TOL {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {min_eigen:.3e}"
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// |bits⟩⟨bits| with qubit 1 the most significant bit.
    pub fn basis_state(n_qubits: usize, bits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut matrix = DMatrix::zeros(dim, dim);
        matrix[(bits, bits)] = Complex64::new(1.0, 0.0);
        Self { n_qubits, matrix }
    }

    pub fn pure_state(n_qubits: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::SizeMismatch(amplitudes.len(), dim));
        }
        let v = DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "state vector norm is {norm}, expected 1"
            )));
        }
        let matrix = &v * v.adjoint();
        Ok(Self { n_qubits, matrix })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let matrix =
            DMatrix::<Complex64>::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
        Self { n_qubits, matrix }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Channels that can act on dense density matrices.
pub trait ApplyChannel {
    fn n_qubits(&self) -> usize;
    fn apply_matrix(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64>;
}

impl ApplyChannel for GeneralChannel {
    fn n_qubits(&self) -> usize {
        self.n_qubits()
    }

    fn apply_matrix(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = rho.nrows();
        let mut out = DMatrix::zeros(dim, dim);
        for op in self.kraus() {
            out += op * rho * op.adjoint();
        }
        out
    }
}

impl ApplyChannel for PauliChannel {
    fn n_qubits(&self) -> usize {
        self.n_qubits()
    }

    fn apply_matrix(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = rho.nrows();
        let mut out = DMatrix::zeros(dim, dim);
        for (op, prob) in self.terms() {
            let m = pauli_matrix(op);
            out += (&m * rho * &m) * Complex64::new(prob, 0.0);
        }
        out
    }
}

/// Applies a channel to a density matrix; the result is checked to remain a
/// valid state.
pub fn apply_channel<C: ApplyChannel>(
    ch: &C,
    rho: &DensityMatrix,
    options: &SimOptions,
) -> Result<DensityMatrix> {
    let n = ch.n_qubits();
    if n != rho.n_qubits() {
        return Err(Error::SizeMismatch(n, rho.n_qubits()));
    }
    if n > options.dense_cap {
        return Err(Error::DenseCap {
            n,
            cap: options.dense_cap,
        });
    }
    DensityMatrix::new(n, ch.apply_matrix(rho.matrix()))
}

/// Traces out the trailing subsystem: input on k + m qubits, output on the
/// leading k.
fn partial_trace_trailing(
    rho: &DMatrix<Complex64>,
    keep_dim: usize,
    trace_dim: usize,
) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(keep_dim, keep_dim);
    for i in 0..keep_dim {
        for j in 0..keep_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..trace_dim {
                acc += rho[(i * trace_dim + b, j * trace_dim + b)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Extracts the induced logical channel on the first `k` qubits by process
/// tomography at desk scale.
///
/// For each operator-basis element E of the logical subsystem, the state
/// encoder(E ⊗ τ_B) is pushed through channel, recovery and the inverse
/// encoder, and subsystem B is traced out; τ_B is maximally mixed so no gauge
/// basis is privileged. The Choi matrix of the induced map is then factored
/// into Kraus operators.
pub fn logical_channel(
    ch: &GeneralChannel,
    encoder: &CliffordCircuit,
    recovery: &CliffordCircuit,
    k: usize,
    options: &SimOptions,
) -> Result<GeneralChannel> {
    let n = ch.n_qubits();
    if n > options.dense_cap {
        return Err(Error::DenseCap {
            n,
            cap: options.dense_cap,
        });
    }
    if encoder.n_qubits() != n || recovery.n_qubits() != n {
        return Err(Error::SizeMismatch(encoder.n_qubits(), n));
    }
    if k > n {
        return Err(Error::SizeMismatch(k, n));
    }
    let d_a = 1usize << k;
    let d_b = 1usize << (n - k);
    let u = encoder.unitary(options.dense_cap)?;
    let u_dag = u.adjoint();
    let r = recovery.unitary(options.dense_cap)?;
    let r_dag = r.adjoint();
    let tau_b = DMatrix::<Complex64>::identity(d_b, d_b) / Complex64::new(d_b as f64, 0.0);

    let mut choi = DMatrix::<Complex64>::zeros(d_a * d_a, d_a * d_a);
    for i in 0..d_a {
        for j in 0..d_a {
            let mut basis = DMatrix::<Complex64>::zeros(d_a, d_a);
            basis[(i, j)] = Complex64::new(1.0, 0.0);
            let rho_in = &u * basis.kronecker(&tau_b) * &u_dag;
            let rho_out = &u_dag * (&r * ch.apply_matrix(&rho_in) * &r_dag) * &u;
            let logical = partial_trace_trailing(&rho_out, d_a, d_b);
            for row in 0..d_a {
                for col in 0..d_a {
                    choi[(i * d_a + row, j * d_a + col)] = logical[(row, col)];
                }
            }
        }
    }

    // Kraus operators from the Choi eigendecomposition.
    let eigen = choi.symmetric_eigen();
    let mut kraus = Vec::new();
    for (idx, &value) in eigen.eigenvalues.iter().enumerate() {
        if value < -1e-9 {
            return Err(Error::Numerical(format!(
                "induced map is not completely positive (Choi eigenvalue {value:.3e})"
            )));
        }
        if value <= 1e-12 {
            continue;
        }
        let scale = Complex64::new(value.sqrt(), 0.0);
        let column = eigen.eigenvectors.column(idx);
        let mut op = DMatrix::<Complex64>::zeros(d_a, d_a);
        for i in 0..d_a {
            for row in 0..d_a {
                op[(row, i)] = column[i * d_a + row] * scale;
            }
        }
        kraus.push(op);
    }
    GeneralChannel::new(k, kraus)
}

/// F̄ = (d·F_e + 1)/(d + 1) with entanglement fidelity F_e = Σ_k |tr(A_k)/d|².
pub fn average_gate_fidelity(ch: &GeneralChannel) -> f64 {
    let d = ch.dim() as f64;
    let f_e: f64 = ch
        .kraus()
        .iter()
        .map(|op| (op.trace() / Complex64::new(d, 0.0)).norm_sqr())
        .sum();
    (d * f_e + 1.0) / (d + 1.0)
}

/// Per-Kraus diagnostics of a logical channel.
#[derive(Clone, Debug, Serialize)]
pub struct KrausDiagnostic {
    /// tr(A†A): total weight this operator carries.
    pub weight: f64,
    /// |tr(A)/d|²: its contribution to the entanglement fidelity.
    pub trace_overlap: f64,
}

/// Fidelity summary of one logical channel.
#[derive(Clone, Debug, Serialize)]
pub struct FidelityReport {
    pub code: String,
    pub channel: String,
    pub logical_qubits: usize,
    pub avg_gate_fidelity: f64,
    pub worst_case_over_probes: f64,
    pub kraus_diagnostics: Vec<KrausDiagnostic>,
}

/// Outcome of verifying one code against both the original channel and its
/// class-parameterized twirl.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub original: FidelityReport,
    pub twirled: FidelityReport,
    /// Set when the code passes on the twirled channel but fails on the
    /// original. Correctability is guaranteed to transfer, so a counterexample
    /// indicates a defect and is surfaced loudly rather than suppressed.
    pub theorem_violation: bool,
}

fn fidelity_report(
    logical: &GeneralChannel,
    code: String,
    channel: String,
) -> Result<FidelityReport> {
    let k = logical.n_qubits();
    let agf = average_gate_fidelity(logical);
    debug_assert!(agf <= 1.0 + 1e-9);
    let d = logical.dim() as f64;
    let diagnostics = logical
        .kraus()
        .iter()
        .map(|op| KrausDiagnostic {
            weight: (op.adjoint() * op).trace().re,
            trace_overlap: (op.trace() / Complex64::new(d, 0.0)).norm_sqr(),
        })
        .collect();

    // Probe states: each axis state on each logical qubit, others in |0⟩,
    // plus the all-zeros state.
    let mut worst = f64::INFINITY;
    let mut probes: Vec<Vec<(Complex64, Complex64)>> = Vec::new();
    let half = 1.0 / 2.0f64.sqrt();
    let axis = [
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (Complex64::new(half, 0.0), Complex64::new(half, 0.0)),
        (Complex64::new(half, 0.0), Complex64::new(-half, 0.0)),
        (Complex64::new(half, 0.0), Complex64::new(0.0, half)),
        (Complex64::new(half, 0.0), Complex64::new(0.0, -half)),
    ];
    let ground = axis[0];
    probes.push(vec![ground; k]);
    for q in 0..k {
        for state in axis.iter().skip(1) {
            let mut factors = vec![ground; k];
            factors[q] = *state;
            probes.push(factors);
        }
    }
    for factors in probes {
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for (a0, a1) in factors {
            let mut next = Vec::with_capacity(amplitudes.len() * 2);
            for amp in &amplitudes {
                next.push(amp * a0);
                next.push(amp * a1);
            }
            amplitudes = next;
        }
        let v = DVector::from_column_slice(&amplitudes);
        let rho = &v * v.adjoint();
        let out = logical.apply_matrix(&rho);
        let fidelity = (v.adjoint() * &out * &v)[(0, 0)].re;
        worst = worst.min(fidelity);
    }

    Ok(FidelityReport {
        code,
        channel,
        logical_qubits: k,
        avg_gate_fidelity: agf,
        worst_case_over_probes: worst,
        kraus_diagnostics: diagnostics,
    })
}

/// Verifies a code against the original channel and its twirl.
///
/// Computes the logical average gate fidelity through `encoder`/`recovery` for
/// both the original channel and the Pauli+permutation twirl of it, and flags
/// a counterexample when the twirled channel passes but the original fails.
pub fn verify_code(
    original: &GeneralChannel,
    report: &CodeReport,
    encoder: &CliffordCircuit,
    recovery: &CliffordCircuit,
    options: &SimOptions,
) -> Result<VerifyOutcome> {
    let k = report.logical_qubits;
    let code_label = format!("{} code, {} logical qubit(s)", report.mode, k);

    let logical_original = logical_channel(original, encoder, recovery, k, options)?;
    let original_report = fidelity_report(
        &logical_original,
        code_label.clone(),
        "original channel".to_string(),
    )?;

    let twirled = pip_twirl(original, options.dense_cap)?
        .to_pauli_channel()?
        .to_general(options.dense_cap)?;
    let logical_twirled = logical_channel(&twirled, encoder, recovery, k, options)?;
    let twirled_report = fidelity_report(
        &logical_twirled,
        code_label,
        "twirled channel".to_string(),
    )?;

    let theorem_violation = twirled_report.avg_gate_fidelity >= 1.0 - THEOREM_TOL
        && original_report.avg_gate_fidelity < 1.0 - THEOREM_TOL;

    Ok(VerifyOutcome {
        original: original_report,
        twirled: twirled_report,
        theorem_violation,
    })
}

// ---------------------------------------------------------------------------
// Monte Carlo eigenvalue estimation
// ---------------------------------------------------------------------------

/// Result of the simulated per-class eigenvalue estimation experiment.
/// Serialized through [`crate::io::EstimationDoc`], which carries the class
/// label explicitly.
#[derive(Clone, Debug)]
pub struct EstimationResult {
    pub class: WeightClass,
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

const STREAM_LEN: u64 = 1024;

/// Simulates the scalable estimation experiment for the eigenvalue of one
/// weight class.
///
/// Each shot draws a uniform class member P and a uniform product eigenstate
/// of P (identity positions filled with uniform Z-basis states), applies the
/// channel, and records the input eigenvalue times the measured expectation
/// of P. The mean is an unbiased estimator of the twirled channel's class
/// eigenvalue. Sampling runs in fixed-length streams with per-stream RNG
/// substreams derived from the master seed, so results are reproducible and
/// independent of parallel scheduling.
pub fn mc_estimate_eigenvalue(
    ch: &GeneralChannel,
    class: WeightClass,
    samples: u64,
    seed: u64,
    options: &SimOptions,
) -> Result<EstimationResult> {
    let n = ch.n_qubits();
    if n > options.dense_cap {
        return Err(Error::DenseCap {
            n,
            cap: options.dense_cap,
        });
    }
    if samples < 2 {
        return Err(Error::TooFewSamples);
    }
    let members = enumerate_class(n, class)?;
    let stream_count = samples.div_ceil(STREAM_LEN);
    let partials: Vec<RunningMoments> = (0..stream_count)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(stream + 1);
            let count = STREAM_LEN.min(samples - stream * STREAM_LEN);
            let mut moments = RunningMoments::default();
            for _ in 0..count {
                moments.push(one_shot(ch, &members, &mut rng));
            }
            moments
        })
        .collect();

    let mut merged = RunningMoments::default();
    for partial in partials {
        merged.merge(&partial);
    }
    let mean = merged.mean;
    let count = samples as f64;
    let variance = if samples > 1 {
        merged.sum_sq_dev / (count - 1.0)
    } else {
        0.0
    };
    let std_error = (variance / count).sqrt();
    debug_assert!(mean.abs() <= 1.0 + 1e-9);
    Ok(EstimationResult {
        class,
        estimate: mean,
        std_error,
        samples,
        seed,
    })
}

/// Welford accumulator with pairwise stream merging; constant samples yield an
/// exactly zero deviation sum.
#[derive(Clone, Copy, Default)]
struct RunningMoments {
    count: f64,
    mean: f64,
    sum_sq_dev: f64,
}

impl RunningMoments {
    fn push(&mut self, value: f64) {
        self.count += 1.0;
        let delta = value - self.mean;
        self.mean += delta / self.count;
        self.sum_sq_dev += delta * (value - self.mean);
    }

    fn merge(&mut self, other: &Self) {
        if other.count == 0.0 {
            return;
        }
        if self.count == 0.0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.sum_sq_dev += other.sum_sq_dev + delta * delta * self.count * other.count / total;
        self.mean += delta * other.count / total;
        self.count = total;
    }
}

/// Convenience wrapper embedding a Pauli channel densely first.
pub fn mc_estimate_eigenvalue_pauli(
    ch: &PauliChannel,
    class: WeightClass,
    samples: u64,
    seed: u64,
    options: &SimOptions,
) -> Result<EstimationResult> {
    let dense = ch.to_general(options.dense_cap)?;
    mc_estimate_eigenvalue(&dense, class, samples, seed, options)
}

/// Convenience wrapper expanding a class-parameterized channel first.
pub fn mc_estimate_eigenvalue_pip(
    ch: &PipChannel,
    class: WeightClass,
    samples: u64,
    seed: u64,
    options: &SimOptions,
) -> Result<EstimationResult> {
    let dense = ch.to_pauli_channel()?.to_general(options.dense_cap)?;
    mc_estimate_eigenvalue(&dense, class, samples, seed, options)
}

fn one_shot(ch: &GeneralChannel, members: &[PauliOp], rng: &mut ChaCha12Rng) -> f64 {
    let n = ch.n_qubits();
    let p = members[rng.gen_range(0..members.len())];

    // Product eigenstate of P: a random eigenvector per non-identity letter,
    // a random Z-basis state per identity position.
    let half = 1.0 / 2.0f64.sqrt();
    let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
    let mut input_eigenvalue = 1.0;
    for q in 1..=n {
        let sign: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let (a0, a1) = match p.letter(q) {
            'X' => {
                input_eigenvalue *= sign;
                (Complex64::new(half, 0.0), Complex64::new(sign * half, 0.0))
            }
            'Y' => {
                input_eigenvalue *= sign;
                (Complex64::new(half, 0.0), Complex64::new(0.0, sign * half))
            }
            'Z' => {
                input_eigenvalue *= sign;
                if sign > 0.0 {
                    (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
                } else {
                    (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
                }
            }
            _ => {
                if sign > 0.0 {
                    (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
                } else {
                    (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
                }
            }
        };
        let mut next = Vec::with_capacity(amplitudes.len() * 2);
        for amp in &amplitudes {
            next.push(amp * a0);
            next.push(amp * a1);
        }
        amplitudes = next;
    }

    // Expectation of P after the channel: Σ_k ⟨A_k ψ| P |A_k ψ⟩.
    let psi = DVector::from_column_slice(&amplitudes);
    let mut expectation = 0.0;
    for op in ch.kraus() {
        let phi = op * &psi;
        let p_phi = pauli_apply_state(&p, phi.as_slice());
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in phi.iter().zip(p_phi.iter()) {
            acc += a.conj() * b;
        }
        expectation += acc.re;
    }
    input_eigenvalue * expectation
}
