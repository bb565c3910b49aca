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

//! Clifford circuits over {H, S, CNOT}: phase-exact Pauli conjugation and
//! synthesis of encoders and Pauli recovery layers.
//!
//! Conjugation updates the (x, z, phase) representation gate by gate:
//!
//! ```text
//!     H(q):        phase += 2·(x_q ∧ z_q);  swap x_q, z_q
//!     S(q):        phase += x_q;            z_q ^= x_q
//!     CNOT(c, t):  x_t ^= x_c;              z_c ^= z_t       (no phase)
//! ```
//!
//! The CNOT rule carries no phase because in the X-then-Z word convention the
//! reordering after conjugation never crosses an X over a Z on the same qubit.
//!
//! Encoder synthesis completes the target (x̄_i, z̄_i) pairs to a full binary
//! symplectic basis, reduces that basis to the standard frame while recording
//! gates, and inverts the record. Signs are fixed afterwards by one layer of
//! Pauli gates, so the tableau reduction itself stays phase-free.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::PauliEigenvalues;
use crate::codes::{CodeReport, Mode, Triplet};
use crate::error::{Error, Result};
use crate::pauli::{enumerate_all, PauliOp};

/// One gate of the fixed generating set, on 1-indexed qubits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
}

/// An ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut circuit = Self::new(n_qubits);
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let check = |q: usize| -> Result<()> {
            if q == 0 || q > self.n_qubits {
                return Err(Error::QubitIndexOutOfRange {
                    index: q,
                    n: self.n_qubits,
                });
            }
            Ok(())
        };
        match gate {
            Gate::H(q) | Gate::S(q) => check(q)?,
            Gate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::QubitIndexOutOfRange {
                        index: target,
                        n: self.n_qubits,
                    });
                }
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// U p U† with exact phase, via per-gate tableau updates in time order.
    pub fn conjugate(&self, p: &PauliOp) -> Result<PauliOp> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch(p.n_qubits(), self.n_qubits));
        }
        let mut x = p.x_mask();
        let mut z = p.z_mask();
        let mut phase = p.phase_exp() as u32;
        for gate in &self.gates {
            match *gate {
                Gate::H(q) => {
                    let bit = 1u64 << (q - 1);
                    if x & bit != 0 && z & bit != 0 {
                        phase += 2;
                    }
                    let xb = x & bit;
                    let zb = z & bit;
                    x = (x & !bit) | zb;
                    z = (z & !bit) | xb;
                }
                Gate::S(q) => {
                    let bit = 1u64 << (q - 1);
                    if x & bit != 0 {
                        phase += 1;
                        z ^= bit;
                    }
                }
                Gate::Cnot { control, target } => {
                    let cbit = 1u64 << (control - 1);
                    let tbit = 1u64 << (target - 1);
                    if x & cbit != 0 {
                        x ^= tbit;
                    }
                    if z & tbit != 0 {
                        z ^= cbit;
                    }
                }
            }
        }
        PauliOp::from_masks(self.n_qubits, x, z, (phase % 4) as u8)
    }

    /// The inverse circuit: gates reversed, S replaced by S·S·S.
    pub fn inverse(&self) -> Self {
        let mut gates = Vec::with_capacity(self.gates.len());
        for gate in self.gates.iter().rev() {
            match *gate {
                Gate::S(q) => {
                    gates.push(Gate::S(q));
                    gates.push(Gate::S(q));
                    gates.push(Gate::S(q));
                }
                g => gates.push(g),
            }
        }
        Self {
            n_qubits: self.n_qubits,
            gates,
        }
    }

    /// Appends the gate decomposition of a Pauli conjugation layer:
    /// Z = S·S, X = H·S·S·H, Y applies both.
    pub fn append_pauli_layer(&mut self, p: &PauliOp) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch(p.n_qubits(), self.n_qubits));
        }
        for q in 1..=self.n_qubits {
            let letter = p.letter(q);
            if letter == 'Z' || letter == 'Y' {
                self.push(Gate::S(q))?;
                self.push(Gate::S(q))?;
            }
            if letter == 'X' || letter == 'Y' {
                self.push(Gate::H(q))?;
                self.push(Gate::S(q))?;
                self.push(Gate::S(q))?;
                self.push(Gate::H(q))?;
            }
        }
        Ok(())
    }

    /// Removes adjacent self-inverse pairs (H·H, CNOT·CNOT) and S·S·S·S runs
    /// until a fixed point.
    pub fn simplify(&mut self) {
        loop {
            let mut changed = false;
            let mut out: Vec<Gate> = Vec::with_capacity(self.gates.len());
            let mut idx = 0;
            while idx < self.gates.len() {
                let gate = self.gates[idx];
                if idx + 1 < self.gates.len() {
                    let next = self.gates[idx + 1];
                    let cancels = match (gate, next) {
                        (Gate::H(a), Gate::H(b)) if a == b => true,
                        (
                            Gate::Cnot {
                                control: c1,
                                target: t1,
                            },
                            Gate::Cnot {
                                control: c2,
                                target: t2,
                            },
                        ) if c1 == c2 && t1 == t2 => true,
                        _ => false,
                    };
                    if cancels {
                        idx += 2;
                        changed = true;
                        continue;
                    }
                }
                if idx + 3 < self.gates.len() {
                    let run = &self.gates[idx..idx + 4];
                    if let Gate::S(q) = gate {
                        if run.iter().all(|g| *g == Gate::S(q)) {
                            idx += 4;
                            changed = true;
                            continue;
                        }
                    }
                }
                out.push(gate);
                idx += 1;
            }
            self.gates = out;
            if !changed {
                break;
            }
        }
    }

    /// Dense unitary of the circuit, for small-n verification.
    pub fn unitary(&self, dense_cap: usize) -> Result<DMatrix<Complex64>> {
        let n = self.n_qubits;
        if n > dense_cap {
            return Err(Error::DenseCap { n, cap: dense_cap });
        }
        let dim = 1usize << n;
        let mut total = DMatrix::<Complex64>::identity(dim, dim);
        for gate in &self.gates {
            total = gate_matrix(n, *gate) * total;
        }
        Ok(total)
    }
}

fn gate_matrix(n: usize, gate: Gate) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let c = Complex64::new;
    match gate {
        Gate::H(q) => {
            let s = 1.0 / 2.0f64.sqrt();
            let local = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
            embed_single(n, q, &local)
        }
        Gate::S(q) => {
            let local =
                DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
            embed_single(n, q, &local)
        }
        Gate::Cnot { control, target } => {
            let mut out = DMatrix::zeros(dim, dim);
            // Qubit q occupies index bit n − q.
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

fn embed_single(n: usize, q: usize, local: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let left = DMatrix::<Complex64>::identity(1 << (q - 1), 1 << (q - 1));
    let right = DMatrix::<Complex64>::identity(1 << (n - q), 1 << (n - q));
    left.kronecker(local).kronecker(&right)
}

// ---------------------------------------------------------------------------
// Encoder synthesis
// ---------------------------------------------------------------------------

/// A phaseless symplectic vector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct SymplecticVec {
    x: u64,
    z: u64,
}

impl SymplecticVec {
    fn form(&self, other: &Self) -> u64 {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) as u64 % 2
    }

    fn is_zero(&self) -> bool {
        self.x == 0 && self.z == 0
    }
}

/// Synthesizes a Clifford circuit mapping the standard generators X_i, Z_i on
/// logical slots i = 1..k onto the triplet operators x̄_i, z̄_i, with exact +1
/// phases fixed by a trailing Pauli layer.
pub fn synthesize_encoder(triplets: &[Triplet], n: usize) -> Result<CliffordCircuit> {
    let k = triplets.len();
    if k > n {
        return Err(Error::DependentTriplets(format!(
            "{k} triplets cannot fit on {n} qubits"
        )));
    }

    // Upstream guarantees: within a pair the operators anticommute, across
    // pairs everything commutes. A violation is an upstream bug surfaced here.
    for (i, t) in triplets.iter().enumerate() {
        if t.x_op.commutes(&t.z_op)? {
            return Err(Error::DependentTriplets(format!(
                "triplet {i}: x and z operators commute"
            )));
        }
        for (j, other) in triplets.iter().enumerate().skip(i + 1) {
            for a in [t.x_op, t.z_op] {
                for b in [other.x_op, other.z_op] {
                    if !a.commutes(&b)? {
                        return Err(Error::DependentTriplets(format!(
                            "triplets {i} and {j} do not commute"
                        )));
                    }
                }
            }
        }
    }

    // Assemble the frame [a_1, b_1, ..., a_n, b_n] with a_i = x̄_i, b_i = z̄_i
    // on logical slots, then complete symplectically.
    let mut frame: Vec<SymplecticVec> = Vec::with_capacity(2 * n);
    for t in triplets {
        frame.push(SymplecticVec {
            x: t.x_op.x_mask(),
            z: t.x_op.z_mask(),
        });
        frame.push(SymplecticVec {
            x: t.z_op.x_mask(),
            z: t.z_op.z_mask(),
        });
    }
    complete_symplectic_basis(&mut frame, n)?;

    // Reduce the frame to the standard generators, recording gates.
    let mut recorder = FrameReduction::new(n, frame);
    recorder.reduce()?;
    let mut encoder = CliffordCircuit {
        n_qubits: n,
        gates: recorder.gates,
    }
    .inverse();
    encoder.simplify();

    // Fix signs on the logical slots with one Pauli layer: a −1 on the X image
    // is flipped by the target z̄_i, a −1 on the Z image by x̄_i.
    let mut correction = PauliOp::identity(n)?;
    for (i, t) in triplets.iter().enumerate() {
        let x_image = encoder.conjugate(&standard_x(n, i + 1)?)?;
        if x_image.phaseless() != t.x_op.phaseless() {
            return Err(Error::Numerical(format!(
                "encoder reduction mapped X_{} to {x_image}, expected ±{}",
                i + 1,
                t.x_op
            )));
        }
        if x_image != t.x_op {
            correction = correction.multiply(&t.z_op)?;
        }
        let z_image = encoder.conjugate(&standard_z(n, i + 1)?)?;
        if z_image.phaseless() != t.z_op.phaseless() {
            return Err(Error::Numerical(format!(
                "encoder reduction mapped Z_{} to {z_image}, expected ±{}",
                i + 1,
                t.z_op
            )));
        }
        if z_image != t.z_op {
            correction = correction.multiply(&t.x_op)?;
        }
    }
    encoder.append_pauli_layer(&correction.phaseless())?;
    encoder.simplify();

    for (i, t) in triplets.iter().enumerate() {
        let x_image = encoder.conjugate(&standard_x(n, i + 1)?)?;
        let z_image = encoder.conjugate(&standard_z(n, i + 1)?)?;
        if x_image != t.x_op || z_image != t.z_op {
            return Err(Error::Numerical(format!(
                "encoder sign fixing failed on slot {}",
                i + 1
            )));
        }
    }
    Ok(encoder)
}

/// X on the 1-indexed qubit `q` of an n-qubit register.
pub fn standard_x(n: usize, q: usize) -> Result<PauliOp> {
    PauliOp::single(n, q, 'X')
}

/// Z on the 1-indexed qubit `q` of an n-qubit register.
pub fn standard_z(n: usize, q: usize) -> Result<PauliOp> {
    PauliOp::single(n, q, 'Z')
}

/// Completes the hyperbolic pairs in `frame` to a full symplectic basis.
///
/// Untouched standard pairs (X_j, Z_j) are reused when they lie in the
/// symplectic complement, which keeps already-standard inputs gate-free;
/// otherwise candidates are scanned in canonical lexicographic order.
fn complete_symplectic_basis(frame: &mut Vec<SymplecticVec>, n: usize) -> Result<()> {
    let candidates: Vec<SymplecticVec> = enumerate_all(n)?
        .iter()
        .map(|op| SymplecticVec {
            x: op.x_mask(),
            z: op.z_mask(),
        })
        .collect();

    while frame.len() < 2 * n {
        let orthogonal_to_frame =
            |v: &SymplecticVec, frame: &[SymplecticVec]| frame.iter().all(|u| v.form(u) == 0);

        let mut standard = None;
        for q in 1..=n {
            let ex = SymplecticVec {
                x: 1u64 << (q - 1),
                z: 0,
            };
            let ez = SymplecticVec {
                x: 0,
                z: 1u64 << (q - 1),
            };
            if orthogonal_to_frame(&ex, frame) && orthogonal_to_frame(&ez, frame) {
                standard = Some((ex, ez));
                break;
            }
        }
        if let Some((a, b)) = standard {
            frame.push(a);
            frame.push(b);
            continue;
        }

        let a = candidates
            .iter()
            .find(|v| !v.is_zero() && orthogonal_to_frame(v, frame))
            .copied()
            .ok_or_else(|| {
                Error::DependentTriplets("symplectic complement is empty".to_string())
            })?;
        let b = candidates
            .iter()
            .find(|v| !v.is_zero() && orthogonal_to_frame(v, frame) && v.form(&a) == 1)
            .copied()
            .ok_or_else(|| {
                Error::DependentTriplets("no hyperbolic partner found".to_string())
            })?;
        frame.push(a);
        frame.push(b);
    }
    Ok(())
}

/// Gate-recorded reduction of a symplectic frame to the standard generators.
struct FrameReduction {
    n: usize,
    frame: Vec<SymplecticVec>,
    gates: Vec<Gate>,
}

impl FrameReduction {
    fn new(n: usize, frame: Vec<SymplecticVec>) -> Self {
        Self {
            n,
            frame,
            gates: Vec::new(),
        }
    }

    fn apply(&mut self, gate: Gate) {
        for v in &mut self.frame {
            match gate {
                Gate::H(q) => {
                    let bit = 1u64 << (q - 1);
                    let xb = v.x & bit;
                    let zb = v.z & bit;
                    v.x = (v.x & !bit) | zb;
                    v.z = (v.z & !bit) | xb;
                }
                Gate::S(q) => {
                    let bit = 1u64 << (q - 1);
                    v.z ^= v.x & bit;
                }
                Gate::Cnot { control, target } => {
                    let cbit = 1u64 << (control - 1);
                    let tbit = 1u64 << (target - 1);
                    if v.x & cbit != 0 {
                        v.x ^= tbit;
                    }
                    if v.z & tbit != 0 {
                        v.z ^= cbit;
                    }
                }
            }
        }
        self.gates.push(gate);
    }

    fn swap_qubits(&mut self, a: usize, b: usize) {
        self.apply(Gate::Cnot {
            control: a,
            target: b,
        });
        self.apply(Gate::Cnot {
            control: b,
            target: a,
        });
        self.apply(Gate::Cnot {
            control: a,
            target: b,
        });
    }

    fn bit(v: &SymplecticVec, q: usize) -> (bool, bool) {
        let mask = 1u64 << (q - 1);
        (v.x & mask != 0, v.z & mask != 0)
    }

    /// Clears every letter of frame vector `idx` except an X at `slot`, using
    /// only gates that act on qubits ≥ `slot`.
    fn reduce_to_x(&mut self, idx: usize, slot: usize) -> Result<()> {
        let n = self.n;
        let pivot = (slot..=n)
            .find(|&q| Self::bit(&self.frame[idx], q).0)
            .or_else(|| {
                let q = (slot..=n).find(|&q| Self::bit(&self.frame[idx], q).1)?;
                self.apply(Gate::H(q));
                Some(q)
            })
            .ok_or_else(|| {
                Error::Numerical("frame vector vanished during reduction".to_string())
            })?;
        if pivot != slot {
            self.swap_qubits(slot, pivot);
        }
        for q in (slot + 1)..=n {
            let (xb, zb) = Self::bit(&self.frame[idx], q);
            if xb && zb {
                self.apply(Gate::S(q));
            }
        }
        for q in (slot + 1)..=n {
            let (xb, zb) = Self::bit(&self.frame[idx], q);
            if zb && !xb {
                self.apply(Gate::H(q));
            }
        }
        for q in (slot + 1)..=n {
            if Self::bit(&self.frame[idx], q).0 {
                self.apply(Gate::Cnot {
                    control: slot,
                    target: q,
                });
            }
        }
        if Self::bit(&self.frame[idx], slot).1 {
            self.apply(Gate::S(slot));
        }
        debug_assert_eq!(
            self.frame[idx],
            SymplecticVec {
                x: 1u64 << (slot - 1),
                z: 0
            }
        );
        Ok(())
    }

    fn reduce(&mut self) -> Result<()> {
        let n = self.n;
        for slot in 1..=n {
            let a_idx = 2 * (slot - 1);
            let b_idx = a_idx + 1;
            self.reduce_to_x(a_idx, slot)?;

            let z_target = SymplecticVec {
                x: 0,
                z: 1u64 << (slot - 1),
            };
            if self.frame[b_idx] != z_target {
                // Swap the roles on this qubit, run the X-style reduction on
                // the partner, and swap back.
                self.apply(Gate::H(slot));
                self.reduce_to_x(b_idx, slot)?;
                self.apply(Gate::H(slot));
            }
            debug_assert_eq!(self.frame[b_idx], z_target);
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Recovery synthesis
// ---------------------------------------------------------------------------

/// Synthesizes the Pauli recovery layer for a unitarily correctable code: the
/// logical Pauli whose conjugation signs match the channel's ±1 eigenvalues on
/// every triplet generator, so that recovery ∘ channel fixes them all.
pub fn synthesize_recovery<C: PauliEigenvalues>(
    ch: &C,
    report: &CodeReport,
) -> Result<CliffordCircuit> {
    recovery_from_signs(report, |op| ch.eigenvalue(op))
}

/// Same synthesis with the signs taken from the report's fixed classes rather
/// than a channel value.
pub fn synthesize_recovery_from_report(report: &CodeReport) -> Result<CliffordCircuit> {
    recovery_from_signs(report, |op| {
        report.sign_of(op).map(|s| s.as_f64()).ok_or_else(|| {
            Error::InconsistentSigns(format!(
                "triplet member {op} lies outside the fixed classes"
            ))
        })
    })
}

fn recovery_from_signs(
    report: &CodeReport,
    eigenvalue: impl Fn(&PauliOp) -> Result<f64>,
) -> Result<CliffordCircuit> {
    let n = report.n_qubits;
    let mut circuit = CliffordCircuit::new(n);
    if report.mode == Mode::Noiseless {
        return Ok(circuit);
    }

    let sign_of = |op: &PauliOp| -> Result<f64> {
        let value = eigenvalue(op)?;
        if (value.abs() - 1.0).abs() > 0.5 {
            return Err(Error::InconsistentSigns(format!(
                "eigenvalue {value} of {op} is not ±1"
            )));
        }
        Ok(value.signum())
    };

    let mut correction = PauliOp::identity(n)?;
    for t in &report.triplets {
        let sx = sign_of(&t.x_op)?;
        let sz = sign_of(&t.z_op)?;
        let sy = sign_of(&t.y_op)?;
        if (sy - sx * sz).abs() > 0.5 {
            return Err(Error::InconsistentSigns(format!(
                "triplet {}/{}/{} has signs ({sx}, {sy}, {sz})",
                t.x_op, t.y_op, t.z_op
            )));
        }
        // Conjugation by x̄ fixes x̄ and flips z̄/ȳ; the other members likewise.
        let member = match (sx < 0.0, sz < 0.0) {
            (false, false) => None,
            (false, true) => Some(t.x_op),
            (true, false) => Some(t.z_op),
            (true, true) => Some(t.y_op),
        };
        if let Some(op) = member {
            correction = correction.multiply(&op)?;
        }
    }
    let correction = correction.phaseless();

    // Recovery ∘ channel must fix every triplet member.
    for t in &report.triplets {
        for member in t.members() {
            let sigma = if correction.commutes(&member)? { 1.0 } else { -1.0 };
            if (sign_of(&member)? * sigma - 1.0).abs() > 0.5 {
                return Err(Error::InconsistentSigns(format!(
                    "recovery {correction} fails to fix {member}"
                )));
            }
        }
    }

    circuit.append_pauli_layer(&correction)?;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{PauliChannel, PipChannel};
    use crate::codes::{find_codes, SearchOptions};
    use crate::pauli::WeightClass;

    fn p(text: &str) -> PauliOp {
        text.parse().unwrap()
    }

    #[test]
    fn cnot_with_second_qubit_control_maps_ix_to_xx() {
        let circ = CliffordCircuit::from_gates(
            2,
            vec![Gate::Cnot {
                control: 2,
                target: 1,
            }],
        )
        .unwrap();
        assert_eq!(circ.conjugate(&p("IX")).unwrap(), p("XX"));
        assert_eq!(circ.conjugate(&p("IZ")).unwrap(), p("IZ"));
    }

    #[test]
    fn hadamard_exchanges_x_and_z() {
        let circ = CliffordCircuit::from_gates(1, vec![Gate::H(1)]).unwrap();
        assert_eq!(circ.conjugate(&p("X")).unwrap(), p("Z"));
        assert_eq!(circ.conjugate(&p("Z")).unwrap(), p("X"));
        assert_eq!(circ.conjugate(&p("Y")).unwrap(), p("-Y"));
    }

    #[test]
    fn phase_gate_conjugation() {
        let circ = CliffordCircuit::from_gates(1, vec![Gate::S(1)]).unwrap();
        assert_eq!(circ.conjugate(&p("X")).unwrap(), p("Y"));
        assert_eq!(circ.conjugate(&p("Y")).unwrap(), p("-X"));
        assert_eq!(circ.conjugate(&p("Z")).unwrap(), p("Z"));
    }

    #[test]
    fn inverse_undoes_conjugation() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(41);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let circ = random_circuit(n, 12, &mut rng);
            let inv = circ.inverse();
            let valid = (1u64 << n) - 1;
            let op = PauliOp::from_masks(
                n,
                rng.gen::<u64>() & valid,
                rng.gen::<u64>() & valid,
                rng.gen_range(0..4),
            )
            .unwrap();
            let back = inv.conjugate(&circ.conjugate(&op).unwrap()).unwrap();
            assert_eq!(back, op);
        }
    }

    fn random_circuit(n: usize, len: usize, rng: &mut impl rand::Rng) -> CliffordCircuit {
        let mut circ = CliffordCircuit::new(n);
        for _ in 0..len {
            let gate = match rng.gen_range(0..3) {
                0 => Gate::H(rng.gen_range(1..=n)),
                1 => Gate::S(rng.gen_range(1..=n)),
                _ => {
                    if n == 1 {
                        Gate::H(1)
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
            circ.push(gate).unwrap();
        }
        circ
    }

    #[test]
    fn rejects_out_of_range_gates() {
        let mut circ = CliffordCircuit::new(2);
        assert!(circ.push(Gate::H(3)).is_err());
        assert!(circ
            .push(Gate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
    }

    fn dephasing_triplet() -> Triplet {
        let pip = PipChannel::from_class_masses(
            2,
            [
                (WeightClass::new(0, 0, 0), 0.5),
                (WeightClass::new(0, 0, 2), 0.5),
            ],
        )
        .unwrap();
        let report = find_codes(&pip, Mode::Noiseless, &SearchOptions::default()).unwrap();
        report.triplets[0]
    }

    #[test]
    fn encoder_maps_standard_generators_onto_the_triplet() {
        let triplet = dephasing_triplet();
        let encoder = synthesize_encoder(&[triplet], 2).unwrap();
        assert_eq!(encoder.conjugate(&p("XI")).unwrap(), p("XX"));
        assert_eq!(encoder.conjugate(&p("ZI")).unwrap(), p("IZ"));
        assert_eq!(encoder.conjugate(&p("YI")).unwrap(), triplet.y_op);
    }

    #[test]
    fn already_standard_triplet_needs_no_gates() {
        let fixed = vec![p("IZ"), p("IX"), p("IY"), p("XI"), p("ZI"), p("YI")];
        let (triplets, _) = crate::codes::find_triplets(&fixed).unwrap();
        // The scan founds the pair (IX, IY) style triplets; synthesize the
        // explicitly standard one instead.
        assert!(!triplets.is_empty());
        let standard = Triplet {
            x_op: p("XI"),
            y_op: p("YI"),
            z_op: p("ZI"),
            provenance: (p("ZI"), p("XI")),
        };
        let encoder = synthesize_encoder(&[standard], 2).unwrap();
        assert!(encoder.is_empty(), "gates: {:?}", encoder.gates());
    }

    #[test]
    fn full_register_identity_code_is_gate_free() {
        let pip =
            PipChannel::from_class_masses(2, [(WeightClass::new(0, 0, 0), 1.0)]).unwrap();
        let report = find_codes(&pip, Mode::Noiseless, &SearchOptions::default()).unwrap();
        assert_eq!(report.logical_qubits, 2);
        let encoder = synthesize_encoder(&report.triplets, 2).unwrap();
        for q in 1..=2 {
            let x = standard_x(2, q).unwrap();
            let z = standard_z(2, q).unwrap();
            let xi = encoder.conjugate(&x).unwrap();
            let zi = encoder.conjugate(&z).unwrap();
            assert_eq!(xi.weight(), 1);
            assert_eq!(zi.weight(), 1);
        }
    }

    #[test]
    fn encoder_preserves_commutation_structure() {
        let triplet = dephasing_triplet();
        let encoder = synthesize_encoder(&[triplet], 2).unwrap();
        let generators: Vec<PauliOp> = (1..=2)
            .flat_map(|q| [standard_x(2, q).unwrap(), standard_z(2, q).unwrap()])
            .collect();
        for a in &generators {
            for b in &generators {
                let before = a.commutes(b).unwrap();
                let after = encoder
                    .conjugate(a)
                    .unwrap()
                    .commutes(&encoder.conjugate(b).unwrap())
                    .unwrap();
                assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn recovery_for_the_xy_yx_channel_is_the_y_member() {
        let ch = PauliChannel::new(2, [(p("XY"), 0.5), (p("YX"), 0.5)]).unwrap();
        let pip = crate::twirl::permutation_twirl(&ch);
        let report = find_codes(&pip, Mode::Ucs, &SearchOptions::default()).unwrap();
        let recovery = synthesize_recovery(&ch, &report).unwrap();
        // Conjugation by XY: fixes XY, flips XX and IZ.
        let expected = {
            let mut c = CliffordCircuit::new(2);
            c.append_pauli_layer(&p("XY")).unwrap();
            c
        };
        assert_eq!(recovery, expected);
        let from_report = synthesize_recovery_from_report(&report).unwrap();
        assert_eq!(from_report, expected);
    }

    #[test]
    fn noiseless_codes_get_empty_recovery() {
        let pip = PipChannel::from_class_masses(
            2,
            [
                (WeightClass::new(0, 0, 0), 0.5),
                (WeightClass::new(0, 0, 2), 0.5),
            ],
        )
        .unwrap();
        let report = find_codes(&pip, Mode::Noiseless, &SearchOptions::default()).unwrap();
        let ch = pip.to_pauli_channel().unwrap();
        let recovery = synthesize_recovery(&ch, &report).unwrap();
        assert!(recovery.is_empty());
    }

    #[test]
    fn sign_pattern_plus_minus_recovers_with_the_x_member() {
        // A channel fixing X̄ = XX and flipping Z̄ = IZ: conjugation by XX.
        let ch = PauliChannel::new(2, [(p("XX"), 1.0)]).unwrap();
        let pip = crate::twirl::permutation_twirl(&ch);
        let report = find_codes(&pip, Mode::Ucs, &SearchOptions::default()).unwrap();
        assert!(report.logical_qubits >= 1);
        let recovery = synthesize_recovery(&ch, &report).unwrap();
        // Verified behaviorally: the composed action fixes all members.
        for t in &report.triplets {
            for member in t.members() {
                let lambda = ch.eigenvalue(&member).unwrap();
                let image = recovery.conjugate(&member).unwrap();
                let sigma = if image == member { 1.0 } else { -1.0 };
                assert!((lambda * sigma - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pauli_layer_conjugation_signs() {
        let mut circ = CliffordCircuit::new(1);
        circ.append_pauli_layer(&p("X")).unwrap();
        assert_eq!(circ.conjugate(&p("Z")).unwrap(), p("-Z"));
        assert_eq!(circ.conjugate(&p("X")).unwrap(), p("X"));
        let mut zed = CliffordCircuit::new(1);
        zed.append_pauli_layer(&p("Z")).unwrap();
        assert_eq!(zed.conjugate(&p("X")).unwrap(), p("-X"));
    }

    #[test]
    fn simplify_cancels_adjacent_pairs() {
        let mut circ = CliffordCircuit::from_gates(
            2,
            vec![
                Gate::H(1),
                Gate::H(1),
                Gate::Cnot {
                    control: 1,
                    target: 2,
                },
                Gate::Cnot {
                    control: 1,
                    target: 2,
                },
                Gate::S(2),
                Gate::S(2),
                Gate::S(2),
                Gate::S(2),
            ],
        )
        .unwrap();
        circ.simplify();
        assert!(circ.is_empty());
    }
}
