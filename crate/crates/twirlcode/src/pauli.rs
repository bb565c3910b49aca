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

//! Exact symplectic algebra of n-qubit Pauli operators.
//!
//! A Pauli operator is stored as two bit masks (the X part and the Z part) plus a
//! quarter-turn phase exponent. The stored operator is
//!
//! ```text
//!     i^phase_exp · ∏_q X_q^{x_q} Z_q^{z_q}
//! ```
//!
//! where within each qubit the X factor stands to the left of the Z factor. The
//! single-qubit letters map onto mask bits as I=(0,0), X=(1,0), Y=(1,1), Z=(0,1);
//! the Hermitian Y carries `phase_exp = 1` since Y = i·XZ.
//!
//! Multiplication is phase-exact:
//!
//! ```text
//!     (i^a X^{x₁}Z^{z₁}) · (i^b X^{x₂}Z^{z₂})
//!         = i^{a + b + 2·|z₁ ∧ x₂|} X^{x₁⊕x₂} Z^{z₁⊕z₂}
//! ```
//!
//! because each qubit where a Z from the left factor crosses an X from the right
//! factor contributes a −1. This convention is locked by X·Z = −i·Y.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Hard cap on the qubit count of the bit-mask layer; masks are single
/// machine words. Dense-simulation modules cap far lower.
pub const MAX_QUBITS: usize = 63;

/// An n-qubit Pauli operator with exact phase.
///
/// Immutable after construction; all operations are pure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliOp {
    n_qubits: u32,
    x_mask: u64,
    z_mask: u64,
    phase_exp: u8,
}

/// A permutation-equivalence class of Pauli operators, labeled by how many
/// qubits carry X, Y and Z letters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct WeightClass {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange(n));
    }
    Ok(())
}

impl PauliOp {
    /// The identity operator on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(Self {
            n_qubits: n as u32,
            x_mask: 0,
            z_mask: 0,
            phase_exp: 0,
        })
    }

    /// Builds an operator from raw masks and a phase exponent.
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Result<Self> {
        check_qubit_count(n)?;
        let valid = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if x_mask & !valid != 0 || z_mask & !valid != 0 {
            return Err(Error::MaskOutOfRange { n });
        }
        Ok(Self {
            n_qubits: n as u32,
            x_mask,
            z_mask,
            phase_exp: phase_exp % 4,
        })
    }

    /// The Hermitian operator with the given masks and a `+1` prefix, i.e.
    /// `phase_exp` equal to the number of Y positions.
    pub fn hermitian_from_masks(n: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        let y_count = (x_mask & z_mask).count_ones() as u8;
        Self::from_masks(n, x_mask, z_mask, y_count % 4)
    }

    /// Single-qubit letter placed at 1-indexed position `q` of an n-qubit identity.
    pub fn single(n: usize, q: usize, letter: char) -> Result<Self> {
        check_qubit_count(n)?;
        if q == 0 || q > n {
            return Err(Error::QubitIndexOutOfRange { index: q, n });
        }
        let bit = 1u64 << (q - 1);
        match letter {
            'I' => Self::from_masks(n, 0, 0, 0),
            'X' => Self::from_masks(n, bit, 0, 0),
            'Y' => Self::from_masks(n, bit, bit, 1),
            'Z' => Self::from_masks(n, 0, bit, 0),
            other => Err(Error::BadPauliLetter { letter: other }),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    /// Phase exponent modulo 4; the stored operator carries an overall `i^phase_exp`
    /// relative to the bare X-then-Z word.
    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    /// True when both masks are empty (any phase).
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Number of qubits where the operator acts non-trivially.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// Letter at 1-indexed qubit `q`.
    pub fn letter(&self, q: usize) -> char {
        match self.letter_rank(q) {
            0 => 'I',
            1 => 'X',
            2 => 'Y',
            _ => 'Z',
        }
    }

    /// Canonical rank of the letter at qubit `q`: I=0 < X=1 < Y=2 < Z=3.
    fn letter_rank(&self, q: usize) -> u8 {
        let x = (self.x_mask >> (q - 1)) & 1;
        let z = (self.z_mask >> (q - 1)) & 1;
        match (x, z) {
            (0, 0) => 0,
            (1, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        }
    }

    /// The canonical Hermitian representative: same letters, `+1` prefix.
    pub fn phaseless(&self) -> Self {
        Self {
            phase_exp: (self.y_count() % 4) as u8,
            ..*self
        }
    }

    /// True when the operator equals its own adjoint, i.e. the phase exponent
    /// and the Y count have equal parity.
    pub fn is_hermitian(&self) -> bool {
        (self.phase_exp as u32 & 1) == (self.y_count() & 1)
    }

    /// Net phase prefix relative to the Hermitian representative: 0,1,2,3 for
    /// +1, +i, −1, −i.
    pub fn prefix_exp(&self) -> u8 {
        ((self.phase_exp as u32 + 4 - self.y_count() % 4) % 4) as u8
    }

    /// Operator product `self · other` with exact phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits(), other.n_qubits()));
        }
        let cross = (self.z_mask & other.x_mask).count_ones();
        Ok(Self {
            n_qubits: self.n_qubits,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            phase_exp: ((self.phase_exp as u32 + other.phase_exp as u32 + 2 * cross) % 4) as u8,
        })
    }

    /// Whether the two operators commute. Pauli operators either commute or
    /// anticommute; the answer is the parity of the symplectic form and is
    /// independent of the phases.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits(), other.n_qubits()));
        }
        let parity = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        Ok(parity % 2 == 0)
    }

    /// Multiplies the phase by i^k.
    pub fn with_extra_phase(&self, k: u8) -> Self {
        Self {
            phase_exp: (self.phase_exp + k) % 4,
            ..*self
        }
    }

    /// Counts of X-only, Y and Z-only positions.
    pub fn weight_class(&self) -> WeightClass {
        WeightClass {
            x: (self.x_mask & !self.z_mask).count_ones() as usize,
            y: (self.x_mask & self.z_mask).count_ones() as usize,
            z: (self.z_mask & !self.x_mask).count_ones() as usize,
        }
    }

    /// Applies a qubit relabeling: the letter at 0-indexed position `q` moves to
    /// `perm[q]`. The phase is unchanged since the letter multiset is preserved.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_qubits();
        if perm.len() != n {
            return Err(Error::SizeMismatch(perm.len(), n));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, &target) in perm.iter().enumerate() {
            if target >= n {
                return Err(Error::QubitIndexOutOfRange { index: target + 1, n });
            }
            x |= ((self.x_mask >> q) & 1) << target;
            z |= ((self.z_mask >> q) & 1) << target;
        }
        Self::from_masks(n, x, z, self.phase_exp)
    }

    /// Canonical order: by qubit count, then lexicographic on the letter string
    /// with I < X < Y < Z, then by phase exponent.
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| {
                for q in 1..=self.n_qubits() {
                    let ord = self.letter_rank(q).cmp(&other.letter_rank(q));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            })
            .then(self.phase_exp.cmp(&other.phase_exp))
    }
}

impl PartialOrd for PauliOp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliOp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key(other)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.prefix_exp() {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 1..=self.n_qubits() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    /// Parses an optional phase prefix from `{+, -, +i, -i}` followed by one
    /// letter from `{I, X, Y, Z}` per qubit, position 1 leftmost.
    fn from_str(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let (prefix_exp, letters) = if let Some(rest) = text.strip_prefix("+i") {
            (1u8, rest)
        } else if let Some(rest) = text.strip_prefix("-i") {
            (3u8, rest)
        } else if let Some(rest) = text.strip_prefix('+') {
            (0u8, rest)
        } else if let Some(rest) = text.strip_prefix('-') {
            (2u8, rest)
        } else {
            (0u8, text)
        };
        if letters.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let n = letters.chars().count();
        check_qubit_count(n)?;
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        let mut y_count = 0u32;
        for (idx, letter) in letters.chars().enumerate() {
            let bit = 1u64 << idx;
            match letter {
                'I' => {}
                'X' => x_mask |= bit,
                'Y' => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
                'Z' => z_mask |= bit,
                other => return Err(Error::BadPauliLetter { letter: other }),
            }
        }
        Self::from_masks(
            n,
            x_mask,
            z_mask,
            ((prefix_exp as u32 + y_count) % 4) as u8,
        )
    }
}

impl WeightClass {
    pub fn new(x: usize, y: usize, z: usize) -> Self {
        Self { x, y, z }
    }

    /// Total number of non-identity letters.
    pub fn total(&self) -> usize {
        self.x + self.y + self.z
    }

    pub fn valid_for(&self, n: usize) -> bool {
        self.total() <= n
    }

    /// Number of phaseless Pauli operators in this class on `n` qubits:
    /// C(n, W) · C(W, x) · C(y+z, y) with W the total weight.
    pub fn size(&self, n: usize) -> Result<u128> {
        if !self.valid_for(n) {
            return Err(Error::ClassTooHeavy { class: *self, n });
        }
        let w = self.total();
        Ok(binomial(n, w) * binomial(w, self.x) * binomial(self.y + self.z, self.y))
    }

    /// Canonical class representative on `n` qubits: X letters first, then Y,
    /// then Z, then identities.
    pub fn representative(&self, n: usize) -> Result<PauliOp> {
        if !self.valid_for(n) {
            return Err(Error::ClassTooHeavy { class: *self, n });
        }
        let ones = |count: usize, offset: usize| -> u64 {
            if count == 0 {
                0
            } else {
                (((1u128 << count) - 1) as u64) << offset
            }
        };
        let x_block = ones(self.x, 0);
        let y_block = ones(self.y, self.x);
        let z_block = ones(self.z, self.x + self.y);
        PauliOp::hermitian_from_masks(n, x_block | y_block, y_block | z_block)
    }
}

impl PartialOrd for WeightClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeightClass {
    /// Canonical class order: ascending total weight, then x, then y, then z.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.total(), self.x, self.y, self.z).cmp(&(other.total(), other.x, other.y, other.z))
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Enumerates every phaseless (Hermitian-representative) Pauli operator in the
/// given weight class, in canonical lexicographic order (I < X < Y < Z,
/// leftmost qubit most significant).
pub fn enumerate_class(n: usize, class: WeightClass) -> Result<Vec<PauliOp>> {
    check_qubit_count(n)?;
    if !class.valid_for(n) {
        return Err(Error::ClassTooHeavy { class, n });
    }
    let expected = class.size(n)? as usize;
    let mut out = Vec::with_capacity(expected);
    let mut x_mask = 0u64;
    let mut z_mask = 0u64;
    fill_positions(
        n,
        0,
        class.x,
        class.y,
        class.z,
        &mut x_mask,
        &mut z_mask,
        &mut out,
    );
    debug_assert_eq!(out.len(), expected);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn fill_positions(
    n: usize,
    q: usize,
    x_left: usize,
    y_left: usize,
    z_left: usize,
    x_mask: &mut u64,
    z_mask: &mut u64,
    out: &mut Vec<PauliOp>,
) {
    let remaining_weight = x_left + y_left + z_left;
    if q == n {
        if remaining_weight == 0 {
            out.push(PauliOp::hermitian_from_masks(n, *x_mask, *z_mask).expect("masks in range"));
        }
        return;
    }
    let slots_after = n - q - 1;
    let bit = 1u64 << q;
    // Letter choices in canonical order: I, X, Y, Z.
    if remaining_weight <= slots_after {
        fill_positions(n, q + 1, x_left, y_left, z_left, x_mask, z_mask, out);
    }
    if x_left > 0 {
        *x_mask |= bit;
        fill_positions(n, q + 1, x_left - 1, y_left, z_left, x_mask, z_mask, out);
        *x_mask &= !bit;
    }
    if y_left > 0 {
        *x_mask |= bit;
        *z_mask |= bit;
        fill_positions(n, q + 1, x_left, y_left - 1, z_left, x_mask, z_mask, out);
        *x_mask &= !bit;
        *z_mask &= !bit;
    }
    if z_left > 0 {
        *z_mask |= bit;
        fill_positions(n, q + 1, x_left, y_left, z_left - 1, x_mask, z_mask, out);
        *z_mask &= !bit;
    }
}

/// Enumerates all 4^n phaseless Pauli operators on `n` qubits in canonical
/// lexicographic order.
pub fn enumerate_all(n: usize) -> Result<Vec<PauliOp>> {
    check_qubit_count(n)?;
    if n > 14 {
        return Err(Error::ExpansionCap { n, cap: 14 });
    }
    let mut out = Vec::with_capacity(1usize << (2 * n));
    let mut stack: Vec<(u64, u64)> = vec![(0, 0)];
    // Depth-first over letter ranks keeps lexicographic order.
    fn rec(n: usize, q: usize, x: u64, z: u64, out: &mut Vec<PauliOp>) {
        if q == n {
            out.push(PauliOp::hermitian_from_masks(n, x, z).expect("masks in range"));
            return;
        }
        let bit = 1u64 << q;
        rec(n, q + 1, x, z, out);
        rec(n, q + 1, x | bit, z, out);
        rec(n, q + 1, x | bit, z | bit, out);
        rec(n, q + 1, x, z | bit, out);
    }
    stack.clear();
    rec(n, 0, 0, 0, &mut out);
    Ok(out)
}
