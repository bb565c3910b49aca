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

//! Search for noiseless and unitarily correctable qubit encodings.
//!
//! A class-parameterized channel fixes (up to sign) every Pauli observable in
//! the weight classes whose eigenvalue has unit magnitude. Grouping those
//! fixed observables into triplets obeying the su(2) commutation relations
//! exhibits encoded qubits: each triplet is unitarily related to {X, Y, Z} on
//! one qubit.
//!
//! The search is greedy and deterministic. Operators are kept in canonical
//! lexicographic order, pairs are scanned in that order, and the first
//! anticommuting pair whose product also lies in the fixed set founds a
//! triplet. The triplet and everything failing to commute with it are removed
//! and the scan restarts. The greedy scan need not find every encoding; the
//! leftover commuting operators are reported for inspection.

use serde::{Deserialize, Serialize};

use crate::channel::PipChannel;
use crate::error::{Error, Result};
use crate::pauli::{enumerate_class, PauliOp, WeightClass};

/// Search mode: noiseless encodings use the +1 eigenspace only; unitarily
/// correctable ones use the whole ±1 eigenspace.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Noiseless,
    Ucs,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Noiseless => write!(f, "noiseless"),
            Mode::Ucs => write!(f, "ucs"),
        }
    }
}

/// Sign of a fixed eigenvalue.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(&self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// Three Hermitian Pauli operators forming one encoded qubit:
/// pairwise anticommuting with y = i·x·z, hence x·y = i·z and cyclic.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Triplet {
    pub x_op: PauliOp,
    pub y_op: PauliOp,
    pub z_op: PauliOp,
    /// The raw scan pair that founded the triplet.
    pub provenance: (PauliOp, PauliOp),
}

impl Triplet {
    /// Builds the triplet from an anticommuting pair, assigning the
    /// lexicographically smaller operator the Z role.
    fn from_pair(a: PauliOp, b: PauliOp) -> Result<Self> {
        let (z_op, x_op) = if a < b { (a, b) } else { (b, a) };
        let y_op = x_op.multiply(&z_op)?.with_extra_phase(1);
        debug_assert!(y_op.is_hermitian());
        Ok(Self {
            x_op,
            y_op,
            z_op,
            provenance: (a, b),
        })
    }

    pub fn members(&self) -> [PauliOp; 3] {
        [self.x_op, self.y_op, self.z_op]
    }
}

/// Options for the code search.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Eigenvalues within `tol` of unit magnitude count as fixed. The default
    /// suits exact channels; loosen it for statistically estimated inputs.
    pub tol: f64,
    /// Refuse to expand fixed classes into explicit operators beyond this
    /// qubit count; the expansion can reach 4^n operators.
    pub expansion_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            expansion_cap: 12,
        }
    }
}

/// Outcome of a code search.
#[derive(Clone, Debug)]
pub struct CodeReport {
    pub n_qubits: usize,
    pub mode: Mode,
    pub tol: f64,
    /// Weight classes with unit-magnitude eigenvalue and the eigenvalue sign.
    pub fixed_classes: Vec<(WeightClass, Sign)>,
    /// Every Pauli operator in a fixed class, identity included, canonical
    /// order, with the sign inherited from its class.
    pub fixed_paulis: Vec<(PauliOp, Sign)>,
    pub triplets: Vec<Triplet>,
    /// Fixed operators left over after the greedy scan: they commute with all
    /// accepted triplets but founded none themselves.
    pub residual_ops: Vec<PauliOp>,
    pub logical_qubits: usize,
}

impl CodeReport {
    /// Sign of a fixed operator, if it belongs to a fixed class.
    pub fn sign_of(&self, op: &PauliOp) -> Option<Sign> {
        let class = op.weight_class();
        self.fixed_classes
            .iter()
            .find(|(c, _)| *c == class)
            .map(|(_, sign)| *sign)
    }
}

/// Weight classes whose eigenvalue is within `tol` of +1 (noiseless mode) or
/// of unit magnitude with the sign recorded (UCS mode). The identity class is
/// always present with sign +.
pub fn fixed_classes(ch: &PipChannel, mode: Mode, tol: f64) -> Result<Vec<(WeightClass, Sign)>> {
    let eigen = ch.to_eigen()?;
    let index = eigen.class_index();
    let mut out = Vec::new();
    for (idx, &lambda) in eigen.values().iter().enumerate() {
        let class = index.class_at(idx);
        let keep = match mode {
            Mode::Noiseless => lambda >= 1.0 - tol,
            Mode::Ucs => lambda.abs() >= 1.0 - tol,
        };
        if keep {
            let sign = if lambda >= 0.0 { Sign::Plus } else { Sign::Minus };
            out.push((class, sign));
        }
    }
    debug_assert_eq!(out.first().map(|(c, _)| *c), Some(WeightClass::new(0, 0, 0)));
    Ok(out)
}

/// Expands fixed classes into their member operators, identity excluded,
/// canonical lexicographic order.
pub fn expand_fixed_set(
    n: usize,
    classes: &[(WeightClass, Sign)],
    expansion_cap: usize,
) -> Result<Vec<PauliOp>> {
    if n > expansion_cap {
        return Err(Error::ExpansionCap {
            n,
            cap: expansion_cap,
        });
    }
    let mut out = Vec::new();
    for (class, _) in classes {
        if class.total() == 0 {
            continue;
        }
        out.extend(enumerate_class(n, *class)?);
    }
    out.sort();
    Ok(out)
}

/// Greedy deterministic triplet extraction from a fixed operator set.
///
/// Scans pairs (F[i], F[j]) with i < j in canonical order; accepts the first
/// anticommuting pair whose phaseless product is still present in F; removes
/// the triplet and every operator not commuting with both founders; restarts.
pub fn find_triplets(fixed: &[PauliOp]) -> Result<(Vec<Triplet>, Vec<PauliOp>)> {
    let mut remaining: Vec<PauliOp> = fixed.to_vec();
    remaining.sort();
    remaining.dedup();
    let mut triplets = Vec::new();

    'outer: loop {
        for i in 0..remaining.len() {
            for j in (i + 1)..remaining.len() {
                let a = remaining[i];
                let b = remaining[j];
                if a.commutes(&b)? {
                    continue;
                }
                let product = a.multiply(&b)?.phaseless();
                // Membership is checked explicitly, not assumed from algebra.
                if remaining.binary_search(&product).is_err() {
                    continue;
                }
                let triplet = Triplet::from_pair(a, b)?;
                triplets.push(triplet);
                let mut kept = Vec::with_capacity(remaining.len());
                for op in &remaining {
                    if op.commutes(&a)? && op.commutes(&b)? {
                        kept.push(*op);
                    }
                }
                remaining = kept;
                continue 'outer;
            }
        }
        break;
    }
    Ok((triplets, remaining))
}

/// End-to-end search: fixed classes → operator expansion → triplet scan.
pub fn find_codes(ch: &PipChannel, mode: Mode, options: &SearchOptions) -> Result<CodeReport> {
    let n = ch.n_qubits();
    let classes = fixed_classes(ch, mode, options.tol)?;
    let expanded = expand_fixed_set(n, &classes, options.expansion_cap)?;
    let (triplets, residual_ops) = find_triplets(&expanded)?;

    let mut fixed_paulis = vec![(PauliOp::identity(n)?, Sign::Plus)];
    for (class, sign) in &classes {
        if class.total() == 0 {
            continue;
        }
        for op in enumerate_class(n, *class)? {
            fixed_paulis.push((op, *sign));
        }
    }
    fixed_paulis.sort_by(|(a, _), (b, _)| a.cmp(b));

    let logical_qubits = triplets.len();
    Ok(CodeReport {
        n_qubits: n,
        mode,
        tol: options.tol,
        fixed_classes: classes,
        fixed_paulis,
        triplets,
        residual_ops,
        logical_qubits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{PipChannel, Rep};
    use crate::pauli::enumerate_all;

    fn p(text: &str) -> PauliOp {
        text.parse().unwrap()
    }

    fn w(x: usize, y: usize, z: usize) -> WeightClass {
        WeightClass::new(x, y, z)
    }

    fn zz_dephasing_pip() -> PipChannel {
        PipChannel::from_class_masses(2, [(w(0, 0, 0), 0.5), (w(0, 0, 2), 0.5)]).unwrap()
    }

    fn xy_yx_pip() -> PipChannel {
        PipChannel::from_class_masses(2, [(w(1, 1, 0), 1.0)]).unwrap()
    }

    #[test]
    fn fixed_classes_of_the_zz_dephasing_channel() {
        let classes = fixed_classes(&zz_dephasing_pip(), Mode::Noiseless, 1e-9).unwrap();
        let expected = [
            w(0, 0, 0),
            w(0, 0, 1),
            w(0, 0, 2),
            w(0, 2, 0),
            w(1, 1, 0),
            w(2, 0, 0),
        ];
        assert_eq!(classes.len(), expected.len());
        for (class, sign) in &classes {
            assert!(expected.contains(class), "unexpected class {class}");
            assert_eq!(*sign, Sign::Plus);
        }
    }

    #[test]
    fn fixed_classes_of_the_xy_yx_channel() {
        let noiseless = fixed_classes(&xy_yx_pip(), Mode::Noiseless, 1e-9).unwrap();
        let plus: Vec<WeightClass> = noiseless.iter().map(|(c, _)| *c).collect();
        assert_eq!(plus, vec![w(0, 0, 0), w(0, 0, 2), w(1, 1, 0)]);

        let ucs = fixed_classes(&xy_yx_pip(), Mode::Ucs, 1e-9).unwrap();
        let minus: Vec<WeightClass> = ucs
            .iter()
            .filter(|(_, s)| *s == Sign::Minus)
            .map(|(c, _)| *c)
            .collect();
        assert_eq!(minus, vec![w(0, 0, 1), w(0, 2, 0), w(2, 0, 0)]);
        assert_eq!(ucs.len(), 6);
    }

    #[test]
    fn expansion_yields_canonical_operator_order() {
        let classes = fixed_classes(&zz_dephasing_pip(), Mode::Noiseless, 1e-9).unwrap();
        let ops = expand_fixed_set(2, &classes, 12).unwrap();
        let expected: Vec<PauliOp> = ["IZ", "XX", "XY", "YX", "YY", "ZI", "ZZ"]
            .iter()
            .map(|s| p(s))
            .collect();
        assert_eq!(ops, expected);
    }

    #[test]
    fn expansion_of_identity_class_alone_is_empty() {
        let ops = expand_fixed_set(2, &[(w(0, 0, 0), Sign::Plus)], 12).unwrap();
        assert!(ops.is_empty());
    }

    #[test]
    fn expansion_of_single_x_class() {
        let ops = expand_fixed_set(2, &[(w(1, 0, 0), Sign::Plus)], 12).unwrap();
        assert_eq!(ops, vec![p("IX"), p("XI")]);
    }

    #[test]
    fn expansion_cap_is_enforced() {
        let err = expand_fixed_set(13, &[(w(0, 0, 0), Sign::Plus)], 12);
        assert!(matches!(err, Err(Error::ExpansionCap { .. })));
    }

    #[test]
    fn triplet_scan_on_the_dephasing_fixed_set() {
        let fixed: Vec<PauliOp> = ["IZ", "XX", "XY", "YX", "YY", "ZI", "ZZ"]
            .iter()
            .map(|s| p(s))
            .collect();
        let (triplets, residual) = find_triplets(&fixed).unwrap();
        assert_eq!(triplets.len(), 1);
        let t = &triplets[0];
        assert_eq!(t.x_op, p("XX"));
        assert_eq!(t.y_op, p("XY"));
        assert_eq!(t.z_op, p("IZ"));
        assert_eq!(residual, vec![p("ZZ")]);
    }

    #[test]
    fn no_triplets_in_a_commuting_fixed_set() {
        let fixed = vec![p("XY"), p("YX"), p("ZZ")];
        let (triplets, residual) = find_triplets(&fixed).unwrap();
        assert!(triplets.is_empty());
        assert_eq!(residual.len(), 3);
    }

    #[test]
    fn triplets_satisfy_su2_products() {
        let report = find_codes(&zz_dephasing_pip(), Mode::Noiseless, &SearchOptions::default())
            .unwrap();
        for t in &report.triplets {
            let i = |op: PauliOp| op.with_extra_phase(1);
            assert_eq!(t.x_op.multiply(&t.y_op).unwrap(), i(t.z_op));
            assert_eq!(t.y_op.multiply(&t.z_op).unwrap(), i(t.x_op));
            assert_eq!(t.z_op.multiply(&t.x_op).unwrap(), i(t.y_op));
        }
    }

    #[test]
    fn identity_channel_fills_every_qubit() {
        let pip = PipChannel::from_class_masses(3, [(w(0, 0, 0), 1.0)]).unwrap();
        let report = find_codes(&pip, Mode::Noiseless, &SearchOptions::default()).unwrap();
        assert_eq!(report.logical_qubits, 3);
        // All nine cross-pairs between any two triplets commute.
        for (i, a) in report.triplets.iter().enumerate() {
            for b in report.triplets.iter().skip(i + 1) {
                for x in a.members() {
                    for y in b.members() {
                        assert!(x.commutes(&y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn fully_depolarizing_channel_has_no_code() {
        let n = 2;
        let uniform = 1.0 / 16.0;
        let terms: Vec<_> = enumerate_all(n)
            .unwrap()
            .into_iter()
            .map(|op| (op, uniform))
            .collect();
        let pauli = crate::channel::PauliChannel::new(n, terms).unwrap();
        let pip = crate::twirl::permutation_twirl(&pauli);
        let report = find_codes(&pip, Mode::Noiseless, &SearchOptions::default()).unwrap();
        assert_eq!(report.logical_qubits, 0);
        assert_eq!(report.fixed_classes.len(), 1);
    }

    #[test]
    fn ucs_mode_recovers_a_qubit_from_the_xy_yx_channel() {
        let noiseless =
            find_codes(&xy_yx_pip(), Mode::Noiseless, &SearchOptions::default()).unwrap();
        assert_eq!(noiseless.logical_qubits, 0);
        let ucs = find_codes(&xy_yx_pip(), Mode::Ucs, &SearchOptions::default()).unwrap();
        assert_eq!(ucs.logical_qubits, 1);
        let t = &ucs.triplets[0];
        assert_eq!((t.x_op, t.y_op, t.z_op), (p("XX"), p("XY"), p("IZ")));
    }

    #[test]
    fn widening_the_tolerance_never_loses_fixed_classes() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(31);
        for _ in 0..20 {
            let k = crate::weight::class_count(2).unwrap();
            let raw: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let pip = PipChannel::new(2, Rep::Prob, probs).unwrap();
            let mut previous = 0;
            for tol in [1e-12, 1e-6, 1e-3, 0.1, 0.5] {
                let classes = fixed_classes(&pip, Mode::Ucs, tol).unwrap();
                assert!(classes.len() >= previous);
                previous = classes.len();
            }
        }
    }

    #[test]
    fn report_signs_follow_classes() {
        let report = find_codes(&xy_yx_pip(), Mode::Ucs, &SearchOptions::default()).unwrap();
        assert_eq!(report.sign_of(&p("XX")), Some(Sign::Minus));
        assert_eq!(report.sign_of(&p("XY")), Some(Sign::Plus));
        assert_eq!(report.sign_of(&p("IZ")), Some(Sign::Minus));
        let plus: Vec<String> = report
            .fixed_paulis
            .iter()
            .filter(|(_, s)| *s == Sign::Plus)
            .map(|(op, _)| op.to_string())
            .collect();
        assert_eq!(plus, vec!["II", "XY", "YX", "ZZ"]);
    }
}
