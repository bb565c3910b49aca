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

//! JSON documents for channels, code reports, circuits and result records.
//!
//! Every document labels its data explicitly: Pauli operators are strings,
//! weight classes are `[w_x, w_y, w_z]` triples, gates carry their qubit
//! indices. Positional encodings are never used, so internal orderings can
//! change without breaking files. Floats are serialized with 17 significant
//! digits, which round-trips every f64 exactly.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{
    validate_kraus, validate_pauli_terms, validate_pip, GeneralChannel, PauliChannel, PipChannel,
    Rep, ValidationReport,
};
use crate::clifford::{CliffordCircuit, Gate};
use crate::codes::{CodeReport, Mode, Sign, Triplet};
use crate::error::{Error, Result};
use crate::pauli::{PauliOp, WeightClass};

// ---------------------------------------------------------------------------
// Channel documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PauliTermDoc {
    pub pauli: String,
    pub prob: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassValueDoc {
    pub w: [usize; 3],
    pub value: f64,
}

/// On-disk channel document, dispatched on the `type` tag.
///
/// Kraus operators are stored row-major, one `[re, im]` pair per entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ChannelDoc {
    #[serde(rename = "pauli")]
    Pauli {
        n: usize,
        terms: Vec<PauliTermDoc>,
        #[serde(skip_serializing_if = "Option::is_none")]
        comments: Option<String>,
    },
    #[serde(rename = "kraus")]
    Kraus {
        n: usize,
        ops: Vec<Vec<[f64; 2]>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        comments: Option<String>,
    },
    #[serde(rename = "pip")]
    Pip {
        n: usize,
        rep: Rep,
        classes: Vec<ClassValueDoc>,
        #[serde(skip_serializing_if = "Option::is_none")]
        comments: Option<String>,
    },
}

/// A channel loaded from disk, in whichever representation the file used.
#[derive(Clone, Debug)]
pub enum LoadedChannel {
    General(GeneralChannel),
    Pauli(PauliChannel),
    Pip(PipChannel),
}

impl LoadedChannel {
    pub fn n_qubits(&self) -> usize {
        match self {
            LoadedChannel::General(ch) => ch.n_qubits(),
            LoadedChannel::Pauli(ch) => ch.n_qubits(),
            LoadedChannel::Pip(ch) => ch.n_qubits(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LoadedChannel::General(_) => "kraus",
            LoadedChannel::Pauli(_) => "pauli",
            LoadedChannel::Pip(_) => "pip",
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            LoadedChannel::General(ch) => ch.validate(),
            LoadedChannel::Pauli(ch) => ch.validate(),
            LoadedChannel::Pip(ch) => ch.validate(),
        }
    }
}

/// Result of loading a channel file: the channel plus non-fatal warnings
/// (currently only phase prefixes stripped from Pauli terms).
#[derive(Debug)]
pub struct LoadResult {
    pub channel: LoadedChannel,
    pub warnings: Vec<String>,
}

/// Parses and validates a channel document. Validation runs on the raw data
/// before construction so defect magnitudes reach the error message.
pub fn channel_from_doc(doc: &ChannelDoc) -> Result<LoadResult> {
    let mut warnings = Vec::new();
    let channel = match doc {
        ChannelDoc::Pauli { n, terms, .. } => {
            let mut parsed = Vec::with_capacity(terms.len());
            for term in terms {
                let op: PauliOp = term.pauli.parse()?;
                if op.prefix_exp() != 0 {
                    warnings.push(format!(
                        "phase prefix on \"{}\" ignored: probabilities attach to phaseless operators",
                        term.pauli
                    ));
                }
                parsed.push((op.phaseless(), term.prob));
            }
            let report = validate_pauli_terms(*n, &parsed);
            if !report.is_valid() {
                return Err(Error::Validation(report.summary()));
            }
            LoadedChannel::Pauli(PauliChannel::new(*n, parsed)?)
        }
        ChannelDoc::Kraus { n, ops, .. } => {
            let dim = 1usize
                .checked_shl(*n as u32)
                .ok_or(Error::QubitCountOutOfRange(*n))?;
            let mut kraus = Vec::with_capacity(ops.len());
            for (idx, flat) in ops.iter().enumerate() {
                if flat.len() != dim * dim {
                    return Err(Error::Validation(format!(
                        "Kraus operator {idx} has {} entries, expected {}",
                        flat.len(),
                        dim * dim
                    )));
                }
                let op = nalgebra::DMatrix::from_fn(dim, dim, |row, col| {
                    let [re, im] = flat[row * dim + col];
                    num_complex::Complex64::new(re, im)
                });
                kraus.push(op);
            }
            let report = validate_kraus(*n, &kraus);
            if !report.is_valid() {
                return Err(Error::Validation(report.summary()));
            }
            LoadedChannel::General(GeneralChannel::new(*n, kraus)?)
        }
        ChannelDoc::Pip { n, rep, classes, .. } => {
            let index = crate::weight::ClassIndex::new(*n)?;
            let mut values = vec![f64::NAN; index.len()];
            let mut filled = vec![false; index.len()];
            for entry in classes {
                let class = WeightClass::new(entry.w[0], entry.w[1], entry.w[2]);
                let idx = index
                    .index_of(&class)
                    .ok_or(Error::ClassTooHeavy { class, n: *n })?;
                if filled[idx] {
                    return Err(Error::Validation(format!(
                        "class {class} listed twice"
                    )));
                }
                filled[idx] = true;
                values[idx] = entry.value;
            }
            // Unlisted classes default to 0 in the probability picture; the
            // eigenvalue picture needs every class pinned.
            for (idx, done) in filled.iter().enumerate() {
                if !done {
                    match rep {
                        Rep::Prob => values[idx] = 0.0,
                        Rep::Eigen => {
                            return Err(Error::Validation(format!(
                                "eigenvalue document must list every class; {} is missing",
                                index.class_at(idx)
                            )))
                        }
                    }
                }
            }
            let report = validate_pip(*n, *rep, &values);
            if !report.is_valid() {
                return Err(Error::Validation(report.summary()));
            }
            LoadedChannel::Pip(PipChannel::new(*n, *rep, values)?)
        }
    };
    Ok(LoadResult { channel, warnings })
}

pub fn channel_to_doc(channel: &LoadedChannel) -> ChannelDoc {
    match channel {
        LoadedChannel::Pauli(ch) => ChannelDoc::Pauli {
            n: ch.n_qubits(),
            terms: ch
                .terms()
                .map(|(op, prob)| PauliTermDoc {
                    pauli: op.to_string(),
                    prob,
                })
                .collect(),
            comments: None,
        },
        LoadedChannel::General(ch) => ChannelDoc::Kraus {
            n: ch.n_qubits(),
            ops: ch
                .kraus()
                .iter()
                .map(|op| {
                    let dim = op.nrows();
                    let mut flat = Vec::with_capacity(dim * dim);
                    for row in 0..dim {
                        for col in 0..dim {
                            let entry = op[(row, col)];
                            flat.push([entry.re, entry.im]);
                        }
                    }
                    flat
                })
                .collect(),
            comments: None,
        },
        LoadedChannel::Pip(ch) => {
            let index = ch.class_index();
            let keep_zero = ch.rep() == Rep::Eigen;
            ChannelDoc::Pip {
                n: ch.n_qubits(),
                rep: ch.rep(),
                classes: ch
                    .values()
                    .iter()
                    .enumerate()
                    .filter(|(_, value)| keep_zero || **value != 0.0)
                    .map(|(idx, value)| {
                        let class = index.class_at(idx);
                        ClassValueDoc {
                            w: [class.x, class.y, class.z],
                            value: *value,
                        }
                    })
                    .collect(),
                comments: None,
            }
        }
    }
}

/// Loads a channel file, dispatching on its `type` tag and validating.
pub fn load_channel(path: &Path) -> Result<LoadResult> {
    let text = std::fs::read_to_string(path)?;
    let doc: ChannelDoc = serde_json::from_str(&text)?;
    channel_from_doc(&doc)
}

// ---------------------------------------------------------------------------
// Code report documents
// ---------------------------------------------------------------------------

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        match text.as_str() {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!(
                "expected \"+\" or \"-\", got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedClassDoc {
    pub w: [usize; 3],
    pub sign: Sign,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPauliDoc {
    pub pauli: String,
    pub sign: Sign,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripletDoc {
    pub x: String,
    pub y: String,
    pub z: String,
    pub pair: [String; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeReportDoc {
    pub n: usize,
    pub mode: Mode,
    pub tol: f64,
    pub fixed_classes: Vec<FixedClassDoc>,
    pub fixed_paulis: Vec<FixedPauliDoc>,
    pub triplets: Vec<TripletDoc>,
    pub residual: Vec<String>,
    pub logical_qubits: usize,
}

pub fn report_to_doc(report: &CodeReport) -> CodeReportDoc {
    CodeReportDoc {
        n: report.n_qubits,
        mode: report.mode,
        tol: report.tol,
        fixed_classes: report
            .fixed_classes
            .iter()
            .map(|(class, sign)| FixedClassDoc {
                w: [class.x, class.y, class.z],
                sign: *sign,
            })
            .collect(),
        fixed_paulis: report
            .fixed_paulis
            .iter()
            .map(|(op, sign)| FixedPauliDoc {
                pauli: op.to_string(),
                sign: *sign,
            })
            .collect(),
        triplets: report
            .triplets
            .iter()
            .map(|t| TripletDoc {
                x: t.x_op.to_string(),
                y: t.y_op.to_string(),
                z: t.z_op.to_string(),
                pair: [t.provenance.0.to_string(), t.provenance.1.to_string()],
            })
            .collect(),
        residual: report.residual_ops.iter().map(|op| op.to_string()).collect(),
        logical_qubits: report.logical_qubits,
    }
}

pub fn report_from_doc(doc: &CodeReportDoc) -> Result<CodeReport> {
    let mut triplets = Vec::with_capacity(doc.triplets.len());
    for t in &doc.triplets {
        let x_op: PauliOp = t.x.parse()?;
        let y_op: PauliOp = t.y.parse()?;
        let z_op: PauliOp = t.z.parse()?;
        let expected = x_op.multiply(&z_op)?.with_extra_phase(1);
        if expected != y_op {
            return Err(Error::Validation(format!(
                "triplet {}/{}/{} violates y = i·x·z",
                t.x, t.y, t.z
            )));
        }
        triplets.push(Triplet {
            x_op,
            y_op,
            z_op,
            provenance: (t.pair[0].parse()?, t.pair[1].parse()?),
        });
    }
    if doc.logical_qubits != triplets.len() {
        return Err(Error::Validation(format!(
            "report claims {} logical qubits but lists {} triplets",
            doc.logical_qubits,
            triplets.len()
        )));
    }
    let mut fixed_paulis = Vec::with_capacity(doc.fixed_paulis.len());
    for entry in &doc.fixed_paulis {
        fixed_paulis.push((entry.pauli.parse::<PauliOp>()?, entry.sign));
    }
    let mut residual_ops = Vec::with_capacity(doc.residual.len());
    for text in &doc.residual {
        residual_ops.push(text.parse::<PauliOp>()?);
    }
    Ok(CodeReport {
        n_qubits: doc.n,
        mode: doc.mode,
        tol: doc.tol,
        fixed_classes: doc
            .fixed_classes
            .iter()
            .map(|entry| (WeightClass::new(entry.w[0], entry.w[1], entry.w[2]), entry.sign))
            .collect(),
        fixed_paulis,
        triplets,
        residual_ops,
        logical_qubits: doc.logical_qubits,
    })
}

pub fn load_report(path: &Path) -> Result<CodeReport> {
    let text = std::fs::read_to_string(path)?;
    let doc: CodeReportDoc = serde_json::from_str(&text)?;
    report_from_doc(&doc)
}

// ---------------------------------------------------------------------------
// Circuit documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "g")]
pub enum GateDoc {
    H { q: usize },
    S { q: usize },
    CNOT { c: usize, t: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitsDoc {
    pub n: usize,
    pub encoder: Vec<GateDoc>,
    pub recovery: Vec<GateDoc>,
}

pub fn gates_to_doc(circuit: &CliffordCircuit) -> Vec<GateDoc> {
    circuit
        .gates()
        .iter()
        .map(|gate| match *gate {
            Gate::H(q) => GateDoc::H { q },
            Gate::S(q) => GateDoc::S { q },
            Gate::Cnot { control, target } => GateDoc::CNOT {
                c: control,
                t: target,
            },
        })
        .collect()
}

pub fn gates_from_doc(n: usize, gates: &[GateDoc]) -> Result<CliffordCircuit> {
    let mut circuit = CliffordCircuit::new(n);
    for gate in gates {
        let gate = match *gate {
            GateDoc::H { q } => Gate::H(q),
            GateDoc::S { q } => Gate::S(q),
            GateDoc::CNOT { c, t } => Gate::Cnot {
                control: c,
                target: t,
            },
        };
        circuit.push(gate)?;
    }
    Ok(circuit)
}

// ---------------------------------------------------------------------------
// Estimation documents
// ---------------------------------------------------------------------------

/// Serialized form of an eigenvalue estimation run; the seed is always
/// recorded for reproducibility.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimationDoc {
    pub w: [usize; 3],
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl From<&crate::verify::EstimationResult> for EstimationDoc {
    fn from(result: &crate::verify::EstimationResult) -> Self {
        Self {
            w: [result.class.x, result.class.y, result.class.z],
            estimate: result.estimate,
            std_error: result.std_error,
            samples: result.samples,
            seed: result.seed,
        }
    }
}

// ---------------------------------------------------------------------------
// JSON emission with fixed float precision
// ---------------------------------------------------------------------------

/// Pretty JSON formatter writing every float with 17 significant digits,
/// enough to reproduce any f64 exactly on parse.
struct SigDigitFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl SigDigitFormatter {
    fn new() -> Self {
        Self {
            inner: serde_json::ser::PrettyFormatter::new(),
        }
    }
}

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes any document to pretty JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buffer = Vec::new();
    let mut serializer =
        serde_json::Serializer::with_formatter(&mut buffer, SigDigitFormatter::new());
    value.serialize(&mut serializer)?;
    let mut text = String::from_utf8(buffer)
        .map_err(|e| Error::Numerical(format!("non-UTF8 JSON output: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}
