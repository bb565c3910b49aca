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

//! Command-line front end: channel twirling, omega tables, code search,
//! circuit synthesis, verification and eigenvalue estimation.
//!
//! Exit codes: 0 on success, 2 on parse or validation failure, 3 when a
//! resource cap refuses the request, 1 on anything else.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use twirlcode::io::{
    channel_to_doc, gates_to_doc, load_channel, load_report, report_to_doc, save_json,
    to_json_string, CircuitsDoc, EstimationDoc, LoadedChannel,
};
use twirlcode::{
    find_codes, mc_estimate_eigenvalue, pauli_twirl, permutation_twirl, pip_twirl,
    synthesize_encoder, synthesize_recovery_from_report, verify_code, CliffordCircuit, CodeReport,
    Error, GeneralChannel, Mode, OmegaMatrix, PipChannel, SearchOptions,
    SimOptions, WeightClass,
};

#[derive(Parser)]
#[command(
    name = "twirlcode",
    about = "Twirl quantum channels and search them for noiseless and unitarily correctable qubit encodings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Pauli,
    Perm,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Noiseless,
    Ucs,
}

impl From<ModeArg> for Mode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Noiseless => Mode::Noiseless,
            ModeArg::Ucs => Mode::Ucs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Twirl a channel file and write the averaged channel.
    Twirl {
        /// Input channel JSON (pauli, kraus or pip).
        input: PathBuf,
        /// Unitary set to average over.
        #[arg(long, value_enum, default_value = "both")]
        group: GroupArg,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Dense-simulation qubit cap for Kraus inputs.
        #[arg(long, default_value_t = twirlcode::channel::DEFAULT_DENSE_CAP)]
        dense_cap: usize,
    },
    /// Print or export the probability-to-eigenvalue map for n qubits.
    Omega {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Output file: “.csv” writes a labeled table, anything else JSON;
        /// stdout table when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search a channel for noiseless or unitarily correctable encodings.
    FindCodes {
        /// Input channel JSON; non-PIP channels are twirled first.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "noiseless")]
        mode: ModeArg,
        /// Eigenvalues within this distance of unit magnitude count as fixed.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Refuse fixed-set expansion beyond this qubit count.
        #[arg(long, default_value_t = 12)]
        cap: usize,
        /// Write the code report here; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = twirlcode::channel::DEFAULT_DENSE_CAP)]
        dense_cap: usize,
    },
    /// Synthesize encoder and recovery circuits from a code report.
    Synth {
        /// Code report JSON produced by find-codes.
        report: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a code report against the original channel and its twirl.
    Verify {
        /// Original channel JSON.
        original: PathBuf,
        /// Code report JSON.
        report: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = twirlcode::channel::DEFAULT_DENSE_CAP)]
        dense_cap: usize,
    },
    /// Estimate one class eigenvalue by simulating the sampling experiment.
    Estimate {
        /// Input channel JSON.
        input: PathBuf,
        /// Weight class as "wx,wy,wz".
        #[arg(long)]
        class: String,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = twirlcode::channel::DEFAULT_DENSE_CAP)]
        dense_cap: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        let code = if err.is_resource_cap() {
            3
        } else if err.is_invalid_input() {
            2
        } else {
            1
        };
        std::process::exit(code);
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Twirl {
            input,
            group,
            output,
            dense_cap,
        } => cmd_twirl(&input, group, output.as_deref(), dense_cap),
        Command::Omega { n, output } => cmd_omega(n, output.as_deref()),
        Command::FindCodes {
            input,
            mode,
            tol,
            cap,
            output,
            dense_cap,
        } => cmd_find_codes(&input, mode.into(), tol, cap, output.as_deref(), dense_cap),
        Command::Synth { report, output } => cmd_synth(&report, output.as_deref()),
        Command::Verify {
            original,
            report,
            output,
            dense_cap,
        } => cmd_verify(&original, &report, output.as_deref(), dense_cap),
        Command::Estimate {
            input,
            class,
            samples,
            seed,
            output,
            dense_cap,
        } => cmd_estimate(&input, &class, samples, seed, output.as_deref(), dense_cap),
    }
}

fn load_with_warnings(path: &Path) -> Result<LoadedChannel, Error> {
    let loaded = load_channel(path)?;
    for warning in &loaded.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(loaded.channel)
}

fn emit<T: serde::Serialize>(value: &T, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => {
            save_json(value, path)?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", to_json_string(value)?),
    }
    Ok(())
}

/// Expands any channel representation into dense Kraus form.
fn channel_to_dense(channel: &LoadedChannel, dense_cap: usize) -> Result<GeneralChannel, Error> {
    match channel {
        LoadedChannel::General(ch) => {
            if ch.n_qubits() > dense_cap {
                return Err(Error::DenseCap {
                    n: ch.n_qubits(),
                    cap: dense_cap,
                });
            }
            Ok(ch.clone())
        }
        LoadedChannel::Pauli(ch) => ch.to_general(dense_cap),
        LoadedChannel::Pip(ch) => ch.to_pauli_channel()?.to_general(dense_cap),
    }
}

/// Twirls any channel representation down to class parameters.
fn channel_to_pip(channel: &LoadedChannel, dense_cap: usize) -> Result<PipChannel, Error> {
    match channel {
        LoadedChannel::General(ch) => pip_twirl(ch, dense_cap),
        LoadedChannel::Pauli(ch) => Ok(permutation_twirl(ch)),
        LoadedChannel::Pip(ch) => Ok(ch.clone()),
    }
}

fn cmd_twirl(
    input: &Path,
    group: GroupArg,
    output: Option<&Path>,
    dense_cap: usize,
) -> Result<(), Error> {
    let channel = load_with_warnings(input)?;
    let twirled = match group {
        GroupArg::Pauli => match &channel {
            LoadedChannel::General(ch) => {
                LoadedChannel::Pauli(pauli_twirl(ch, dense_cap)?)
            }
            // Diagonal channels are fixed points of the Pauli twirl.
            other => other.clone(),
        },
        GroupArg::Perm => match &channel {
            LoadedChannel::General(_) => {
                return Err(Error::Validation(
                    "a permutation twirl alone does not leave a Pauli channel; \
                     use --group both for Kraus inputs"
                        .into(),
                ))
            }
            LoadedChannel::Pauli(ch) => LoadedChannel::Pip(permutation_twirl(ch)),
            pip @ LoadedChannel::Pip(_) => pip.clone(),
        },
        GroupArg::Both => LoadedChannel::Pip(channel_to_pip(&channel, dense_cap)?),
    };
    emit(&channel_to_doc(&twirled), output)
}

fn cmd_omega(n: usize, output: Option<&Path>) -> Result<(), Error> {
    let omega = OmegaMatrix::build(n)?;
    let index = omega.class_index();
    match output {
        None => {
            println!(
                "omega matrix for n = {n} ({} classes; rows: applied class, columns: observed class)",
                index.len()
            );
            print!("{:>10}", "");
            for w in index.classes() {
                print!(" {:>8}", w.to_string());
            }
            println!();
            for (row, v) in index.classes().iter().enumerate() {
                print!("{:>10}", v.to_string());
                for col in 0..index.len() {
                    print!(" {:>8.4}", omega.entries()[(row, col)]);
                }
                println!();
            }
            println!("condition number: {:.3e}", omega.condition_number());
        }
        Some(path) if path.extension().is_some_and(|ext| ext == "csv") => {
            let mut text = String::from("applied\\observed");
            for w in index.classes() {
                text.push(',');
                text.push_str(&format!("\"{w}\""));
            }
            text.push('\n');
            for (row, v) in index.classes().iter().enumerate() {
                text.push_str(&format!("\"{v}\""));
                for col in 0..index.len() {
                    text.push_str(&format!(",{:.16e}", omega.entries()[(row, col)]));
                }
                text.push('\n');
            }
            std::fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        Some(path) => {
            #[derive(serde::Serialize)]
            struct OmegaEntryDoc {
                v: [usize; 3],
                w: [usize; 3],
                value: f64,
            }
            #[derive(serde::Serialize)]
            struct OmegaDoc {
                n: usize,
                condition_number: f64,
                entries: Vec<OmegaEntryDoc>,
            }
            let mut entries = Vec::with_capacity(index.len() * index.len());
            for (row, v) in index.classes().iter().enumerate() {
                for (col, w) in index.classes().iter().enumerate() {
                    entries.push(OmegaEntryDoc {
                        v: [v.x, v.y, v.z],
                        w: [w.x, w.y, w.z],
                        value: omega.entries()[(row, col)],
                    });
                }
            }
            save_json(
                &OmegaDoc {
                    n,
                    condition_number: omega.condition_number(),
                    entries,
                },
                path,
            )?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn summarize_report(report: &CodeReport) {
    let classes: Vec<String> = report
        .fixed_classes
        .iter()
        .map(|(class, sign)| format!("{class}{sign}"))
        .collect();
    println!("fixed classes: {}", classes.join(" "));
    let paulis: Vec<String> = report
        .fixed_paulis
        .iter()
        .map(|(op, sign)| match report.mode {
            Mode::Noiseless => op.to_string(),
            Mode::Ucs => format!("{sign}{op}"),
        })
        .collect();
    println!("fixed Paulis ({}): {}", paulis.len(), paulis.join(" "));
    if report.logical_qubits == 0 {
        println!("0 logical qubits");
    } else {
        let triplets: Vec<String> = report
            .triplets
            .iter()
            .map(|t| format!("{}/{}/{}", t.x_op, t.y_op, t.z_op))
            .collect();
        let noun = if report.logical_qubits == 1 {
            "logical qubit"
        } else {
            "logical qubits"
        };
        let label = if report.triplets.len() == 1 {
            "triplet"
        } else {
            "triplets"
        };
        println!(
            "{} {noun}; {label} {}",
            report.logical_qubits,
            triplets.join(", ")
        );
    }
    if !report.residual_ops.is_empty() {
        let residual: Vec<String> = report.residual_ops.iter().map(|o| o.to_string()).collect();
        println!("residual commuting operators: {}", residual.join(" "));
    }
}

fn cmd_find_codes(
    input: &Path,
    mode: Mode,
    tol: f64,
    cap: usize,
    output: Option<&Path>,
    dense_cap: usize,
) -> Result<(), Error> {
    let channel = load_with_warnings(input)?;
    let kind = channel.kind();
    let pip = channel_to_pip(&channel, dense_cap)?;
    if kind != "pip" {
        eprintln!("note: {kind} input twirled to class parameters before the search");
    }
    let options = SearchOptions {
        tol,
        expansion_cap: cap,
    };
    let report = find_codes(&pip, mode, &options)?;
    println!(
        "channel: {} ({kind}, n = {})",
        input.display(),
        pip.n_qubits()
    );
    println!("mode: {mode}  tol: {tol:e}");
    summarize_report(&report);
    emit(&report_to_doc(&report), output)
}

fn cmd_synth(report_path: &Path, output: Option<&Path>) -> Result<(), Error> {
    let report = load_report(report_path)?;
    let encoder = synthesize_encoder(&report.triplets, report.n_qubits)?;
    let recovery = match report.mode {
        Mode::Noiseless => CliffordCircuit::new(report.n_qubits),
        Mode::Ucs => synthesize_recovery_from_report(&report)?,
    };
    println!(
        "encoder: {} gate(s); recovery: {} gate(s)",
        encoder.len(),
        recovery.len()
    );
    let doc = CircuitsDoc {
        n: report.n_qubits,
        encoder: gates_to_doc(&encoder),
        recovery: gates_to_doc(&recovery),
    };
    emit(&doc, output)
}

fn cmd_verify(
    original_path: &Path,
    report_path: &Path,
    output: Option<&Path>,
    dense_cap: usize,
) -> Result<(), Error> {
    let channel = load_with_warnings(original_path)?;
    let original = channel_to_dense(&channel, dense_cap)?;
    let report = load_report(report_path)?;
    let encoder = synthesize_encoder(&report.triplets, report.n_qubits)?;
    let recovery = match report.mode {
        Mode::Noiseless => CliffordCircuit::new(report.n_qubits),
        Mode::Ucs => synthesize_recovery_from_report(&report)?,
    };
    let options = SimOptions { dense_cap };
    let outcome = verify_code(&original, &report, &encoder, &recovery, &options)?;
    println!(
        "average gate fidelity: original {:.12}, twirled {:.12}",
        outcome.original.avg_gate_fidelity, outcome.twirled.avg_gate_fidelity
    );
    if outcome.theorem_violation {
        eprintln!(
            "COUNTEREXAMPLE: the code passes on the twirled channel but fails on the original; \
             this should be impossible for CP inputs — please report the channel file"
        );
    }
    emit(&outcome, output)
}

fn parse_class(text: &str) -> Result<WeightClass, Error> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Validation(format!(
            "class must be \"wx,wy,wz\", got {text:?}"
        )));
    }
    let parse = |s: &str| -> Result<usize, Error> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Validation(format!("bad class component {s:?}")))
    };
    Ok(WeightClass::new(
        parse(parts[0])?,
        parse(parts[1])?,
        parse(parts[2])?,
    ))
}

fn cmd_estimate(
    input: &Path,
    class_text: &str,
    samples: u64,
    seed: u64,
    output: Option<&Path>,
    dense_cap: usize,
) -> Result<(), Error> {
    let class = parse_class(class_text)?;
    let channel = load_with_warnings(input)?;
    let dense = channel_to_dense(&channel, dense_cap)?;
    let options = SimOptions { dense_cap };
    let result = mc_estimate_eigenvalue(&dense, class, samples, seed, &options)?;
    println!(
        "class {} estimate {:.6} ± {:.6} ({} samples, seed {})",
        class, result.estimate, result.std_error, result.samples, result.seed
    );
    emit(&EstimationDoc::from(&result), output)
}
