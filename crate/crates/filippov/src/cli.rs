//! Command-line front end.
//!
//! Verbs: `check`, `construct` (simple / lorentzian / medina / dualpair),
//! `analyze`, `reduce`, `quotient`, `twist`. Input files default to
//! standard input (`-` works too) and output goes to standard output unless
//! `--output` is given, so constructors and checks chain in a pipeline.
//!
//! Exit codes: 0 = success and all requested checks passed; 1 = a requested
//! check failed (violations are printed); 2 = input or usage error.

use std::io::Read;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::algebra::{MetricNAlgebra, ViolationReport};
use crate::analyze::structure_report;
use crate::construct::{
    build_twist, dual_pair, medina_lorentzian, rotation_blocks, simple, theorem_family,
    SignVector,
};
use crate::error::{Error, Result};
use crate::io::{emit_algebra, emit_metric_algebra, parse_algebra_str, ParsedAlgebra};
use crate::linalg::{Rational, Subspace};

#[derive(Parser)]
#[command(
    name = "filippov",
    version,
    about = "Construct, verify and decompose metric Lie n-algebras in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpt {
    /// Write to a file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Jacobi and/or metric checks on an algebra file.
    Check {
        /// Algebra file (defaults to standard input).
        file: Option<PathBuf>,
        /// Check the n-Jacobi identity.
        #[arg(long)]
        jacobi: bool,
        /// Check invariance of the metric.
        #[arg(long)]
        metric: bool,
        /// Run every applicable check (default when no flag is given).
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Emit an algebra file for one of the built-in families.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
    /// Print the structure report of a metric algebra file.
    Analyze {
        file: Option<PathBuf>,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Emit the arity-(n-1) algebra `[x..]_z := [x.., z]`.
    Reduce {
        file: Option<PathBuf>,
        /// The element z as comma-separated rationals, e.g. `0,1,1/2`.
        #[arg(long)]
        element: String,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Emit the quotient I/I-perp of a coisotropic ideal.
    Quotient {
        file: Option<PathBuf>,
        /// Ideal basis rows, semicolon-separated vectors of rationals,
        /// e.g. `0,1,0;0,0,1`.
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Build the twist isometry along a simple block of a double extension.
    Twist {
        file: Option<PathBuf>,
        /// The block as an inclusive 1-based index range, e.g. `3..7`.
        #[arg(long)]
        block: String,
        /// The calibrating central element x, comma-separated rationals.
        #[arg(long)]
        x: String,
        #[command(flatten)]
        out: OutputOpt,
    },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// The simple algebra of dimension arity+1 with the given signs.
    Simple {
        #[arg(long)]
        arity: usize,
        /// Sign string of length arity+1, e.g. `+++-`.
        #[arg(long)]
        signs: String,
        /// Positive rational scale of the metric.
        #[arg(long, default_value = "1")]
        scale: String,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// The indecomposable lorentzian family (double extension of simple
    /// euclidean copies).
    Lorentzian {
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        copies: usize,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// The arity-2 lorentzian algebra from 2x2 rotation blocks
    /// [[0,-a],[a,0]].
    Medina {
        /// Comma-separated rotation rates, e.g. `1,2`.
        #[arg(long)]
        blocks: String,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// The dual pair s (+) s* of the simple euclidean algebra.
    Dualpair {
        #[arg(long)]
        arity: usize,
        /// Positive rational scale of the metric on s.
        #[arg(long, default_value = "1")]
        scale: String,
        #[command(flatten)]
        out: OutputOpt,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
            Ok(text)
        }
    }
}

fn write_output(out: &OutputOpt, content: &str) -> Result<()> {
    match &out.output {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
    }
}

fn parse_vector(text: &str, dim: usize) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != dim {
        return Err(Error::Parse(format!(
            "expected {dim} comma-separated rationals, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid rational literal {p:?}")))
        })
        .collect()
}

fn parse_rows(text: &str, dim: usize) -> Result<Vec<Vec<Rational>>> {
    text.split(';').map(|row| parse_vector(row, dim)).collect()
}

fn parse_range(text: &str, dim: usize) -> Result<(usize, usize)> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("invalid range {text:?}, expected i..j")))?;
    let lo: usize = lo
        .parse()
        .map_err(|_| Error::Parse(format!("invalid range bound {lo:?}")))?;
    let hi: usize = hi
        .parse()
        .map_err(|_| Error::Parse(format!("invalid range bound {hi:?}")))?;
    if lo == 0 || hi < lo || hi > dim {
        return Err(Error::Parse(format!(
            "range {lo}..{hi} out of bounds for dimension {dim}"
        )));
    }
    Ok((lo, hi))
}

fn render_report(name: &str, report: &ViolationReport) -> String {
    const LIMIT: usize = 16;
    if report.is_empty() {
        return format!("{name}: ok\n");
    }
    let mut out = format!("{name}: {} violations\n", report.len());
    for v in report.iter().take(LIMIT) {
        out.push_str(&format!("  {v}\n"));
    }
    if report.len() > LIMIT {
        out.push_str(&format!("  ... and {} more\n", report.len() - LIMIT));
    }
    out
}

#[derive(Serialize)]
struct TwistOutput<A: Serialize> {
    phi: Vec<Vec<String>>,
    calibration: String,
    violations: Vec<String>,
    algebra: A,
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Check {
            file,
            jacobi,
            metric,
            all,
            out,
        } => {
            let parsed = parse_algebra_str(&read_input(&file)?)?;
            let run_all = all || (!jacobi && !metric);
            let mut failed = false;
            let mut text = String::new();
            if jacobi || run_all {
                let report = parsed.algebra().check_jacobi();
                failed |= !report.is_empty();
                text.push_str(&render_report("jacobi", &report));
            }
            if metric || run_all {
                match parsed.metric() {
                    Some(malg) => {
                        let report = malg.check_metric()?;
                        failed |= !report.is_empty();
                        text.push_str(&render_report("metric", &report));
                    }
                    None if metric => {
                        return Err(Error::Parse(
                            "the file has no \"metric\" field, but --metric was requested"
                                .to_string(),
                        ));
                    }
                    None => text.push_str("metric: skipped (no metric field)\n"),
                }
            }
            write_output(&out, &text)?;
            Ok(if failed { 1 } else { 0 })
        }

        Command::Construct { what } => {
            let (algebra, out) = match what {
                ConstructCommand::Simple {
                    arity,
                    signs,
                    scale,
                    out,
                } => {
                    let signs: SignVector = signs.parse()?;
                    let scale: Rational = scale
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid rational {scale:?}")))?;
                    (simple(arity, &signs, &scale)?, out)
                }
                ConstructCommand::Lorentzian { arity, copies, out } => {
                    (theorem_family(arity, copies)?, out)
                }
                ConstructCommand::Medina { blocks, out } => {
                    let rates: Vec<Rational> = blocks
                        .split(',')
                        .map(|p| {
                            p.trim().parse().map_err(|_| {
                                Error::Parse(format!("invalid rational literal {p:?}"))
                            })
                        })
                        .collect::<Result<_>>()?;
                    let (form, skew) = rotation_blocks(&rates)?;
                    (medina_lorentzian(&form, &skew)?, out)
                }
                ConstructCommand::Dualpair { arity, scale, out } => {
                    let scale: Rational = scale
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid rational {scale:?}")))?;
                    let s = simple(arity, &SignVector::all_plus(arity), &scale)?;
                    (dual_pair(&s)?, out)
                }
            };
            write_output(&out, &emit_metric_algebra(&algebra))?;
            Ok(0)
        }

        Command::Analyze { file, json, out } => {
            let malg = parse_algebra_str(&read_input(&file)?)?.into_metric()?;
            let report = structure_report(&malg);
            let text = if json {
                let mut s = serde_json::to_string_pretty(&report).expect("serializable");
                s.push('\n');
                s
            } else {
                report.to_string()
            };
            write_output(&out, &text)?;
            Ok(0)
        }

        Command::Reduce { file, element, out } => {
            let parsed = parse_algebra_str(&read_input(&file)?)?;
            let dim = parsed.algebra().dim();
            let z = parse_vector(&element, dim)?;
            let reduced = parsed.algebra().reduce_by_element(&z)?;
            // A metric algebra stays metric for the same form after the
            // reduction, so carry the form through when one is present.
            let text = match parsed.metric() {
                Some(malg) => {
                    emit_metric_algebra(&MetricNAlgebra::new(reduced, malg.form.clone())?)
                }
                None => emit_algebra(&reduced),
            };
            write_output(&out, &text)?;
            Ok(0)
        }

        Command::Quotient { file, ideal, out } => {
            let malg = parse_algebra_str(&read_input(&file)?)?.into_metric()?;
            let rows = parse_rows(&ideal, malg.dim())?;
            let span = Subspace::span(malg.dim(), &rows)?;
            let (quotient, _projection) = malg.quotient_coisotropic(&span)?;
            write_output(&out, &emit_metric_algebra(&quotient))?;
            Ok(0)
        }

        Command::Twist {
            file,
            block,
            x,
            out,
        } => {
            let malg = parse_algebra_str(&read_input(&file)?)?.into_metric()?;
            let dim = malg.dim();
            let (lo, hi) = parse_range(&block, dim)?;
            let rows: Vec<Vec<Rational>> = (lo - 1..hi)
                .map(|i| {
                    let mut v = vec![Rational::zero(); dim];
                    v[i] = Rational::one();
                    v
                })
                .collect();
            let block = Subspace::span(dim, &rows)?;
            let x = parse_vector(&x, dim)?;
            let outcome = build_twist(&malg, &block, &x)?;
            let phi_inv = outcome.phi.inverse()?;
            let twisted = malg.algebra.transport(&phi_inv)?;
            let twisted_metric = MetricNAlgebra::new(twisted, malg.form.clone())?;
            let payload = TwistOutput {
                phi: (0..dim)
                    .map(|i| {
                        (0..dim)
                            .map(|j| outcome.phi[(i, j)].to_string())
                            .collect()
                    })
                    .collect(),
                calibration: outcome.calibration.to_string(),
                violations: outcome
                    .report
                    .iter()
                    .map(|v| format!("{} {v}", v.kind()))
                    .collect(),
                algebra: crate::io::file_struct_for_metric(&twisted_metric),
            };
            let mut text = serde_json::to_string_pretty(&payload).expect("serializable");
            text.push('\n');
            write_output(&out, &text)?;
            Ok(if outcome.report.is_empty() { 0 } else { 1 })
        }
    }
}

/// Parses a metric algebra or fails; shared by examples.
pub fn load_metric_algebra(text: &str) -> Result<MetricNAlgebra> {
    match parse_algebra_str(text)? {
        ParsedAlgebra::Metric(m) => Ok(m),
        ParsedAlgebra::Bare(_) => Err(Error::Parse(
            "expected a file with a \"metric\" field".to_string(),
        )),
    }
}
