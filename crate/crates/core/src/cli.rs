//! Command-line front end.
//!
//! Every command writes a single JSON or CSV document to stdout (or `--out`).
//! Floats are rounded to 10 significant digits and JSON keys are emitted in a
//! fixed order, so identical invocations produce identical bytes.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 solver failure, 4 when
//! `verify-tables` has a failing target, 1 for I/O errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::assembly::{ModeSpec, Parity, DEFAULT_TRUNCATION};
use crate::eigensolver::{self, Spectrum};
use crate::error::Error;
use crate::geometry::{angle_grid, torus_curvatures, TorusGeometry};
use crate::spectra::{self, TableDiffReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_TABLES_FAILED: i32 = 4;

pub const MIN_WAVEFUNCTION_SAMPLES: usize = 16;
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Eigenvalues and coefficients of one (m, parity) sector.
    Spectrum,
    /// All bound states for m = 0..=m_max.
    Scan,
    /// One eigenfunction sampled on [0, 2π).
    Wavefunction,
    /// Torus curvature profile (R = 1) sampled on [0, 2π).
    Curvature,
    /// Compare against the reference tables, magic radii, and bound-state count.
    VerifyTables,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "toroid", version, about = "Curvature-induced bound states on a torus")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Aspect ratio a/R, strictly between 0 and 1.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Azimuthal quantum number.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long = "m-max")]
    pub m_max: Option<u32>,
    /// Fourier truncation N.
    #[arg(long = "n-basis", default_value_t = DEFAULT_TRUNCATION)]
    pub n_basis: usize,
    /// Drop the curvature potential (free particle on the torus).
    #[arg(long = "no-curvature")]
    pub no_curvature: bool,
    #[arg(long, value_enum, default_value = "even")]
    pub parity: ParityArg,
    /// Index of the state within its sector, ascending in beta.
    #[arg(long = "state", default_value_t = 0)]
    pub state_index: usize,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub m: u32,
    pub m_max: u32,
    pub n_basis: usize,
    pub parity: Parity,
    pub include_vc: bool,
    pub state_index: usize,
    pub samples: usize,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("solver failure: {0}")]
    Solver(Error),
    #[error("{failures} reference target(s) failed")]
    TablesFailed { failures: usize, document: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::TablesFailed { .. } => EXIT_TABLES_FAILED,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlpha(_)
            | Error::InvalidTruncation(_)
            | Error::InvalidRadii { .. }
            | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let needs_alpha = args.command != Command::VerifyTables;
        let alpha = match args.alpha {
            Some(a) => a,
            None if needs_alpha => return Err(CliError::Usage("--alpha is required".into())),
            None => 0.5,
        };
        if needs_alpha && !(alpha > 0.0 && alpha < 1.0) {
            return Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {alpha}")));
        }
        let m = match (args.command, args.m) {
            (Command::Spectrum | Command::Wavefunction, None) => {
                return Err(CliError::Usage("--m is required".into()))
            }
            (_, m) => m.unwrap_or(0),
        };
        let m_max = match (args.command, args.m_max) {
            (Command::Scan, None) => return Err(CliError::Usage("--m-max is required".into())),
            (_, m_max) => m_max.unwrap_or(0),
        };
        if args.n_basis < crate::assembly::MIN_TRUNCATION {
            return Err(CliError::Usage(format!("--n-basis must be >= 4, got {}", args.n_basis)));
        }
        let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
        match args.command {
            Command::Wavefunction if samples < MIN_WAVEFUNCTION_SAMPLES => {
                return Err(CliError::Usage(format!("--samples must be >= 16, got {samples}")))
            }
            Command::Curvature if samples == 0 => {
                return Err(CliError::Usage("--samples must be positive".into()))
            }
            _ => {}
        }
        let output_format = if args.csv {
            OutputFormat::Csv
        } else if args.json {
            OutputFormat::Json
        } else {
            match args.command {
                Command::Wavefunction | Command::Curvature => OutputFormat::Csv,
                _ => OutputFormat::Json,
            }
        };
        Ok(Self {
            command: args.command,
            alpha,
            m,
            m_max,
            n_basis: args.n_basis,
            parity: args.parity.into(),
            include_vc: !args.no_curvature,
            state_index: args.state_index,
            samples,
            output_format,
            output_path: args.out,
        })
    }
}

/// Rounds to 10 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e10) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct StateDoc {
    n_index: usize,
    beta: f64,
    degeneracy: u32,
    norm_constant: f64,
    coeffs: Vec<f64>,
    node_count: usize,
}

#[derive(Serialize)]
struct SpectrumDoc {
    alpha: f64,
    m: u32,
    parity: Parity,
    include_vc: bool,
    truncation: usize,
    converged: bool,
    states: Vec<StateDoc>,
}

fn spectrum_document(s: &Spectrum, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(&SpectrumDoc {
            alpha: s.alpha,
            m: s.m,
            parity: s.parity,
            include_vc: s.include_vc,
            truncation: s.truncation_used,
            converged: s.converged,
            states: s
                .states
                .iter()
                .map(|st| StateDoc {
                    n_index: st.n_index,
                    beta: round_sig(st.beta),
                    degeneracy: st.degeneracy(),
                    norm_constant: round_sig(st.wavefunction.norm_constant),
                    coeffs: st.coeffs().iter().map(|&c| round_sig(c)).collect(),
                    node_count: st.wavefunction.node_count,
                })
                .collect(),
        }),
        OutputFormat::Csv => {
            let mut out = String::from("n_index,beta,degeneracy,norm_constant,node_count\n");
            for st in &s.states {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    st.n_index,
                    fmt_num(st.beta),
                    st.degeneracy(),
                    fmt_num(st.wavefunction.norm_constant),
                    st.wavefunction.node_count
                );
            }
            out
        }
    }
}

fn checked_spectrum(config: &RunConfig) -> Result<Spectrum, CliError> {
    let spec = ModeSpec::new(config.m, config.parity, config.n_basis, config.include_vc)?;
    Ok(eigensolver::solve_checked(config.alpha, spec, eigensolver::DEFAULT_TOLERANCE)?)
}

fn run_spectrum(config: &RunConfig) -> Result<String, CliError> {
    let s = checked_spectrum(config)?;
    Ok(spectrum_document(&s, config.output_format))
}

fn run_scan(config: &RunConfig) -> Result<String, CliError> {
    let mut t = spectra::bound_state_scan_at(config.alpha, config.m_max, config.n_basis)?;
    Ok(match config.output_format {
        OutputFormat::Json => {
            for e in &mut t.entries {
                e.beta = round_sig(e.beta);
                e.coeffs.iter_mut().for_each(|c| *c = round_sig(*c));
            }
            to_json(&t)
        }
        OutputFormat::Csv => {
            let mut out = String::from("m,parity,n_index,beta,degeneracy\n");
            for e in &t.entries {
                let _ = writeln!(out, "{},{},{},{},{}", e.m, e.parity, e.n_index, fmt_num(e.beta), e.degeneracy);
            }
            out
        }
    })
}

#[derive(Serialize)]
struct WavefunctionDoc {
    alpha: f64,
    m: u32,
    parity: Parity,
    include_vc: bool,
    n_index: usize,
    beta: f64,
    theta: Vec<f64>,
    psi: Vec<f64>,
}

fn run_wavefunction(config: &RunConfig) -> Result<String, CliError> {
    let s = checked_spectrum(config)?;
    let state = s.states.get(config.state_index).ok_or_else(|| {
        CliError::Usage(format!(
            "--state {} out of range; sector has {} states",
            config.state_index,
            s.states.len()
        ))
    })?;
    let samples = state.wavefunction.sample(config.samples);
    Ok(match config.output_format {
        OutputFormat::Csv => {
            let mut out = String::from("theta,psi\n");
            for (t, p) in &samples {
                let _ = writeln!(out, "{},{}", fmt_num(*t), fmt_num(*p));
            }
            out
        }
        OutputFormat::Json => to_json(&WavefunctionDoc {
            alpha: s.alpha,
            m: s.m,
            parity: s.parity,
            include_vc: s.include_vc,
            n_index: state.n_index,
            beta: round_sig(state.beta),
            theta: samples.iter().map(|(t, _)| round_sig(*t)).collect(),
            psi: samples.iter().map(|(_, p)| round_sig(*p)).collect(),
        }),
    })
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct CurvatureRow {
    theta: f64,
    k1: f64,
    k2: f64,
    H: f64,
    K: f64,
    Vc: f64,
}

fn run_curvature(config: &RunConfig) -> Result<String, CliError> {
    let geom = TorusGeometry::with_aspect_ratio(config.alpha)?;
    let rows: Vec<CurvatureRow> = angle_grid(config.samples)
        .map(|t| {
            let b = torus_curvatures(&geom, t);
            CurvatureRow {
                theta: round_sig(t),
                k1: round_sig(b.k1),
                k2: round_sig(b.k2),
                H: round_sig(b.mean),
                K: round_sig(b.gaussian),
                Vc: round_sig(b.potential),
            }
        })
        .collect();
    Ok(match config.output_format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => {
            let mut out = String::from("theta,k1,k2,H,K,Vc\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt_num(r.theta),
                    fmt_num(r.k1),
                    fmt_num(r.k2),
                    fmt_num(r.H),
                    fmt_num(r.K),
                    fmt_num(r.Vc)
                );
            }
            out
        }
    })
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    all_pass: bool,
    reports: &'a [TableDiffReport],
}

/// Every report emitted by `verify-tables`.
pub fn verification_reports() -> Result<Vec<TableDiffReport>, Error> {
    let mut reports = vec![spectra::reproduce_tables()?];
    for m in 1..=4 {
        reports.push(spectra::magic_radius_check(m)?);
    }
    reports.push(spectra::count_report(0.05, 12, Some(spectra::REFERENCE_COUNT_ALPHA_0_05))?);
    Ok(reports)
}

fn run_verify(config: &RunConfig) -> Result<String, CliError> {
    let mut reports = verification_reports()?;
    let failures: usize = reports.iter().map(|r| r.failures().count()).sum();
    for t in reports.iter_mut().flat_map(|r| r.targets.iter_mut()) {
        t.computed = round_sig(t.computed);
        t.reference = t.reference.map(round_sig);
        t.diff = t.diff.map(round_sig);
    }
    let document = match config.output_format {
        OutputFormat::Json => to_json(&VerifyDoc { all_pass: failures == 0, reports: &reports }),
        OutputFormat::Csv => {
            let mut out = String::from("report,label,kind,reference,computed,diff,tolerance,pass\n");
            let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
            for r in &reports {
                for t in &r.targets {
                    let kind = serde_json::to_value(t.kind).expect("kind serializes");
                    let _ = writeln!(
                        out,
                        "\"{}\",\"{}\",{},{},{},{},{},{}",
                        r.title,
                        t.label,
                        kind.as_str().unwrap_or_default(),
                        opt(t.reference),
                        fmt_num(t.computed),
                        opt(t.diff),
                        opt(t.tolerance),
                        t.pass
                    );
                }
            }
            out
        }
    };
    if failures > 0 {
        Err(CliError::TablesFailed { failures, document })
    } else {
        Ok(document)
    }
}

/// Produces the document for `config`.
pub fn render(config: &RunConfig) -> Result<String, CliError> {
    match config.command {
        Command::Spectrum => run_spectrum(config),
        Command::Scan => run_scan(config),
        Command::Wavefunction => run_wavefunction(config),
        Command::Curvature => run_curvature(config),
        Command::VerifyTables => run_verify(config),
    }
}

fn emit(config: &RunConfig, document: &str) -> std::io::Result<()> {
    match &config.output_path {
        Some(path) => std::fs::write(path, document),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(document.as_bytes()).and_then(|_| stdout.flush());
            // A closed pipe (e.g. `| head`) is not a failure.
            match written {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other,
            }
        }
    }
}

/// Runs `config`, writes its document, and returns the process exit code.
/// Diagnostics go to stderr.
pub fn run(config: &RunConfig) -> i32 {
    let (document, code) = match render(config) {
        Ok(doc) => (Some(doc), EXIT_OK),
        Err(CliError::TablesFailed { failures, document }) => {
            eprintln!("toroid: {failures} reference target(s) failed");
            (Some(document), EXIT_TABLES_FAILED)
        }
        Err(e) => {
            eprintln!("toroid: {e}");
            (None, e.exit_code())
        }
    };
    if let Some(doc) = document {
        if let Err(e) = emit(config, &doc) {
            eprintln!("toroid: i/o error: {e}");
            return EXIT_IO;
        }
    }
    code
}

/// Parses `argv` and runs; clap usage errors exit with code 2.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match RunConfig::from_args(args) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("toroid: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(argv: &[&str]) -> RunConfig {
        let mut full = vec!["toroid"];
        full.extend_from_slice(argv);
        RunConfig::from_args(Args::try_parse_from(full).unwrap()).unwrap()
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(-1.07491371234567), -1.074913712);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(123456789012.0), 123456789000.0);
    }

    #[test]
    fn defaults() {
        let c = config(&["spectrum", "--alpha", "0.5", "--m", "1"]);
        assert_eq!(c.n_basis, 64);
        assert_eq!(c.output_format, OutputFormat::Json);
        assert!(c.include_vc);
        assert_eq!(c.parity, Parity::Even);
        let c = config(&["curvature", "--alpha", "0.5"]);
        assert_eq!(c.output_format, OutputFormat::Csv);
    }

    #[test]
    fn usage_errors() {
        let parse = |argv: &[&str]| {
            let mut full = vec!["toroid"];
            full.extend_from_slice(argv);
            Args::try_parse_from(full).map_err(|_| ()).and_then(|a| RunConfig::from_args(a).map_err(|_| ()))
        };
        assert!(parse(&["spectrum", "--alpha", "0.5"]).is_err());
        assert!(parse(&["spectrum", "--alpha", "1.5", "--m", "0"]).is_err());
        assert!(parse(&["spectrum", "--alpha", "0.5", "--m", "0", "--bogus"]).is_err());
        assert!(parse(&["wavefunction", "--alpha", "0.5", "--m", "0", "--samples", "8"]).is_err());
        assert!(parse(&["scan", "--alpha", "0.5"]).is_err());
        assert!(parse(&["spectrum", "--alpha", "0.5", "--m", "0", "--json", "--csv"]).is_err());
        assert!(parse(&["spectrum", "--alpha", "0.5", "--m", "0", "--n-basis", "3"]).is_err());
    }

    #[test]
    fn wavefunction_state_out_of_range() {
        let c = config(&["wavefunction", "--alpha", "0.5", "--m", "0", "--n-basis", "4", "--state", "9"]);
        assert_eq!(render(&c).unwrap_err().exit_code(), EXIT_USAGE);
    }
}
