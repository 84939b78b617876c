//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal failure, 2 unreadable or invalid input
//! (including argument errors), 3 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use muxsynth_core::matcore::haar_random_unitary;
use muxsynth_core::pipeline::{lower_bound, nr_formula, r_formula};
use muxsynth_core::{compile_nr, compile_r, simulate, Circuit, Error, Mat};

use crate::format::{
    format_circuit, format_matrix, read_circuit, read_matrix, write_circuit, write_matrix, FormatError, UnitarityCheck,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Verification tolerance on the Frobenius error for `nb` qubits.
pub fn verify_tolerance(nb: usize) -> f64 {
    1e-6 * (1usize << nb) as f64
}

#[derive(Debug, Parser)]
#[command(name = "muxsynth", version, about = "Compile unitaries into CNOT and one-qubit rotation circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a matrix file into a circuit file.
    Compile(CompileArgs),
    /// Check a circuit against a matrix.
    Verify(VerifyArgs),
    /// Write a Haar-random unitary.
    Rand(RandArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Single sweep plus a diagonal cascade.
    Nr,
    /// Alternating sweeps until the residual diagonal is local.
    R,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// Matrix file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Circuit file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Nr)]
    pub mode: ModeArg,
    /// Convergence tolerance on the residual's entangling part.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long = "max-sweeps", default_value_t = 20)]
    pub max_sweeps: usize,
    /// Re-simulate the circuit and report the reconstruction error.
    #[arg(long)]
    pub verify: bool,
    /// Report gate counts and reference counts.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Matrix file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Circuit file.
    pub circuit: PathBuf,
}

#[derive(Debug, Args)]
pub struct RandArgs {
    /// Qubit count, 1 to 10.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub nb: u8,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Failure {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        Failure::input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NotUnitary { .. } | Error::BadDimension(_) | Error::QubitCount(_) | Error::BadQubit(_) => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure { code: EXIT_INTERNAL, message: e.to_string() }
}

fn output_failure(e: FormatError) -> Failure {
    Failure { code: EXIT_INTERNAL, message: e.to_string() }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Compile(a) => cmd_compile(a, stdout, stderr),
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
        Command::Rand(a) => cmd_rand(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Reconstruction error of `circuit` against `u`.
fn check(u: &Mat, circuit: &Circuit) -> Result<f64, Failure> {
    let n = 1usize << circuit.nb;
    if u.rows() != n {
        return Err(Failure::input(format!(
            "circuit acts on {} qubits but the matrix has dimension {}",
            circuit.nb,
            u.rows()
        )));
    }
    Ok(simulate(circuit)?.dist(u))
}

/// Circuit output goes to `--out` or stdout; reports go to stdout only when
/// stdout carries no circuit.
pub fn cmd_compile(a: &CompileArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Failure::input(format!("--tol must be positive, got {}", a.tol)));
    }
    let u = read_matrix(&a.input, UnitarityCheck::Reject)?.matrix;
    let nb = u.rows().trailing_zeros() as usize;
    let (circuit, sweeps, converged) = match a.mode {
        ModeArg::Nr => {
            let (c, _) = compile_nr(&u)?;
            (c, 1, None)
        }
        ModeArg::R => {
            let (c, report, _) = compile_r(&u, a.tol, a.max_sweeps)?;
            (c, report.sweeps_run, Some(report.converged))
        }
    };
    match &a.out {
        Some(p) => write_circuit(&circuit, p).map_err(output_failure)?,
        None => stdout.write_all(format_circuit(&circuit).as_bytes()).map_err(io_failure)?,
    }
    let report: &mut dyn Write = if a.out.is_some() { stdout } else { stderr };
    if a.stats {
        let converged = converged.map_or_else(|| "n/a".to_string(), |c| c.to_string());
        writeln!(
            report,
            "cnot_count: {}\nrotation_count: {}\nsweeps_run: {sweeps}\nconverged: {converged}\nnr_formula: {}\nr_formula: {}\nlower_bound: {}",
            circuit.cnot_count(),
            circuit.rotation_count(),
            nr_formula(nb),
            r_formula(nb),
            lower_bound(nb),
        )
        .map_err(io_failure)?;
    }
    if a.verify {
        return report_verification(&u, &circuit, report);
    }
    Ok(EXIT_OK)
}

fn report_verification(u: &Mat, circuit: &Circuit, out: &mut dyn Write) -> Result<i32, Failure> {
    let err = check(u, circuit)?;
    let tol = verify_tolerance(circuit.nb);
    let pass = err <= tol;
    writeln!(out, "reconstruction_error: {err:.3e}\ntolerance: {tol:.3e}\nverify: {}", if pass { "pass" } else { "fail" })
        .map_err(io_failure)?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let m = read_matrix(&a.input, UnitarityCheck::Warn)?;
    if let Some(r) = m.warning {
        let _ = writeln!(stderr, "warning: {}: matrix is not unitary (‖UU† − I‖_F = {r:.3e})", a.input.display());
    }
    let circuit = read_circuit(&a.circuit)?;
    report_verification(&m.matrix, &circuit, stdout)
}

pub fn cmd_rand(a: &RandArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let u = haar_random_unitary(a.nb as usize, a.seed)?;
    match &a.out {
        Some(p) => write_matrix(&u, p).map_err(output_failure)?,
        None => stdout.write_all(format_matrix(&u).as_bytes()).map_err(io_failure)?,
    }
    Ok(EXIT_OK)
}
