//! Command-line front end: decompose and verify unitaries, dump schedules,
//! print gate counts and the scheme-vs-Gray comparison series.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 usage or parse error,
//! 3 non-unitary input matrix, 4 internal residual failure.

mod formats;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use formats::{read_decomposition, read_matrix, write_decomposition, write_matrix, MatrixReadError};
use gatedec::{
    compare_series, count_breakdown, count_gray, count_scheme, decompose, generate_schedule,
    haar_random_unitary, total_controls, verify, CountVector, DecomposeOptions, Error,
    UnitaryMatrix, MAX_QUBITS,
};

#[derive(Parser)]
#[command(
    name = "gatedec",
    version,
    about = "Decompose n-qubit unitaries into controlled single-qubit gates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the symbolic elimination schedule for n qubits
    Schedule {
        n: usize,
        /// Write the records to a file instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Decompose a unitary and record the gates
    Decompose {
        /// Matrix file to decompose
        #[arg(value_name = "MATRIX", required_unless_present = "random")]
        input: Option<PathBuf>,
        /// Decompose a Haar-random unitary on N qubits instead of a file
        #[arg(long, value_name = "N", conflicts_with = "input")]
        random: Option<usize>,
        /// Seed for --random
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual tolerance for the certification
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Write the gate records to a file (stdout otherwise)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Re-run a recorded decomposition against its source matrix
    Verify {
        matrix: PathBuf,
        decomposition: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Print the k-controlled gate counts and the control total
    Count {
        n: usize,
        /// Print the Gray-code scheme's counts instead
        #[arg(long)]
        gray: bool,
        /// Also print the per-region A B C D split of each count
        #[arg(long)]
        breakdown: bool,
    },
    /// Emit the control-total comparison series as CSV
    Compare {
        /// Last qubit count of the series
        #[arg(long, value_name = "N")]
        max: usize,
        /// Write the CSV to a file instead of stdout
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Write a seeded Haar-random unitary as a matrix file
    Random {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the matrix to a file instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

/// Failure with the exit code it maps to.
struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CmdError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotUnitary { .. } => 3,
            Error::ResidualTooLarge { .. } | Error::DegeneratePivot { .. } => 4,
            _ => 2,
        };
        CmdError::new(code, e.to_string())
    }
}

impl From<MatrixReadError> for CmdError {
    fn from(e: MatrixReadError) -> Self {
        match e {
            MatrixReadError::Format(e) => CmdError::new(2, e.to_string()),
            MatrixReadError::Invalid(e) => e.into(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path)
        .map_err(|e| CmdError::new(2, format!("cannot read {}: {e}", path.display())))
}

/// Sends rendered text to a file when a path was given, to stdout otherwise.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CmdError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CmdError::new(2, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn count_line(v: &CountVector, label: &str) -> String {
    let counts: Vec<String> = v.as_slice().iter().map(u128::to_string).collect();
    format!("{} | {label}={}", counts.join(" "), total_controls(v))
}

fn run(cli: Cli) -> Result<(), CmdError> {
    match cli.command {
        Command::Schedule { n, out } => {
            let schedule = generate_schedule(n)?;
            let mut text = String::new();
            for (i, e) in schedule.entries().iter().enumerate() {
                text.push_str(&format!("{} {} {} {}\n", i + 1, e.row, e.col, e.pattern));
            }
            emit(out.as_deref(), &text)
        }
        Command::Decompose {
            input,
            random,
            seed,
            tol,
            out,
        } => {
            let u = load_input(input.as_deref(), random, seed)?;
            let opts = DecomposeOptions {
                residual_tol: tol,
                ..Default::default()
            };
            let d = decompose(&u, &opts)?;
            let summary = format!(
                "n={} slots={} gates={} skipped={} controls={} residual={:.3e}\n",
                d.n(),
                d.total_slots(),
                d.gates.len(),
                d.skipped,
                d.total_controls(),
                d.residual
            );
            let records = write_decomposition(&d);
            match out {
                Some(path) => {
                    emit(Some(&path), &records)?;
                    print!("{summary}");
                }
                None => {
                    print!("{records}");
                    eprint!("{summary}");
                }
            }
            Ok(())
        }
        Command::Verify {
            matrix,
            decomposition,
            tol,
        } => {
            let u = read_matrix(&read_file(&matrix)?)?;
            let d = read_decomposition(&read_file(&decomposition)?)
                .map_err(|e| CmdError::new(2, e.to_string()))?;
            if d.n() != u.qubits() {
                return Err(CmdError::new(
                    2,
                    format!(
                        "qubit counts disagree: matrix has {}, decomposition has {}",
                        u.qubits(),
                        d.n()
                    ),
                ));
            }
            let report = verify(&d, &u, tol)?;
            println!(
                "deviation={:.3e} tol={:.1e}: {}",
                report.deviation,
                report.tol,
                if report.passed { "PASS" } else { "FAIL" }
            );
            if report.passed {
                Ok(())
            } else {
                Err(CmdError::new(1, "verification failed"))
            }
        }
        Command::Count { n, gray, breakdown } => {
            let line = if gray {
                count_line(&count_gray(n)?, "T2")
            } else {
                count_line(&count_scheme(n)?, "T1")
            };
            println!("{line}");
            if breakdown {
                let split = count_breakdown(n)?;
                for (k, row) in split.rows().iter().enumerate() {
                    println!("k={k}: {} {} {} {}", row.a, row.b, row.c, row.d);
                }
            }
            Ok(())
        }
        Command::Compare { max, csv } => {
            let mut text = String::from("n,T1,T2,diff\n");
            for row in compare_series(max)? {
                text.push_str(&format!("{},{},{},{}\n", row.n, row.t1, row.t2, row.diff));
            }
            emit(csv.as_deref(), &text)
        }
        Command::Random { n, seed, out } => {
            let u = haar_random_unitary(n, seed)?;
            emit(out.as_deref(), &write_matrix(&u))
        }
    }
}

fn load_input(
    input: Option<&Path>,
    random: Option<usize>,
    seed: u64,
) -> Result<UnitaryMatrix, CmdError> {
    match (input, random) {
        (Some(path), None) => Ok(read_matrix(&read_file(path)?)?),
        (None, Some(n)) => {
            if !(1..=MAX_QUBITS).contains(&n) {
                return Err(CmdError::new(
                    2,
                    format!("qubit count {n} outside supported range 1..={MAX_QUBITS}"),
                ));
            }
            Ok(haar_random_unitary(n, seed)?)
        }
        _ => unreachable!("clap enforces exactly one input source"),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
