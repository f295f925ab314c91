use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdel_cli::{emit_report, run_sweep, CliError, Command, Format, SweepConfig};
use qdel_core::circuits::parse_circuit;
use qdel_core::q4code::Step3Variant;

#[derive(Parser)]
#[command(
    name = "qdel",
    version,
    about = "Verification sweeps for quantum deletion codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Round trip of the four-qubit code over every deletion position and outcome.
    VerifyQ4(SweepArgs),
    /// Round trip of the length 4(l-1) code for a level-l message.
    VerifyGeneral(SweepArgs),
    /// Compares single deletions of codewords with the closed-form mixture.
    Lemma1(SweepArgs),
    /// Checks the encoder and decoder circuits against their reference maps.
    CircuitCheck(SweepArgs),
    /// Parses a circuit file and prints it in canonical form.
    Parse { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Step3Arg {
    Literal,
    Corrected,
}

#[derive(Args)]
struct SweepArgs {
    /// Number of random messages [default: 1000, or 100 for verify-general]
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Message level for verify-general.
    #[arg(long, default_value_t = 3)]
    l: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Step3Arg::Literal)]
    step3: Step3Arg,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
}

impl SweepArgs {
    fn config(&self, command: Command) -> SweepConfig {
        SweepConfig {
            command,
            trials: self.trials.unwrap_or(command.default_trials()),
            seed: self.seed,
            tol: self.tol,
            l: self.l,
            step3: match self.step3 {
                Step3Arg::Literal => Step3Variant::Literal,
                Step3Arg::Corrected => Step3Variant::Corrected,
            },
            timing: self.timing,
        }
    }
}

fn sweep(command: Command, args: &SweepArgs) -> Result<ExitCode, CliError> {
    let report = run_sweep(&args.config(command))?;
    let bytes = emit_report(&report, args.format)?;
    match &args.out {
        Some(path) => fs::write(path, &bytes)?,
        None => io::stdout().write_all(&bytes)?,
    }
    Ok(match report.first_failure() {
        None => ExitCode::SUCCESS,
        Some(failure) => {
            eprintln!("{command} failed: {failure}");
            ExitCode::FAILURE
        }
    })
}

fn parse(file: &PathBuf) -> Result<ExitCode, CliError> {
    let text = fs::read_to_string(file)?;
    match parse_circuit(&text) {
        Ok(circuit) => {
            let printed = circuit
                .to_text()
                .expect("parsed circuits only contain named gates");
            io::stdout().write_all(printed.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            Ok(ExitCode::FAILURE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::VerifyQ4(a) => sweep(Command::VerifyQ4, a),
        Cmd::VerifyGeneral(a) => sweep(Command::VerifyGeneral, a),
        Cmd::Lemma1(a) => sweep(Command::Lemma1, a),
        Cmd::CircuitCheck(a) => sweep(Command::CircuitCheck, a),
        Cmd::Parse { file } => parse(file),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
