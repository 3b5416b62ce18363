//! Command-line interface: `run`, `verify`, and `sweep`.
//!
//! Every command writes one canonical JSON report (stdout by default, a file
//! with `--output`) and exits 0 when the run or checks pass, 1 when a
//! mathematical claim fails (fidelity below threshold, a failed verification
//! check), and 2 on invalid input. Identical flags and seed reproduce the
//! report byte for byte except for the trailing `elapsed_ms` line.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::hilbert::make_shape;
use crate::oracle::{self, FIDELITY_TOLERANCE, IDENTITY_TOLERANCE};
use crate::protocol::{self, Mode, OutcomeSelection};
use crate::report::{self, RunReport, SweepEntry, SweepReport, VerifyReport};

/// A run passes when every outcome's fidelity reaches this value.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - FIDELITY_TOLERANCE;

#[derive(Parser)]
#[command(
    name = "qudit-teleport",
    version,
    about = "Teleport an S-level state through two-level EPR pairs and verify the math"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Teleport one input state and report per-outcome probability and fidelity.
    Run(RunArgs),
    /// Run the verification suite (unitarity, decomposition, orthogonality,
    /// uniformity, fidelity, no-signalling) against one shape.
    Verify(VerifyArgs),
    /// Run and verify across a range of S values at minimal qubit count.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Direct,
    Decomposed,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Direct => Mode::Direct,
            ModeArg::Decomposed => Mode::Decomposed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepModeArg {
    /// Exercise both realizations per state.
    Both,
    Direct,
    Decomposed,
}

impl SweepModeArg {
    fn modes(self) -> &'static [Mode] {
        match self {
            SweepModeArg::Both => &[Mode::Direct, Mode::Decomposed],
            SweepModeArg::Direct => &[Mode::Direct],
            SweepModeArg::Decomposed => &[Mode::Decomposed],
        }
    }

    fn label(self) -> &'static str {
        match self {
            SweepModeArg::Both => "both",
            SweepModeArg::Direct => "direct",
            SweepModeArg::Decomposed => "decomposed",
        }
    }
}

/// `--outcomes` argument: exhaustive, `sample:K`, or `forced:J,N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutcomeArg {
    Exhaustive,
    Sample { trials: usize },
    Forced { j: usize, n: usize },
}

fn parse_outcomes(text: &str) -> std::result::Result<OutcomeArg, String> {
    if text == "exhaustive" {
        return Ok(OutcomeArg::Exhaustive);
    }
    if let Some(count) = text.strip_prefix("sample:") {
        let trials: usize = count
            .parse()
            .map_err(|_| format!("sample count {count:?} is not a positive integer"))?;
        if trials == 0 {
            return Err("sample count must be at least 1".into());
        }
        return Ok(OutcomeArg::Sample { trials });
    }
    if let Some(pair) = text.strip_prefix("forced:") {
        let (j, n) = pair
            .split_once(',')
            .ok_or_else(|| format!("forced outcome {pair:?} must be J,N"))?;
        let j = j
            .trim()
            .parse()
            .map_err(|_| format!("forced j {j:?} is not an integer"))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| format!("forced n {n:?} is not an integer"))?;
        return Ok(OutcomeArg::Forced { j, n });
    }
    Err(format!(
        "expected exhaustive, sample:K or forced:J,N (got {text:?})"
    ))
}

#[derive(Args)]
struct RunArgs {
    /// Qudit dimension S (≥ 2).
    #[arg(long)]
    s_level: usize,
    /// EPR pair count L; defaults to the minimal ⌈log₂ S⌉.
    #[arg(long)]
    qubits: Option<usize>,
    /// Seed for the random state and for outcome sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Joint-transformation realization.
    #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
    mode: ModeArg,
    /// Input state: a JSON file path, or "random" for a seeded draw.
    #[arg(long, default_value = "random")]
    state: String,
    /// Measurement plan: exhaustive, sample:K, or forced:J,N.
    #[arg(long, value_parser = parse_outcomes, default_value = "exhaustive")]
    outcomes: OutcomeArg,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Qudit dimension S (≥ 2).
    #[arg(long)]
    s_level: usize,
    /// EPR pair count L; defaults to the minimal ⌈log₂ S⌉.
    #[arg(long)]
    qubits: Option<usize>,
    /// Seed for the random-state trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random states per protocol-level check.
    #[arg(long, default_value_t = 32)]
    trials: usize,
    /// Skip dense-matrix checks above this dimension.
    #[arg(long, default_value_t = oracle::DENSE_DIM_CAP)]
    dense_cap: usize,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Smallest S to cover (≥ 2).
    #[arg(long)]
    s_min: usize,
    /// Largest S to cover (inclusive).
    #[arg(long)]
    s_max: usize,
    /// Base seed; each (S, trial) derives its own.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random input states per S.
    #[arg(long, default_value_t = 16)]
    trials: usize,
    /// Realization(s) to exercise per state.
    #[arg(long, value_enum, default_value_t = SweepModeArg::Both)]
    mode: SweepModeArg,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Exit code classification: claim failures are 1, bad input is 2.
fn error_exit_code(error: &Error) -> u8 {
    match error {
        Error::ImpossibleOutcome { .. } | Error::SubspaceLeakage { .. } => 1,
        _ => 2,
    }
}

fn emit(document: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, document)?,
        None => print!("{document}"),
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<u8> {
    let started = Instant::now();
    let shape = make_shape(args.s_level, args.qubits)?;

    let mut seed_consumed = false;
    let (amplitudes, normalize) = if args.state == "random" {
        seed_consumed = true;
        (
            protocol::random_amplitudes(shape.s_level(), protocol::mix_seed(args.seed, 0)),
            false,
        )
    } else {
        let text = std::fs::read_to_string(&args.state)?;
        let input = report::parse_state_file(&text)?;
        (input.amplitudes, input.normalize)
    };
    let input = protocol::prepare_input_state(&shape, &amplitudes, normalize)?;

    let selection = match args.outcomes {
        OutcomeArg::Exhaustive => OutcomeSelection::Exhaustive,
        OutcomeArg::Forced { j, n } => OutcomeSelection::Forced { j, n },
        OutcomeArg::Sample { trials } => {
            seed_consumed = true;
            OutcomeSelection::Sampled {
                seed: protocol::mix_seed(args.seed, 1),
                trials,
            }
        }
    };

    let mode = Mode::from(args.mode);
    let transcripts = protocol::run_teleportation(&shape, input.amplitudes(), mode, selection)?;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = RunReport::from_transcripts(
        &transcripts,
        mode,
        seed_consumed.then_some(args.seed),
        elapsed_ms,
    );
    emit(&report::to_canonical_json(&report)?, args.output.as_ref())?;

    let passed = transcripts.iter().all(|t| t.fidelity >= FIDELITY_THRESHOLD);
    Ok(if passed { 0 } else { 1 })
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let started = Instant::now();
    let shape = make_shape(args.s_level, args.qubits)?;
    let verification = oracle::check_all(&shape, args.trials, args.seed, args.dense_cap)?;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = VerifyReport::from_verification(&verification, elapsed_ms);
    emit(&report::to_canonical_json(&report)?, args.output.as_ref())?;
    Ok(if verification.passed { 0 } else { 1 })
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8> {
    let started = Instant::now();
    if args.s_min > args.s_max {
        return Err(Error::InvalidRange {
            min: args.s_min,
            max: args.s_max,
        });
    }
    make_shape(args.s_min, None)?;

    let mut entries = Vec::with_capacity(args.s_max - args.s_min + 1);
    for s in args.s_min..=args.s_max {
        let shape = make_shape(s, None)?;
        let base_seed = protocol::mix_seed(args.seed, s as u64);

        let uniform = 1.0 / (shape.s_level() * shape.n_dim()) as f64;
        let mut min_fidelity = f64::INFINITY;
        let mut max_probability_deviation = 0.0f64;
        for trial in 0..args.trials {
            let amps = protocol::random_amplitudes(s, protocol::mix_seed(base_seed, trial as u64));
            for &mode in args.mode.modes() {
                let transcripts =
                    protocol::run_teleportation(&shape, &amps, mode, OutcomeSelection::Exhaustive)?;
                for t in &transcripts {
                    min_fidelity = min_fidelity.min(t.fidelity);
                    max_probability_deviation =
                        max_probability_deviation.max((t.record.probability - uniform).abs());
                }
            }
        }

        let verification =
            oracle::check_all(&shape, args.trials, base_seed, oracle::DENSE_DIM_CAP)?;
        let passed = verification.passed
            && min_fidelity >= FIDELITY_THRESHOLD
            && max_probability_deviation <= IDENTITY_TOLERANCE;
        entries.push(SweepEntry {
            s_level: s,
            qubit_count: shape.qubit_count(),
            n_dim: shape.n_dim(),
            min_fidelity,
            max_probability_deviation,
            verify_passed: verification.passed,
            passed,
        });
    }

    let passed = entries.iter().all(|e| e.passed);
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = SweepReport {
        schema_version: report::SCHEMA_VERSION,
        s_min: args.s_min,
        s_max: args.s_max,
        mode: args.mode.label().to_string(),
        trials: args.trials,
        seed: args.seed,
        entries,
        passed,
        elapsed_ms,
    };
    emit(&report::to_canonical_json(&report)?, args.output.as_ref())?;
    Ok(if passed { 0 } else { 1 })
}

/// Parse arguments and dispatch; returns the process exit code.
pub fn run_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match outcome {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            error_exit_code(&error)
        }
    }
}

/// Entry point for the binary.
pub fn main_entry() -> u8 {
    run_with_args(std::env::args_os())
}
