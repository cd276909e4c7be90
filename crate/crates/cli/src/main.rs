use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drlift::decomposition::Epsilon;
use drlift::instance::parse_epsilon;
use drlift_cli::record::{write_records, ExperimentRecord, Format};
use drlift_cli::run::{compare_reductions, run_all, Mode, RunOptions, Solver, DEFAULT_BUDGETS};
use drlift_cli::scaling::summarize;
use drlift_cli::verify::verify;
use drlift_cli::{load_instance, CliError, CliResult};

/// Maximize DR-submodular functions on the integer lattice through
/// log-size set-function reductions.
#[derive(Parser)]
#[command(name = "drlift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and emit one record per (instance, seed) pair.
    Run(RunArgs),
    /// Run every applicable validator and print PASS/FAIL lines.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Instance files (optional with --compare-reductions).
    instances: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "double-greedy")]
    solver: Solver,
    /// Comma-separated seeds for randomized solvers.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seed: Vec<u64>,
    /// Accuracy parameter, e.g. 0.1 or 1/8.
    #[arg(long, value_parser = epsilon_arg)]
    epsilon: Option<Epsilon>,
    /// Reduction used by double-greedy and brute-force. The knapsack greedies
    /// pick their own lift.
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Oracle-call comparison of the log and naive reductions over --budgets.
    #[arg(long)]
    compare_reductions: bool,
    /// Comma-separated budgets B (default 2^4 through 2^16).
    #[arg(long, value_delimiter = ',')]
    budgets: Option<Vec<u64>>,
    /// Also write the records here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Fill in wall_ms (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    /// Continuous greedy steps.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Continuous greedy samples per step; 0 uses exact marginals.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Worker threads for independent (instance, seed) pairs.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    /// Also check refined decompositions for this epsilon.
    #[arg(long, value_parser = epsilon_arg)]
    epsilon: Option<Epsilon>,
}

fn epsilon_arg(s: &str) -> Result<Epsilon, String> {
    parse_epsilon(s).map_err(|e| e.to_string())
}

fn emit(records: &[ExperimentRecord], args: &RunArgs) -> CliResult<()> {
    write_records(io::stdout().lock(), records, args.format)?;
    if let Some(path) = &args.out {
        write_records(File::create(path)?, records, args.format)?;
    }
    Ok(())
}

fn run(args: RunArgs) -> CliResult<()> {
    let opts = RunOptions {
        solver: args.solver,
        seeds: args.seed.clone(),
        epsilon: args.epsilon,
        mode: args.mode,
        steps: args.steps,
        samples: args.samples,
        timing: args.timing,
        jobs: args.jobs,
    };
    if args.compare_reductions {
        if args.instances.len() > 1 {
            return Err(CliError::Usage(
                "--compare-reductions takes at most one instance".into(),
            ));
        }
        let spec = args.instances.first().map(|p| load_instance(p)).transpose()?;
        let budgets = args.budgets.clone().unwrap_or_else(|| DEFAULT_BUDGETS.to_vec());
        let points = compare_reductions(spec.as_ref(), &budgets, &opts)?;
        let records: Vec<ExperimentRecord> = points.iter().map(|(_, r)| r.clone()).collect();
        emit(&records, &args)?;
        eprint!("{}", summarize(&points));
        return Ok(());
    }
    if args.instances.is_empty() {
        return Err(CliError::Usage("no instance file given".into()));
    }
    let specs = args
        .instances
        .iter()
        .map(|p| load_instance(p))
        .collect::<CliResult<Vec<_>>>()?;
    let records = run_all(&specs, &opts)?;
    emit(&records, &args)
}

fn verify_cmd(args: VerifyArgs) -> CliResult<bool> {
    let inst = load_instance(&args.instance)?.build()?;
    let report = verify(&inst, args.epsilon)?;
    let mut out = io::stdout().lock();
    write!(out, "{report}")?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args).map(|()| true),
        Command::Verify(args) => verify_cmd(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
