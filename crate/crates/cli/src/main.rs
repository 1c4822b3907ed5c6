//! Command-line front end: computes masking distances between guarded-command
//! models, prints witness traces, steps through models interactively and runs
//! the bundled regression corpus.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use num_traits::Zero;

use maskdist_core::gcl;
use maskdist_core::semantics::{
    compile_with_cap, restrict, CompileError, Lts, DEFAULT_STATE_CAP,
};
use maskdist_core::solver::{distance, DistanceReport, Mode};

mod bench;

const STATE_CAP_ENV: &str = "MASKDIST_STATE_CAP";

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NOT_MASKING: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "maskdist",
    about = "Masking fault-tolerance distance between a nominal model and its implementation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the masking distance
    Dist(PairArgs),
    /// Check boolean masking (distance zero); exit 2 when it fails
    Check(PairArgs),
    /// Print the shortest run to the error state
    Trace(PairArgs),
    /// Step through a model interactively from its initial state
    Simulate(ModelArgs),
    /// Model and game sizes
    Stats(PairArgs),
    /// Dump the transition system of a model, or the full game graph
    Dump(DumpArgs),
    /// Run the bundled corpus against its expected-value fixtures
    Bench(BenchArgs),
}

#[derive(Args)]
struct PairArgs {
    /// Nominal (fault-free) model
    #[arg(long = "spec", value_name = "FILE", conflicts_with = "derive_nominal")]
    spec: Option<PathBuf>,
    /// Implementation model with fault transitions
    #[arg(long = "impl", value_name = "FILE")]
    impl_: PathBuf,
    /// Take the nominal model to be the implementation with all fault
    /// transitions removed
    #[arg(long)]
    derive_nominal: bool,
    /// Compare up to internal (tau) transitions
    #[arg(long)]
    weak: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Abort when a model exceeds this many states (also settable through
    /// MASKDIST_STATE_CAP)
    #[arg(long, value_name = "N")]
    state_cap: Option<usize>,
}

#[derive(Args)]
struct ModelArgs {
    /// Model file
    #[arg(long = "impl", value_name = "FILE")]
    impl_: PathBuf,
    #[arg(long, value_name = "N")]
    state_cap: Option<usize>,
}

#[derive(Args)]
struct DumpArgs {
    /// Model file
    #[arg(long = "impl", value_name = "FILE")]
    impl_: PathBuf,
    /// With a nominal model: dump the game graph instead of the single model
    #[arg(long = "spec", value_name = "FILE")]
    spec: Option<PathBuf>,
    #[arg(long)]
    weak: bool,
    #[arg(long, value_name = "N")]
    state_cap: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory holding the model corpus
    #[arg(long, value_name = "DIR", default_value = "corpus")]
    corpus: PathBuf,
    /// Fixture file with one `model;params;mode;num/den` row per line
    #[arg(long, value_name = "FILE")]
    fixtures: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    state_cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

/// A failure that already carries its exit status.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn error(message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
            code: EXIT_ERROR,
        }
    }
}

fn main() -> ExitCode {
    // usage errors exit with 1; --help and --version print and exit 0
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Dist(args) => cmd_dist(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Trace(args) => cmd_trace(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Stats(args) => cmd_stats(&args),
        Command::Dump(args) => cmd_dump(&args),
        Command::Bench(args) => bench::run(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn state_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(STATE_CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::error(format!("{STATE_CAP_ENV}: expected a number, got `{s}`"))),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn load_model(path: &Path, cap: usize) -> Result<Lts, Failure> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
    let program = gcl::parse(&source)
        .map_err(|e| Failure::error(format!("{}:{e}", path.display())))?;
    compile_with_cap(&program, cap).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        code: match e {
            CompileError::StateExplosion { .. } => EXIT_CAP,
            _ => EXIT_ERROR,
        },
    })
}

/// Loads the nominal/implementation pair, deriving the nominal model by
/// stripping fault transitions when requested.
fn load_pair(args: &PairArgs) -> Result<(Lts, Lts), Failure> {
    let cap = state_cap(args.state_cap)?;
    let impl_ = load_model(&args.impl_, cap)?;
    let spec = match (&args.spec, args.derive_nominal) {
        (Some(path), false) => load_model(path, cap)?,
        (None, true) => restrict(&impl_, &impl_.fault_set.clone()),
        (None, false) => {
            return Err(Failure::error(
                "either --spec or --derive-nominal is required",
            ))
        }
        (Some(_), true) => unreachable!("clap rejects --spec with --derive-nominal"),
    };
    Ok((spec, impl_))
}

fn mode_of(args: &PairArgs) -> Mode {
    if args.weak {
        Mode::Weak
    } else {
        Mode::Strong
    }
}

fn solve(args: &PairArgs) -> Result<DistanceReport, Failure> {
    let (spec, impl_) = load_pair(args)?;
    distance(&spec, &impl_, mode_of(args)).map_err(|e| Failure::error(e.to_string()))
}

/// `1/3 (0.333)` — exact rational plus three decimals, rounded half away
/// from zero.
fn format_value(v: Rational64) -> String {
    format!("{}/{} ({})", v.numer(), v.denom(), decimals(v))
}

fn decimals(v: Rational64) -> String {
    let scaled = (1000 * v.numer() + v.denom() / 2) / v.denom();
    format!("{}.{:03}", scaled / 1000, scaled % 1000)
}

fn machine_report(report: &DistanceReport) -> serde_json::Value {
    serde_json::json!({
        "value_num": report.value.numer(),
        "value_den": report.value.denom(),
        "fault_budget": report.fault_budget,
        "states": report.stats.game_states,
        "edges": report.stats.game_edges,
        "solve_ms": report.stats.solve_ms as u64,
        "witness": report.witness.as_ref().map(|steps| {
            steps
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "state": s.game_state,
                        "label": s.label.dump_str(),
                        "fault": s.fault,
                        "to_err": s.to_err,
                    })
                })
                .collect::<Vec<_>>()
        }),
    })
}

fn cmd_dist(args: &PairArgs) -> Result<u8, Failure> {
    let report = solve(args)?;
    match args.format {
        Format::Text => println!("masking distance = {}", format_value(report.value)),
        Format::Machine => println!("{}", machine_report(&report)),
    }
    Ok(EXIT_OK)
}

fn cmd_check(args: &PairArgs) -> Result<u8, Failure> {
    let report = solve(args)?;
    let masking = report.value.is_zero();
    match args.format {
        Format::Text => println!("MASKING: {}", if masking { "yes" } else { "no" }),
        Format::Machine => println!("{}", machine_report(&report)),
    }
    Ok(if masking { EXIT_OK } else { EXIT_NOT_MASKING })
}

fn cmd_trace(args: &PairArgs) -> Result<u8, Failure> {
    let report = solve(args)?;
    if args.format == Format::Machine {
        println!("{}", machine_report(&report));
        return Ok(EXIT_OK);
    }
    match &report.witness {
        None => println!("no error trace: every fault is masked"),
        Some(steps) => {
            println!(
                "error trace, {} step(s), {} fault(s):",
                steps.len(),
                steps.iter().filter(|s| s.fault).count()
            );
            for step in steps {
                let mark = if step.fault {
                    " [fault]"
                } else if step.to_err {
                    " [error]"
                } else {
                    ""
                };
                println!("  {} --{}-->{}", step.game_state, step.label, mark);
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_stats(args: &PairArgs) -> Result<u8, Failure> {
    let (spec, impl_) = load_pair(args)?;
    let report =
        distance(&spec, &impl_, mode_of(args)).map_err(|e| Failure::error(e.to_string()))?;
    match args.format {
        Format::Machine => println!("{}", machine_report(&report)),
        Format::Text => {
            println!("nominal:        {} states, {} edges", spec.states.len(), spec.edges.len());
            println!("implementation: {} states, {} edges", impl_.states.len(), impl_.edges.len());
            println!(
                "game:           {} states, {} edges",
                report.stats.game_states, report.stats.game_edges
            );
            println!("solve time:     {} ms", report.stats.solve_ms);
            println!("masking distance = {}", format_value(report.value));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_dump(args: &DumpArgs) -> Result<u8, Failure> {
    let cap = state_cap(args.state_cap)?;
    let impl_ = load_model(&args.impl_, cap)?;
    match &args.spec {
        None => print!("{}", impl_.dump()),
        Some(spec_path) => {
            let spec = load_model(spec_path, cap)?;
            let spec_m = maskdist_core::semantics::augment_mask(&spec);
            let game = if args.weak {
                maskdist_core::game::build_weak(&spec_m, &impl_)
            } else {
                maskdist_core::game::build_strong(&spec_m, &impl_)
            }
            .map_err(|e| Failure::error(e.to_string()))?;
            print!("{}", game.dump());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(args: &ModelArgs) -> Result<u8, Failure> {
    let cap = state_cap(args.state_cap)?;
    let lts = load_model(&args.impl_, cap)?;
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut current = 0usize;
    loop {
        println!("state: {}", lts.describe_state(current));
        let moves = lts.outgoing(current);
        if moves.is_empty() {
            println!("deadlock: no enabled transitions");
            return Ok(EXIT_OK);
        }
        for (i, (_, label, target)) in moves.iter().enumerate() {
            println!("  {i}) --{label}--> {}", lts.describe_state(*target));
        }
        print!("> ");
        std::io::stdout().flush().ok();
        let line = match lines.next() {
            Some(Ok(line)) => line,
            _ => return Ok(EXIT_OK), // end of input
        };
        let choice = line.trim();
        if choice.is_empty() || choice == "q" || choice == "quit" {
            return Ok(EXIT_OK);
        }
        match choice.parse::<usize>() {
            Ok(i) if i < moves.len() => current = moves[i].2,
            _ => println!("enter a number between 0 and {}", moves.len() - 1),
        }
    }
}

/// Wall-clock helper shared with the bench harness.
fn timed<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_millis())
}
