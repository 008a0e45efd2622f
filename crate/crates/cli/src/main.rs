//! `sdchan`: positivity checks, capacities, protocol simulation and oracle
//! cross-checks for state-dependent channels, with JSON reports on stdout.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use sdchan_core::capacity::{BaOptions, GpOptions, SolverOptions};
use sdchan_core::oracles::DEFAULT_BUDGET;
use sdchan_core::reductions::DEFAULT_STRATEGY_CAP;
use sdchan_core::simulation::StopRule;
use sdchan_core::{Regime, SiModel};

use report::{exit, Emitter, Failure};

#[derive(Debug, Parser)]
#[command(name = "sdchan", version, about = "Zero-error feedback analysis of state-dependent channels")]
struct Cli {
    /// Print a one-line human summary on stderr.
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a channel file against the standing assumptions (exit 0 iff valid).
    Validate(ValidateArgs),
    /// Print the DMC a reduction turns the channel into.
    Reduce(ReduceArgs),
    /// Decide zero-error positivity (exit 0 positive, 3 zero, 4 unknown).
    Check(CheckArgs),
    /// Compute a vanishing-error or zero-error capacity.
    Capacity(CapacityArgs),
    /// Run a zero-error protocol many times (exit 5 if it cannot run, 6 on any error).
    Simulate(SimulateArgs),
    /// Compare a module result with a brute-force oracle (exit 7 on disagreement).
    Oracle(OracleArgs),
}

fn parse_si(s: &str) -> Result<SiModel, String> {
    s.parse().map_err(|e: sdchan_core::Error| e.to_string())
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse().map_err(|e: sdchan_core::Error| e.to_string())
}

fn as_token<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    pub path: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReduceTo {
    /// Average the state out.
    Averaged,
    /// Shannon strategies as inputs.
    Strategy,
    /// `(y, s)` as the output.
    JointOutput,
    /// Averaged channel plus an extra termination output.
    Termination,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    pub path: PathBuf,
    #[arg(long, value_enum)]
    pub to: ReduceTo,
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
    pub strategy_cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    pub path: PathBuf,
    /// State information as `enc,dec` with tokens -, sc, c, nc.
    #[arg(long, value_parser = parse_si, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_token")]
    pub si: SiModel,
    /// fl, bl or vl.
    #[arg(long, value_parser = parse_regime)]
    #[serde(serialize_with = "as_token")]
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Vanishing,
    ZeroError,
}

#[derive(Debug, Args, Serialize)]
pub struct SolverArgs {
    /// Blahut-Arimoto stopping gap in bits.
    #[arg(long, default_value_t = BaOptions::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = BaOptions::default().max_iter)]
    pub max_iter: usize,
    /// Random starts per strategy set for the non-causal optimizer.
    #[arg(long, default_value_t = GpOptions::default().restarts)]
    pub restarts: usize,
    #[arg(long, default_value_t = GpOptions::default().tol)]
    pub gp_tol: f64,
    #[arg(long, default_value_t = GpOptions::default().max_iter)]
    pub gp_max_iter: usize,
    #[arg(long, default_value_t = GpOptions::default().seed)]
    pub gp_seed: u64,
    #[arg(long, default_value_t = GpOptions::default().enumeration_budget)]
    pub enumeration_budget: usize,
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
    pub strategy_cap: usize,
}

impl SolverArgs {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            ba: BaOptions {
                tol: self.tol,
                max_iter: self.max_iter,
            },
            gp: GpOptions {
                restarts: self.restarts,
                tol: self.gp_tol,
                max_iter: self.gp_max_iter,
                seed: self.gp_seed,
                enumeration_budget: self.enumeration_budget,
            },
            strategy_cap: self.strategy_cap,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CapacityArgs {
    pub path: PathBuf,
    #[arg(long, value_parser = parse_si, allow_hyphen_values = true)]
    #[serde(serialize_with = "as_token")]
    pub si: SiModel,
    #[arg(long, value_enum, default_value_t = Quantity::Vanishing)]
    pub quantity: Quantity,
    /// Coding regime for zero-error values.
    #[arg(long, value_parser = parse_regime, default_value = "vl")]
    #[serde(serialize_with = "as_token")]
    pub regime: Regime,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    /// One bit over the link matching `--si`, using an output that rules out an input.
    Disprover,
    /// One bit with the state known only at the decoder.
    Theorem5,
    /// Two-phase scheme: block code, then zero-error ACK/NACK and resend.
    HanSato,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRuleArg {
    Relaxed,
    Strict,
}

impl From<StopRuleArg> for StopRule {
    fn from(r: StopRuleArg) -> Self {
        match r {
            StopRuleArg::Relaxed => StopRule::Relaxed,
            StopRuleArg::Strict => StopRule::Strict,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    pub path: PathBuf,
    #[arg(long, value_enum)]
    pub protocol: ProtocolKind,
    #[arg(long, value_parser = parse_si, allow_hyphen_values = true, default_value = "-,-")]
    #[serde(serialize_with = "as_token")]
    pub si: SiModel,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Message size of the two-phase scheme.
    #[arg(long, default_value_t = 4)]
    pub msg_bits: usize,
    /// Phase-1 block length of the two-phase scheme.
    #[arg(long, default_value_t = 20)]
    pub n1: usize,
    #[arg(long, value_enum, default_value_t = StopRuleArg::Relaxed)]
    pub stop_rule: StopRuleArg,
    /// Write the slot-by-slot trace of one trial as JSON lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Which trial to trace.
    #[arg(long, default_value_t = 0)]
    pub trace_index: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    /// Block confusability of input sequences against the bounded-length verdict.
    Confusability,
    /// Lattice search of mutual information against the vanishing-error capacity.
    Grid,
    /// Lattice search over auxiliary laws against the non-causal optimizer.
    GpGrid,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    pub path: PathBuf,
    #[arg(long, value_enum)]
    pub kind: OracleKind,
    #[arg(long, value_parser = parse_si, allow_hyphen_values = true, default_value = "-,-")]
    #[serde(serialize_with = "as_token")]
    pub si: SiModel,
    /// Block length for the confusability oracle.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Lattice resolution; defaults to 1000 for `grid` and 20 for `gp-grid`.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub u_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    /// Largest search space the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

fn limit_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("SDCHAN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::new(exit::USAGE, "invalid_argument", format!("SDCHAN_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::new(exit::USAGE, "invalid_argument", e.to_string()))
}

type Run<A> = fn(&mut Emitter, &A) -> Result<report::Done, Failure>;

fn dispatch<A: Serialize>(command: &'static str, args: &A, verbose: bool, run: Run<A>) -> ExitCode {
    let parameters = serde_json::to_value(args).expect("arguments serialize");
    let mut em = Emitter::new(command, parameters, verbose);
    let outcome = limit_threads().and_then(|()| run(&mut em, args));
    em.finish(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let v = cli.verbose;
    match cli.command {
        Command::Validate(a) => dispatch("validate", &a, v, commands::validate),
        Command::Reduce(a) => dispatch("reduce", &a, v, commands::reduce),
        Command::Check(a) => dispatch("check", &a, v, commands::check),
        Command::Capacity(a) => dispatch("capacity", &a, v, commands::capacity),
        Command::Simulate(a) => dispatch("simulate", &a, v, commands::simulate),
        Command::Oracle(a) => dispatch("oracle", &a, v, commands::oracle),
    }
}
