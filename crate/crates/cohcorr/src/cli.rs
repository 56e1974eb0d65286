//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cohcorr_core::random;
use cohcorr_core::state::{make_bell, make_werner, Bell};
use cohcorr_core::{DensityMatrix, Dims, OptimizerConfig};

use crate::analyze::{analyze, AnalyzeRequest, Measure, MethodChoice};
use crate::campaign::{Campaign, Suite};
use crate::error::CliError;
use crate::io::{read_state, state_to_json};
use crate::sweep::{to_csv, violation_onset, werner_sweep};

/// Restarts used by `--fast`.
pub const FAST_RESTARTS: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "cohcorr", version, about = "Coherence-class correlations of bipartite quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate measures on a state file.
    Analyze(AnalyzeArgs),
    /// Write a state file.
    Generate(GenerateArgs),
    /// Tabulate closed-form measures along a state family as CSV.
    Sweep(SweepArgs),
    /// Run a randomized verification campaign.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    /// Base seed for optimizer restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Optimizer restarts per extremum.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Use 8 restarts instead of 32. Faster, but a restart set this small
    /// can miss the global extremum on hard states.
    #[arg(long, conflicts_with = "restarts")]
    pub fast: bool,
    /// Simplex iteration budget per restart.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Simplex convergence tolerance on objective values.
    #[arg(long)]
    pub objective_tolerance: Option<f64>,
}

impl OptimizerArgs {
    pub fn config(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::default().with_seed(self.seed);
        if self.fast {
            cfg.restarts = FAST_RESTARTS;
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(m) = self.max_iterations {
            cfg.max_iterations = m;
        }
        if let Some(t) = self.objective_tolerance {
            cfg.objective_tolerance = t;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// State JSON file.
    pub input: PathBuf,
    /// Comma-separated measures; all of them when omitted.
    #[arg(long, value_delimiter = ',')]
    pub measures: Vec<Measure>,
    #[arg(long, value_enum, default_value_t = MethodChoice::Analytic)]
    pub method: MethodChoice,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Bell,
    Werner,
    RandomPure,
    RandomMixed,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BellArg {
    #[value(name = "phi+")]
    PhiPlus,
    #[value(name = "phi-")]
    PhiMinus,
    #[value(name = "psi+")]
    PsiPlus,
    #[value(name = "psi-")]
    PsiMinus,
}

impl From<BellArg> for Bell {
    fn from(b: BellArg) -> Bell {
        match b {
            BellArg::PhiPlus => Bell::PhiPlus,
            BellArg::PhiMinus => Bell::PhiMinus,
            BellArg::PsiPlus => Bell::PsiPlus,
            BellArg::PsiMinus => Bell::PsiMinus,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: StateKind,
    #[arg(long, value_enum, default_value_t = BellArg::PhiPlus)]
    pub which: BellArg,
    /// Werner mixing weight in [0, 1].
    #[arg(long)]
    pub p: Option<f64>,
    /// Local dimensions, `MxN`.
    #[arg(long, value_parser = parse_dims, default_value = "2x2")]
    pub dims: Dims,
    /// Rank of a random mixed state; full rank when omitted.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Werner,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Family::Werner)]
    pub family: Family,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Accepted for uniformity; sweeps are closed form and deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Number of trials; the suite's default when omitted.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Local dimensions, `MxN`; the suite's default set when omitted.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<Dims>,
    /// Pass threshold on the per-trial deviation; the suite's default when omitted.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected MxN, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad dimension {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad dimension {b:?}"))?;
    Dims::new(a, b).map_err(|e| e.to_string())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

pub fn generate_state(args: &GenerateArgs) -> Result<DensityMatrix, CliError> {
    let qubits_only = |what: &str| {
        if args.dims.is_qubits() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("{what} states are two-qubit; drop --dims {}", args.dims)))
        }
    };
    let rho = match args.kind {
        StateKind::Bell => {
            qubits_only("bell")?;
            make_bell(args.which.into()).density()
        }
        StateKind::Werner => {
            qubits_only("werner")?;
            let p = args.p.ok_or_else(|| CliError::Usage("werner needs --p".into()))?;
            make_werner(p)?
        }
        StateKind::RandomPure => random::random_pure(args.dims, args.seed).density(),
        StateKind::RandomMixed => {
            let rank = args.rank.unwrap_or(args.dims.total());
            random::random_mixed(args.dims, rank, args.seed)?
        }
        StateKind::Product => random::random_product_pure(args.dims, &mut random::rng(args.seed)).density(),
    };
    Ok(rho)
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let rho = read_state(&args.input)?;
    let measures = if args.measures.is_empty() {
        Measure::ALL.to_vec()
    } else {
        args.measures.clone()
    };
    let req = AnalyzeRequest {
        measures,
        method: args.method,
        optimizer: args.optimizer.config(),
    };
    let report = analyze(&rho, &req)?;
    for r in report.records.iter().filter(|r| r.converged == Some(false)) {
        eprintln!("warning: {} ({}): optimizer did not converge", r.measure, r.method);
    }
    let text = match args.format {
        OutputFormat::Table => report.to_table(),
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    };
    emit(&text, args.out.as_deref())
}

fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let rows = match args.family {
        Family::Werner => werner_sweep(args.lo, args.hi, args.steps)?,
    };
    emit(&to_csv(&rows), args.out.as_deref())?;
    let onset = match violation_onset(&rows) {
        Some(p) => format!("chsh violation onset: p = {p:.6}"),
        None => "chsh violation onset: none in range".to_string(),
    };
    // Keep stdout pure CSV when it carries the table.
    if args.out.is_some() {
        println!("{onset}");
    } else {
        eprintln!("{onset}");
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let mut campaign = Campaign::new(args.suite).with_seed(args.optimizer.seed);
    campaign.optimizer = args.optimizer.config();
    if let Some(t) = args.trials {
        campaign = campaign.with_trials(t);
    }
    if let Some(d) = args.dims {
        campaign = campaign.with_dims(d);
    }
    if let Some(tol) = args.tol {
        campaign = campaign.with_tol(tol);
    }
    let summary = campaign.run()?;
    println!("{summary}");
    if summary.all_passed() {
        Ok(())
    } else {
        Err(CliError::Verification {
            failed: summary.failed,
            trials: summary.trials,
        })
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => run_analyze(a),
        Command::Generate(g) => emit(&state_to_json(&generate_state(g)?), g.out.as_deref()),
        Command::Sweep(s) => run_sweep(s),
        Command::Verify(v) => run_verify(v),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("2x3").unwrap(), Dims::new(2, 3).unwrap());
        assert_eq!(parse_dims("4X4").unwrap(), Dims::new(4, 4).unwrap());
        assert!(parse_dims("0x2").is_err());
        assert!(parse_dims("22").is_err());
    }

    #[test]
    fn usage_errors() {
        assert!(Cli::try_parse_from(["cohcorr", "verify", "no-such-suite"]).is_err());
        assert!(Cli::try_parse_from(["cohcorr", "frobnicate"]).is_err());
        let cli = Cli::try_parse_from(["cohcorr", "sweep", "--steps", "1"]).unwrap();
        assert_eq!(execute(&cli).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn fast_flag() {
        let cli = Cli::try_parse_from(["cohcorr", "verify", "theorem5", "--fast"]).unwrap();
        let Command::Verify(v) = cli.command else { panic!() };
        assert_eq!(v.optimizer.config().restarts, FAST_RESTARTS);
        assert!(Cli::try_parse_from(["cohcorr", "verify", "theorem5", "--fast", "--restarts", "4"]).is_err());
    }
}
