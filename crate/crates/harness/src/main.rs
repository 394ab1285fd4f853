use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use sfmis_harness::{run, ConfigFile, Experiment, ExperimentConfig, FitDegrees, HarnessError};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Generate,
    Degeneracy,
    Fit,
    Mis,
    Diameter,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Generate => Experiment::Generate,
            Command::Degeneracy => Experiment::Degeneracy,
            Command::Fit => Experiment::Fit,
            Command::Mis => Experiment::Mis,
            Command::Diameter => Experiment::Diameter,
        }
    }
}

/// Scale-free network experiments: generation, degeneracy, MIS protocols,
/// tail fits and diameters.
#[derive(Parser, Debug)]
#[command(name = "sfmis", version)]
struct Cli {
    command: Command,
    /// Number of vertices; repeat for a ladder of sizes.
    #[arg(long = "n")]
    n: Vec<usize>,
    /// Power-law exponent; repeatable.
    #[arg(long = "beta")]
    beta: Vec<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// product-cap or exponential.
    #[arg(long)]
    kernel: Option<String>,
    /// alg3, alg4, luby, diameter or two-phase; repeatable.
    #[arg(long)]
    strategy: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with any subset of the configuration keys; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write JSON-lines traces of every MIS run.
    #[arg(long)]
    trace: bool,
    /// Exit with an error when any row failed.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    n_bootstrap: Option<usize>,
    /// Multiplier applied to every weight.
    #[arg(long)]
    scale: Option<f64>,
    /// internal or original.
    #[arg(long)]
    fit_degrees: Option<String>,
    #[arg(long)]
    round_limit: Option<u32>,
}

fn non_empty<T>(v: Vec<T>) -> Option<Vec<T>> {
    (!v.is_empty()).then_some(v)
}

fn resolve(cli: Cli) -> Result<(ExperimentConfig, bool), HarnessError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::from_json(&std::fs::read_to_string(path)?)?,
        None => ConfigFile::default(),
    };
    let fit_degrees = cli.fit_degrees.as_deref().map(str::parse::<FitDegrees>).transpose().map_err(HarnessError::Config)?;
    let (n, n_list) = match cli.n.len() {
        0 => (None, None),
        1 => (Some(cli.n[0]), None),
        _ => (None, Some(cli.n.clone())),
    };
    let flags = ConfigFile {
        // the subcommand always names the experiment
        experiment: Some(cli.command.into()),
        n,
        n_list,
        beta_list: non_empty(cli.beta),
        trials: cli.trials,
        seed: cli.seed,
        kernel: cli.kernel,
        strategy: non_empty(cli.strategy),
        output_dir: cli.out,
        n_bootstrap: cli.n_bootstrap,
        scale: cli.scale,
        fit_degrees,
        round_limit: cli.round_limit,
        trace: cli.trace.then_some(true),
    };
    let mut merged = file.overridden_by(flags);
    if n.is_some() {
        merged.n_list = None;
    }
    Ok((ExperimentConfig::resolve(merged, cli.command.into())?, cli.strict))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, strict) = match resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(report) => {
            println!("{} rows -> {} (config {})", report.rows, report.csv.display(), cfg.hash());
            for chart in &report.charts {
                println!("chart -> {}", chart.display());
            }
            if report.error_rows > 0 {
                eprintln!("{} rows did not complete", report.error_rows);
                if strict {
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
