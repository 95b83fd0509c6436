//! Command-line driver: data generation, training, evaluation, settings
//! scans and FOM tables, all configured by one JSON document.

pub mod commands;
pub mod config;
pub mod error;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::RunConfig;
pub use error::{CliError, CliResult};
use qamlz::solver::SolverKind;

#[derive(Debug, Parser)]
#[command(name = "qamlz", version, about = "Zoomed annealing classifier: train, evaluate and scan settings")]
pub struct Cli {
    /// JSON run configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configuration seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Overrides the configured solver.
    #[arg(long, global = true, value_parser = ["exact", "sa", "chain", "external"])]
    pub solver: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic event CSV.
    Gen {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a model; writes model.json and train_log.jsonl.
    Train,
    /// Score the assess sample; writes the FOM curve and over-training report.
    Eval {
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Run the settings grid; writes scan.csv.
    Scan,
    /// Tabulate the FOM over yields and background uncertainties.
    Fom {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 10.0, 100.0, 1000.0])]
        signal: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1000.0])]
        background: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.2])]
        f: Vec<f64>,
        /// CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Configuration after applying the global flags.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(name) = &cli.solver {
        cfg.zoom.solver.kind = name.parse::<SolverKind>()?;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    if let Command::Fom { signal, background, f, out } = &cli.command {
        return match out {
            Some(path) => {
                let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
                commands::write_fom_table(&mut w, signal, background, f)?;
                w.flush()?;
                Ok(())
            }
            None => commands::write_fom_table(std::io::stdout().lock(), signal, background, f),
        };
    }
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Gen { out } => {
            let path = commands::cmd_gen(&cfg, out.as_deref())?;
            println!("wrote {}", path.display());
        }
        Command::Train => {
            let out = commands::cmd_train(&cfg)?;
            println!("wrote {} and {}", out.model_path.display(), out.log_path.display());
        }
        Command::Eval { model } => {
            let out = commands::cmd_eval(&cfg, model.as_deref())?;
            match out.summary.best_fom {
                Some(f) => println!("best FOM {f:.4} (no cut {:.4})", out.summary.baseline_fom),
                None => println!("no valid cut (no cut {:.4})", out.summary.baseline_fom),
            }
        }
        Command::Scan => {
            let rows = commands::cmd_scan(&cfg)?;
            println!("wrote {} rows to {}", rows.len(), cfg.output_dir.join(commands::SCAN_FILE).display());
        }
        Command::Fom { .. } => unreachable!("handled above"),
    }
    Ok(())
}

/// Runs the parsed command on a pool of `--jobs` threads.
pub fn run(cli: &Cli) -> CliResult<()> {
    match cli.jobs {
        Some(0) => Err(CliError::Config("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}
