use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geomc_harness::config::ExperimentConfig;
use geomc_harness::{curve, run, HarnessError, Result};

#[derive(Parser)]
#[command(name = "geomc", version, about = "Run geometric MCMC experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides `base_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output_dir`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            cfg.base_seed = s;
        }
        if let Some(d) = &self.out_dir {
            cfg.output_dir = d.clone();
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run `n_chains` chains and write traces and metrics.
    Run(ConfigArgs),
    /// Write the MMD-vs-step curve and its summary.
    MmdCurve(ConfigArgs),
    /// Write `n_reference` i.i.d. target draws.
    Reference(ConfigArgs),
    /// Recompute metrics from trace files.
    Diagnose {
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        /// Reference-sample CSV for KS statistics.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        n_projections: usize,
        /// Seed for the random projections.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let runs = run::run(&cfg)?;
            eprintln!("wrote {} trace(s) to {}", runs.len(), cfg.output_dir.display());
        }
        Command::MmdCurve(args) => {
            let cfg = args.load()?;
            let c = curve::mmd_curve(&cfg)?;
            c.save(&cfg.output_dir)?;
            eprintln!(
                "final |MMD²ᵤ| {:.3e}, log-slope {}",
                c.summary.final_value,
                c.summary.slope.map_or("n/a".into(), |s| format!("{s:.4}"))
            );
        }
        Command::Reference(args) => {
            let cfg = args.load()?;
            let path = run::reference(&cfg)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Diagnose {
            traces,
            reference,
            n_projections,
            seed,
            out_dir,
        } => {
            if n_projections == 0 {
                return Err(HarnessError::validation("n_projections", "must be ≥ 1"));
            }
            let metrics = run::diagnose(&traces, reference.as_deref(), n_projections, seed)?;
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join("diagnose.json");
            let mut text = serde_json::to_string_pretty(&metrics)?;
            text.push('\n');
            std::fs::write(&path, text)?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
