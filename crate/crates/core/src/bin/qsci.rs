use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsci::harness::{run_experiment, ExperimentConfig, Kind, Scheme};
use qsci::{Error, Result};

/// Selected-CI experiments from JSON configs.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config's output_dir.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Parse the FCIDUMP and report its dimensions
    ParseCheck,
    /// Exact diagonalization in the target sector
    Casci,
    /// Ground-state QSCI energy against R
    QsciGround,
    /// Excited-state QSCI
    QsciExcited {
        #[arg(value_enum)]
        scheme: SchemeArg,
    },
    /// Optimize a VQE circuit
    Vqe,
    /// Sequential VQD excited states
    Vqd,
    /// Smallest R and shot estimate per tolerance
    Scaling,
    /// Repeated sampled QSCI, mean and spread of the error
    SamplingTrials,
    /// Noisy sampling with and without post-selection
    NoisyDemo,
    /// Grouped Pauli measurement of <H>
    QwcEstimate,
    /// Adaptive-sampling CI baseline
    Asci,
    /// Operator expectation values on a QSCI state
    Observables,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum SchemeArg {
    Single,
    Sequential,
}

impl Command {
    fn kind(self) -> Kind {
        match self {
            Command::ParseCheck => Kind::ParseCheck,
            Command::Casci => Kind::Casci,
            Command::QsciGround => Kind::QsciGround,
            Command::QsciExcited { .. } => Kind::QsciExcited,
            Command::Vqe => Kind::Vqe,
            Command::Vqd => Kind::Vqd,
            Command::Scaling => Kind::Scaling,
            Command::SamplingTrials => Kind::SamplingTrials,
            Command::NoisyDemo => Kind::NoisyDemo,
            Command::QwcEstimate => Kind::QwcEstimate,
            Command::Asci => Kind::Asci,
            Command::Observables => Kind::Observables,
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config {
                field: "--threads".into(),
                message: e.to_string(),
            })?;
    }
    let path = cli.global.config.as_ref().ok_or_else(|| Error::Config {
        field: "--config".into(),
        message: "a config file is required".into(),
    })?;
    let mut cfg = ExperimentConfig::load(path)?;
    let kind = cli.command.kind();
    if let Some(k) = cfg.kind.filter(|&k| k != kind) {
        return Err(Error::Config {
            field: "kind".into(),
            message: format!("config is for `{k}` but `{kind}` was requested"),
        });
    }
    cfg.kind = Some(kind);
    if let Command::QsciExcited { scheme } = cli.command {
        cfg.scheme = Some(match scheme {
            SchemeArg::Single => Scheme::Single,
            SchemeArg::Sequential => Scheme::Sequential,
        });
    }
    if cli.global.seed.is_some() {
        cfg.seed = cli.global.seed;
    }
    let out = run_experiment(&cfg, cli.global.out.as_deref())?;
    for f in &out.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
