use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use unc_commit::adversary::{BindingStrategy, NoiseMode};
use unc_commit::entropy::io::{parse_distribution, parse_joint};
use unc_commit::error::{Error, Result};
use unc_commit::harness::{self, EntropyInput, ExperimentConfig, Format, Lengths, SessionNoise};

/// Commitment over unfair noisy channels: parameters, simulations and exact
/// security oracles.
#[derive(Parser)]
#[command(name = "unc-commit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity table over a grid of (gamma, delta).
    Capacity {
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        gamma: Vec<f64>,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', default_value = "0.15")]
        delta: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Honest sessions at the reference parameters: acceptance rate and
    /// rejection reasons.
    Soundness {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// `honest`, `min-noise`, `max-noise` or `fixed:<t>`.
        #[arg(long, default_value = "honest")]
        strategy: String,
    },
    /// Binding attacks on the tiny instance (n = 12).
    Binding {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// Committer noise: `min-noise`, `max-noise` or `fixed:<t>`.
        #[arg(long, default_value = "min-noise")]
        strategy: String,
        /// Let the committer pick its extractor after seeing both challenges.
        #[arg(long)]
        best_response_ext: bool,
    },
    /// Exact view distances on the tiny instance (n = 10, k = 1). `--trials`
    /// is the number of sampled challenge pairs.
    Concealing {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// Verifier noise grid, comma-separated; default gamma, midpoint, delta.
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
    },
    /// Entropies of distributions (`label probability` lines) and joint
    /// tables (tab-separated, header `X Y [Z] p`).
    Entropy {
        #[arg(long = "dist")]
        distributions: Vec<PathBuf>,
        #[arg(long = "joint")]
        joints: Vec<PathBuf>,
        /// Comma-separated smoothing parameters.
        #[arg(long, value_delimiter = ',', default_value = "0,0.01,0.05")]
        eps: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One session with its transcript.
    Run {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// `honest`, `min-noise`, `max-noise` or `fixed:<t>`.
        #[arg(long, default_value = "honest")]
        strategy: String,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `jsonl` or `csv`.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Explicit first hash length; with --ell2 and --k replaces the rates.
    #[arg(long)]
    ell1: Option<usize>,
    #[arg(long)]
    ell2: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    output: OutputArgs,
}

impl ExperimentArgs {
    fn config(&self, base: ExperimentConfig) -> Result<ExperimentConfig> {
        let mut c = base;
        c.gamma = self.gamma.unwrap_or(c.gamma);
        c.delta = self.delta.unwrap_or(c.delta);
        c.n = self.n.unwrap_or(c.n);
        c.alpha1 = self.alpha1.unwrap_or(c.alpha1);
        c.alpha2 = self.alpha2.unwrap_or(c.alpha2);
        c.beta = self.beta.unwrap_or(c.beta);
        c.nu = self.nu.unwrap_or(c.nu);
        c.trials = self.trials.unwrap_or(c.trials);
        c.seed = self.seed;
        let given = [self.ell1, self.ell2, self.k];
        c.lengths = match (c.lengths, given) {
            (_, [None, None, None]) => c.lengths,
            (Some(l), [a, b, k]) => Some(Lengths {
                ell1: a.unwrap_or(l.ell1),
                ell2: b.unwrap_or(l.ell2),
                k: k.unwrap_or(l.k),
            }),
            (None, [Some(ell1), Some(ell2), Some(k)]) => Some(Lengths { ell1, ell2, k }),
            (None, _) => {
                return Err(Error::Constraint(
                    "--ell1, --ell2 and --k must be given together".into(),
                ))
            }
        };
        c.params()?;
        Ok(c)
    }

    fn install_threads(&self) -> Result<()> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build_global()
            .map_err(|e| Error::Constraint(format!("thread pool: {e}")))
    }
}

fn emit(report: &harness::Report, output: &OutputArgs, default: Format) -> Result<()> {
    let format = match &output.format {
        Some(f) => f.parse()?,
        None => default,
    };
    let text = report.render(format)?;
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    Ok(())
}

fn load_inputs(distributions: &[PathBuf], joints: &[PathBuf]) -> Result<Vec<EntropyInput>> {
    let mut inputs = Vec::new();
    for path in distributions {
        let text = std::fs::read_to_string(path)?;
        inputs.push(EntropyInput::Distribution(
            path.display().to_string(),
            parse_distribution(&text)?,
        ));
    }
    for path in joints {
        let text = std::fs::read_to_string(path)?;
        inputs.push(EntropyInput::Joint(
            path.display().to_string(),
            parse_joint(&text)?,
        ));
    }
    if inputs.is_empty() {
        return Err(Error::Constraint(
            "give at least one --dist or --joint file".into(),
        ));
    }
    Ok(inputs)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Capacity {
            gamma,
            delta,
            output,
        } => emit(
            &harness::capacity_table(&gamma, &delta)?,
            &output,
            Format::Csv,
        ),
        Command::Soundness {
            experiment,
            strategy,
        } => {
            let config = experiment.config(ExperimentConfig::reference())?;
            let noise: SessionNoise = strategy.parse()?;
            experiment.install_threads()?;
            emit(
                &harness::soundness(&config, noise)?,
                &experiment.output,
                Format::Jsonl,
            )
        }
        Command::Binding {
            experiment,
            strategy,
            best_response_ext,
        } => {
            let config = experiment.config(ExperimentConfig::tiny_binding())?;
            let noise: NoiseMode = strategy.parse()?;
            let strategy = BindingStrategy {
                noise,
                best_response_ext,
            };
            experiment.install_threads()?;
            emit(
                &harness::binding(&config, strategy)?,
                &experiment.output,
                Format::Jsonl,
            )
        }
        Command::Concealing { experiment, t } => {
            let config = experiment.config(ExperimentConfig::tiny_concealing())?;
            experiment.install_threads()?;
            let report = harness::concealing(&config, t.as_deref())?;
            emit(&report, &experiment.output, Format::Jsonl)
        }
        Command::Entropy {
            distributions,
            joints,
            eps,
            output,
        } => {
            let inputs = load_inputs(&distributions, &joints)?;
            emit(&harness::entropy(&inputs, &eps)?, &output, Format::Csv)
        }
        Command::Run {
            experiment,
            strategy,
        } => {
            let config = experiment.config(ExperimentConfig {
                trials: 1,
                ..ExperimentConfig::reference()
            })?;
            let noise: SessionNoise = strategy.parse()?;
            emit(
                &harness::run_session(&config, noise)?,
                &experiment.output,
                Format::Jsonl,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match execute(cli.command) {
        Ok(()) => {
            eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
