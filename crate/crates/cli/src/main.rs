//! `pouw` — command-line surface for the proof-of-useful-work protocol kit:
//! circuit tooling, witness-obfuscation workflows, registry operations,
//! simulation runs, and experiment reproduction with CSV output.
//!
//! Exit codes: 0 success, 1 domain failure (verification/satisfaction/parse),
//! 2 usage or configuration error.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Verification, satisfaction, parse, or compile failure → exit 1.
    #[error("{0}")]
    Domain(String),
    /// Bad arguments or configuration → exit 2.
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser)]
#[command(name = "pouw", version, about = "Proof-of-useful-work protocol toolkit")]
struct Cli {
    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = "./out")]
    out: PathBuf,

    /// RNG seed; POUW_SEED is used when the flag is absent.
    #[arg(long, global = true, env = "POUW_SEED", default_value_t = 42)]
    seed: u64,

    /// TOML configuration file (unknown keys rejected).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circuit DSL tooling.
    Circuit {
        #[command(subcommand)]
        cmd: CircuitCmd,
    },
    /// Witness-obfuscated outsourcing workflow (client and worker stages).
    Woo {
        #[command(subcommand)]
        cmd: WooCmd,
    },
    /// Circuit registry subnetwork operations.
    Registry {
        #[command(subcommand)]
        cmd: RegistryCmd,
    },
    /// Mining simulation.
    Sim {
        #[command(subcommand)]
        cmd: SimCmd,
    },
    /// Reproduce the H1–H4 and overlap experiments.
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Subcommand)]
enum CircuitCmd {
    /// Compile a circuit to R1CS JSON and print the constraint count.
    Compile { file: PathBuf },
    /// Check whether given inputs satisfy a circuit.
    Check {
        file: PathBuf,
        /// Public inputs as name=value pairs, comma separated.
        #[arg(long, default_value = "")]
        public: String,
        /// Private inputs as name=value pairs, comma separated.
        #[arg(long, default_value = "")]
        private: String,
    },
}

#[derive(Subcommand)]
enum WooCmd {
    /// Sample input/output masks for a circuit (client stage 1).
    Mask { file: PathBuf },
    /// Emit the transformed circuit with embedded unmasking (client stage 2).
    Transform {
        file: PathBuf,
        #[arg(long)]
        masks: PathBuf,
    },
    /// Prove the transformed circuit over masked inputs (worker stage).
    Prove {
        file: PathBuf,
        #[arg(long)]
        masks: PathBuf,
        /// Base-circuit public inputs as name=value pairs.
        #[arg(long, default_value = "")]
        public: String,
        /// Base-circuit private inputs as name=value pairs.
        #[arg(long, default_value = "")]
        private: String,
        /// Integrity parameter value injected as the final public input.
        #[arg(long)]
        eta: u64,
    },
    /// Verify a proof artifact.
    Verify {
        #[arg(long)]
        proof: PathBuf,
    },
}

#[derive(Subcommand)]
enum RegistryCmd {
    /// Register a circuit: compile, run the setup ceremony, distribute fees.
    Register {
        file: PathBuf,
        #[arg(long)]
        fee: u64,
        /// Block height recorded on the record.
        #[arg(long, default_value_t = 0)]
        height: u64,
        /// Event-log file (created if missing).
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Fetch a registered circuit record by hex id.
    Get {
        id: String,
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SimCmd {
    /// Run one simulation and write metrics CSVs.
    Run {
        /// Override the configured ψ.
        #[arg(long)]
        psi: Option<f64>,
        /// Override the configured block-count duration.
        #[arg(long)]
        blocks: Option<u64>,
        /// Override the configured initial difficulty κ.
        #[arg(long)]
        kappa: Option<u64>,
        /// Override the configured fixed bucket-prefix width.
        #[arg(long)]
        k_bits: Option<u32>,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Power-ratio fairness sweep (2 miners, f ∈ {1..4}).
    H1 {
        #[arg(long, default_value_t = 5_000)]
        blocks: u64,
    },
    /// Proof-size neutrality (equal power, different preferences).
    H2 {
        #[arg(long, default_value_t = 5_000)]
        blocks: u64,
    },
    /// ψ sweep with 5 miners of powers {1..5}.
    H3 {
        #[arg(long, default_value_t = 2_000)]
        blocks: u64,
        /// Comma-separated seeds averaged per ψ.
        #[arg(long, default_value = "1,2,3")]
        seeds: String,
    },
    /// Bucket sweep with 8 equal miners over {1,2,4,8} buckets.
    H4 {
        #[arg(long, default_value_t = 2_000)]
        blocks: u64,
    },
    /// Analytic-vs-Monte-Carlo mempool overlap table.
    Overlap {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, default_value_t = 200_000)]
        trials: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let app = match &cli.config {
        Some(path) => config::AppConfig::load(path).map_err(CliError::Usage)?,
        None => config::AppConfig::default(),
    };
    let ctx = commands::Ctx { out: cli.out, seed: cli.seed, app };
    ctx.ensure_out()?;
    match cli.command {
        Command::Circuit { cmd } => match cmd {
            CircuitCmd::Compile { file } => commands::circuit::compile(&ctx, &file),
            CircuitCmd::Check { file, public, private } => {
                commands::circuit::check(&ctx, &file, &public, &private)
            }
        },
        Command::Woo { cmd } => match cmd {
            WooCmd::Mask { file } => commands::woo::mask(&ctx, &file),
            WooCmd::Transform { file, masks } => commands::woo::transform(&ctx, &file, &masks),
            WooCmd::Prove { file, masks, public, private, eta } => {
                commands::woo::prove(&ctx, &file, &masks, &public, &private, eta)
            }
            WooCmd::Verify { proof } => commands::woo::verify(&ctx, &proof),
        },
        Command::Registry { cmd } => match cmd {
            RegistryCmd::Register { file, fee, height, state } => {
                commands::registry::register(&ctx, &file, fee, height, state.as_deref())
            }
            RegistryCmd::Get { id, state } => commands::registry::get(&ctx, &id, state.as_deref()),
        },
        Command::Sim { cmd } => match cmd {
            SimCmd::Run { psi, blocks, kappa, k_bits } => {
                commands::sim::run(&ctx, psi, blocks, kappa, k_bits)
            }
        },
        Command::Experiment { cmd } => match cmd {
            ExperimentCmd::H1 { blocks } => commands::experiment::h1(&ctx, blocks),
            ExperimentCmd::H2 { blocks } => commands::experiment::h2(&ctx, blocks),
            ExperimentCmd::H3 { blocks, seeds } => commands::experiment::h3(&ctx, blocks, &seeds),
            ExperimentCmd::H4 { blocks } => commands::experiment::h4(&ctx, blocks),
            ExperimentCmd::Overlap { m, t, trials } => {
                commands::experiment::overlap(&ctx, m, t, trials)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
