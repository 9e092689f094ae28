use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use laacoex::commands::{simulate_cmd, solve_cmd, sweep_cmd, validate_cmd};
use laacoex::config::load_config;
use laacoex::CliError;
use laacoex_core::experiments::{RunOptions, Scenario, Variant};
use laacoex_core::solver::Method;
use laacoex_core::FastStartMode;

#[derive(Parser)]
#[command(
    name = "laacoex",
    version,
    about = "LAA/Wi-Fi coexistence: Markov model and simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    Direct,
    Iterative,
}

#[derive(Clone, Copy, ValueEnum)]
enum FastStart {
    Exponential,
    Immediate,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary dropping probabilities of one configuration.
    Solve {
        config: String,
        #[arg(long, value_enum, default_value = "direct")]
        method: SolveMethod,
        /// Write the stationary distribution as `w,x,y,z,pi`.
        #[arg(long, value_name = "FILE")]
        dump_pi: Option<PathBuf>,
    },
    /// Discrete-event simulation of one configuration.
    Simulate {
        config: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        sessions: Option<u64>,
        #[arg(long)]
        replications: Option<u32>,
    },
    /// Analytic and simulated grids against the reference tables.
    Validate {
        /// Only one grid: 1 (LBT with buffering) or 2 (always ON).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: Option<u8>,
        #[arg(long, default_value_t = 1_000_000)]
        sessions: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        replications: u32,
        #[arg(long, value_enum, default_value = "exponential")]
        fast_start: FastStart,
    },
    /// Dropping probabilities against queue capacity for the four variants.
    Sweep {
        #[arg(long, default_value_t = 2)]
        q_from: u32,
        #[arg(long, default_value_t = 10)]
        q_to: u32,
        /// Comma-separated subset of lbt+buffering, lbt-only,
        /// buffering-only, none.
        #[arg(long, value_delimiter = ',', value_parser = parse_variant)]
        variants: Vec<Variant>,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::parse(s).ok_or_else(|| format!("unknown variant `{s}`"))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    match cli.command {
        Command::Solve {
            config,
            method,
            dump_pi,
        } => {
            let cfg = load_config(&config)?;
            let method = match method {
                SolveMethod::Direct => Method::Direct,
                SolveMethod::Iterative => Method::iterative(),
            };
            solve_cmd(&cfg, method, dump_pi.as_deref(), &mut out)?;
        }
        Command::Simulate {
            config,
            seed,
            sessions,
            replications,
        } => {
            let mut cfg = load_config(&config)?;
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.sessions = sessions.unwrap_or(cfg.sessions);
            cfg.replications = replications.unwrap_or(cfg.replications);
            simulate_cmd(&cfg, &mut out)?;
        }
        Command::Validate {
            table,
            sessions,
            seed,
            replications,
            fast_start,
        } => {
            let scenarios = match table {
                Some(1) => vec![Scenario::LbtBuffering],
                Some(_) => vec![Scenario::AlwaysOn],
                None => vec![Scenario::LbtBuffering, Scenario::AlwaysOn],
            };
            let opts = RunOptions {
                sessions,
                seed,
                replications,
                fast_start_mode: match fast_start {
                    FastStart::Exponential => FastStartMode::Exponential,
                    FastStart::Immediate => FastStartMode::Immediate,
                },
            };
            return validate_cmd(&scenarios, &opts, &mut out, &mut err);
        }
        Command::Sweep {
            q_from,
            q_to,
            variants,
        } => {
            let variants = if variants.is_empty() {
                Variant::ALL.to_vec()
            } else {
                variants
            };
            sweep_cmd(q_from, q_to, &variants, &mut out, &mut err)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        // usage errors share the config-error code
        let code = if e.use_stderr() { 2 } else { 0 };
        let _ = e.print();
        std::process::exit(code);
    });
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("laacoex: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
