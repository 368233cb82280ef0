use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dnls_cli::commands::{execute, Invocation};
use dnls_cli::manifest::{solver_id, SCHEMA};
use dnls_core::experiments::{Protocol, SweepParam};
use dnls_core::Scheme;

#[derive(Parser)]
#[command(name = "dnls", about = "Spectral solver for a dissipative derivative NLS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol named in the config, or a plain simulation if none.
    Run(Common),
    /// Compare stepped runs with the exact solution of the linear problem.
    ValidateLinear(Common),
    /// Halve the time step and report errors and observed orders.
    ConvergeTime(Common),
    /// Double the grid size and report errors and observed orders.
    ConvergeSpace(Common),
    /// Sweep eta or beta towards a reference value.
    Limit(Common),
    /// Print schema and build identifiers.
    Version,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, value_parser = parse_param)]
    param: Option<SweepParam>,
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Reserved; recorded in the manifest, no effect on the (deterministic) runs.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    Scheme::from_name(s).ok_or_else(|| format!("unknown scheme `{s}` (cnab2 or etd2)"))
}

fn parse_param(s: &str) -> Result<SweepParam, String> {
    SweepParam::from_name(s).ok_or_else(|| format!("unknown parameter `{s}` (eta or beta)"))
}

fn invocation(protocol: Option<Protocol>, c: Common) -> Invocation {
    Invocation {
        protocol,
        config: c.config,
        out: c.out,
        scheme: c.scheme,
        levels: c.levels,
        param: c.param,
        values: c.values,
        seed: c.seed,
        quiet: c.quiet,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, inv) = match cli.command {
        Command::Version => {
            println!("{} schema {SCHEMA}", solver_id());
            return ExitCode::SUCCESS;
        }
        Command::Run(c) => ("run", invocation(None, c)),
        Command::ValidateLinear(c) => ("validate-linear", invocation(Some(Protocol::ValidateLinear), c)),
        Command::ConvergeTime(c) => ("converge-time", invocation(Some(Protocol::ConvergeTime), c)),
        Command::ConvergeSpace(c) => ("converge-space", invocation(Some(Protocol::ConvergeSpace), c)),
        Command::Limit(c) => ("limit", invocation(Some(Protocol::LimitSweep), c)),
    };
    match execute(name, &inv) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dnls {name}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
