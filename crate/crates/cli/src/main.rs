//! `entloc`: parameter sweeps, single protocol runs, model cross-checks and
//! tomography simulations.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage error, 3 degenerate input.

mod args;
mod fail;
mod grid;
mod num;
mod oracle;
mod setup;
mod stage;
mod sweep;
mod tomo;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(p) => p.resolve().and_then(|p| sweep::run(&p)),
        Command::Stage(p) => p.resolve().and_then(|p| stage::run(&p)),
        Command::OracleCheck(p) => p.resolve().and_then(|p| oracle::run(&p)),
        Command::Tomo(p) => p.resolve().and_then(|p| tomo::run(&p)),
    };
    if let Err(e) = result {
        eprintln!("entloc: {e}");
        std::process::exit(e.exit_code());
    }
}
