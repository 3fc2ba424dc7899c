#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::{PlateauRequest, QuadratureRequest, RunConfig};
use crate::error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum { potential, basis, solver, output } => {
            commands::spectrum(&RunConfig::resolve(&potential, &basis, &output)?, &solver.solver)
        }
        Command::Potential { potential, grid, shape_out, output } => {
            commands::potential(&potential, &grid, shape_out, &output)
        }
        Command::Wavefunction { potential, basis, solver, grid, state, terms, output } => {
            let cfg = RunConfig::resolve(&potential, &basis, &output)?;
            commands::wavefunction(&cfg, &solver.solver, &grid, state, terms)
        }
        Command::Plateau { potential, basis, solver, mu_min, mu_max, mu_steps, nu_rule, output } => {
            let cfg = RunConfig::resolve(&potential, &basis, &output)?;
            let req = PlateauRequest { mu_min, mu_max, mu_steps, nu_rule: &nu_rule, solver: &solver.solver };
            commands::plateau(&cfg, &req)
        }
        Command::CheckQuadrature { mu, nu, min_degree, max_degree, tol, output } => {
            commands::check_quadrature(&QuadratureRequest { mu, nu, min_degree, max_degree, tol }, &output)
        }
    }
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    // clap exits with 2 on usage errors, matching configuration errors
    let cli = Cli::parse_from(args);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
