//! Subcommand implementations. Each one writes into the output directory
//! and finishes with a manifest, also on the failure paths that keep output.

mod evolve;
mod simulate;
mod symbol;
mod verify;

use serde_json::Value;

use crate::args::{Cli, Command, GlobalArgs};
use crate::config::{self, Config, ParamsSection, DEFAULT_PARAMS};
use crate::error::{CliError, CliResult};
use crate::parallel::worker_count;

pub use simulate::{growth_rates, neutral_estimate, GrowthRow};

pub fn run(cli: &Cli) -> CliResult<()> {
    let threads = worker_count(cli.global.threads);
    match &cli.command {
        Command::Symbol(args) => symbol::run(&cli.global, args),
        Command::Verify(args) => verify::run(&cli.global, args, threads),
        Command::LinearEvolve(args) => evolve::run(&cli.global, args, threads),
        Command::Simulate => simulate::run(&cli.global),
    }
}

/// The config named by `--config` or `--preset`, if any, with overrides applied.
fn selected_config(global: &GlobalArgs) -> CliResult<Option<Config>> {
    let mut config = match (&global.config, &global.preset) {
        (Some(path), _) => config::load(path)?,
        (None, Some(name)) => config::preset(name)?,
        (None, None) => return Ok(None),
    };
    global.overrides().apply(&mut config);
    Ok(Some(config))
}

/// Parameters from the selected config, else the defaults, with overrides.
fn resolved_params(global: &GlobalArgs) -> CliResult<ParamsSection> {
    let params = match selected_config(global)? {
        Some(c) => c.params,
        None => {
            let mut p = DEFAULT_PARAMS;
            global.overrides().apply_params(&mut p);
            p
        }
    };
    params.to_params()?;
    Ok(params)
}

fn params_json(p: &ParamsSection) -> Value {
    serde_json::to_value(p).expect("plain numbers serialize")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
