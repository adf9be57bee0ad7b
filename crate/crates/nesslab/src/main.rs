use std::path::Path;
use std::process::ExitCode;

use nesslab::cli::{self, EvolveOptions, InitialState};
use nesslab::config::{CliError, RunConfig};

const USAGE: &str = "usage: nesslab <command> <config.json> [options]

commands:
  check   <config.json>     evaluate criteria, steady state, flux, entropy production
  sweep   <config.json>     scan the configured parameter grid, emit CSV
  evolve  <config.json> --t-max T --steps N --initial <state>
                            propagate a state and emit a CSV trajectory

evolve initial states: gibbs-left | gibbs-right | maximally-mixed | file:<path>

exit codes: 0 success, 2 theorem hypotheses fail (check), 64 configuration
error, 70 numerical failure";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nesslab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &[String]) -> Result<i32, CliError> {
    let (command, rest) = args
        .split_first()
        .ok_or_else(|| CliError::Config(USAGE.into()))?;
    let (config_path, options) = rest
        .split_first()
        .ok_or_else(|| CliError::Config(USAGE.into()))?;
    let config = RunConfig::load(Path::new(config_path))?;

    match command.as_str() {
        "check" => {
            if !options.is_empty() {
                return Err(CliError::Config(format!(
                    "check takes no options, got `{}`",
                    options.join(" ")
                )));
            }
            let outcome = cli::run_check(&config)?;
            cli::write_output(&outcome.report, &config, "json")?;
            Ok(outcome.exit_code)
        }
        "sweep" => {
            if !options.is_empty() {
                return Err(CliError::Config(format!(
                    "sweep takes no options, got `{}`",
                    options.join(" ")
                )));
            }
            let csv = cli::run_sweep(&config)?;
            cli::write_output(&csv, &config, "csv")?;
            Ok(0)
        }
        "evolve" => {
            let opts = parse_evolve_options(options)?;
            let csv = cli::run_evolve(&config, &opts)?;
            cli::write_output(&csv, &config, "csv")?;
            Ok(0)
        }
        other => Err(CliError::Config(format!(
            "unknown command `{other}`\n{USAGE}"
        ))),
    }
}

fn parse_evolve_options(options: &[String]) -> Result<EvolveOptions, CliError> {
    let mut t_max = None;
    let mut steps = None;
    let mut initial = None;
    let mut iter = options.iter();
    while let Some(flag) = iter.next() {
        let value = |it: &mut std::slice::Iter<String>| {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::Config(format!("{flag} needs a value")))
        };
        match flag.as_str() {
            "--t-max" => {
                let v = value(&mut iter)?;
                t_max = Some(v.parse::<f64>().map_err(|_| {
                    CliError::Config(format!("--t-max must be a number, got `{v}`"))
                })?);
            }
            "--steps" => {
                let v = value(&mut iter)?;
                steps = Some(v.parse::<usize>().map_err(|_| {
                    CliError::Config(format!("--steps must be an integer, got `{v}`"))
                })?);
            }
            "--initial" => {
                initial = Some(InitialState::parse(&value(&mut iter)?)?);
            }
            other => {
                return Err(CliError::Config(format!("unknown option `{other}`\n{USAGE}")));
            }
        }
    }
    Ok(EvolveOptions {
        t_max: t_max.ok_or_else(|| CliError::Config("evolve needs --t-max".into()))?,
        steps: steps.ok_or_else(|| CliError::Config("evolve needs --steps".into()))?,
        initial: initial.ok_or_else(|| CliError::Config("evolve needs --initial".into()))?,
    })
}
