mod args;
mod commands;
mod output;

use std::process::ExitCode;

use avset_core::Error;
use clap::Parser;

use args::{BoundsCommand, Cli, Command};

const EXIT_REGIME: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_INPUT: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Regime(_) | Error::InvalidFamily(_) | Error::OutOfRange { .. } => EXIT_REGIME,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::PropertyViolation(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = &cli.global;
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(g.workers).build_global() {
        eprintln!("error: worker pool: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    let top = cli.family.clone().map(|family| args::ExactArgs {
        family,
        method: cli.method,
    });
    let result = match (&cli.command, &top) {
        (Some(Command::Avset(a)), _) | (None, Some(a)) => commands::exact(a, g.budget),
        (Some(Command::Chi(a)), _) => commands::chi(a, g.budget),
        (Some(Command::Scan(a)), _) => commands::scan(a, g.budget),
        (Some(Command::Bounds(BoundsCommand::Point(a))), _) => commands::bounds_point(a, g.budget),
        (Some(Command::Bounds(BoundsCommand::Sweep(a))), _) => commands::bounds_sweep(a),
        (Some(Command::Bounds(BoundsCommand::Grid(a))), _) => commands::bounds_grid(a, g.budget),
        (Some(Command::Verify(a)), _) => commands::verify(a, g.budget),
        (Some(Command::Htable(a)), _) => commands::htable(a),
        (None, None) => {
            eprintln!("error: give a subcommand or --field/--d/--s; see --help");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = output::emit(&outcome.report, g.format, g.output.as_deref()) {
                eprintln!("error: writing report: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            match outcome.violation {
                Some(msg) => {
                    eprintln!("property violated: {msg}");
                    ExitCode::from(EXIT_VIOLATION)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
