mod args;
mod commands;
mod error;
mod settings;
mod svg;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use settings::Settings;

fn run(cli: Cli) -> Result<String, CliError> {
    let (args, defaults, command): (_, _, fn(&Settings) -> Result<String, CliError>) =
        match &cli.command {
            Command::Point(a) => (a, commands::POINT_DEFAULTS, commands::point),
            Command::Sweep(a) => (a, commands::SWEEP_DEFAULTS, commands::sweep),
            Command::Optimize(a) => (a, commands::OPTIMIZE_DEFAULTS, commands::optimize),
            Command::Figures(a) => (a, commands::FIGURE_DEFAULTS, commands::figures),
        };
    let settings = Settings::resolve(args, defaults)?;
    if let Some(jobs) = settings.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    }
    command(&settings)
}

fn main() -> ExitCode {
    // clap exits with 2 on malformed flags and 0 for --help/--version.
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("unruhchan: {e}");
            if e.exit_code() == 3 {
                eprintln!(
                    "hint: raise {} or pass --nmax/--tol to change the cutoff",
                    settings::CAP_ENV
                );
            }
            ExitCode::from(e.exit_code())
        }
    }
}
