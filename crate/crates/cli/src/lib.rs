//! Batch front end for the `fermichain` library.
//!
//! [`run`] parses arguments, dispatches to a subcommand and returns the
//! process exit code: 0 on success, 1 for invalid input, 2 when a numerical
//! method fails to converge.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use config::{Cli, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] fermichain::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return 0;
            }
            let rendered = e.render().to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return 1;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let base = match &cli.flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let config = base.merge(cli.flags)?;
    if config.gnuplot_stub && (config.output.is_none() || config.format() != Format::Csv) {
        return Err(CliError::Usage("--gnuplot-stub needs --output and CSV format".into()));
    }
    let report = commands::execute(cli.command, &config)?;
    let text = match config.format() {
        Format::Csv => report.table.to_csv(),
        Format::Json => {
            let runtime = (!config.reproducible).then(|| start.elapsed().as_secs_f64());
            output::render_json(cli.command, &config, &report, runtime)
        }
    };
    match &config.output {
        Some(path) => {
            output::write_atomic(path, &text)?;
            if config.gnuplot_stub {
                let script = output::gnuplot_stub(path, &report.table);
                output::write_atomic(&path.with_extension("gp"), &script)?;
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}
