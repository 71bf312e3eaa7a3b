//! Command-line front end for the q-deformed Bose gas: z-plane and
//! complex-temperature zero searches, correlator sweeps, oracle checks, and
//! the CSV/JSON/SVG artifacts they produce.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod suite;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use error::{CliError, CliResult};

use cli::{Cli, Command};
use commands::Report;
use config::RunConfig;

/// Parse arguments, run one subcommand, and return the process exit status.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            for line in &report.summary {
                let _ = writeln!(stdout, "{line}");
            }
            for f in &report.files {
                let _ = writeln!(stdout, "wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "qgas: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let mut cfg = match &cli.common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.apply(&mut cfg);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.output.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::ZerosPoly { .. } => commands::zeros_poly(&cfg),
        Command::ZerosBeta { .. } => commands::zeros_beta(&cfg),
        Command::Correlator { .. } => commands::correlator(&cfg),
        Command::OracleCheck { .. } => commands::oracle_check(&cfg),
        Command::Figure1 => commands::figure1(&cfg),
        Command::Plot { input, output } => commands::plot(input, output.as_deref()),
    })
}
