//! Command-line pipelines over `gec-xform-core`: dictionary induction,
//! label encoding and decoding, scoring, oracle analysis and synthetic
//! corruption. Every output file gets a `<name>.manifest.json` recording
//! flags, seeds and input digests.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;

use args::{Cli, Command};
pub use error::{CliError, Result};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "GEC_XFORM_THREADS";

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(format!("cannot start worker threads: {e}")))
}

pub fn run(cli: &Cli) -> Result<()> {
    thread_pool()?.install(|| match &cli.command {
        Command::Induce(a) => commands::induce(a),
        Command::Encode(a) => commands::encode_cmd(a),
        Command::Apply(a) => commands::apply(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Corrupt(a) => commands::corrupt(a),
    })
}
