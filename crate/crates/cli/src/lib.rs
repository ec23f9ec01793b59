//! Command-line front end for the `tricolor` experiments.
//!
//! Every run emits one JSON [`record::ResultRecord`]. The binary is a thin
//! wrapper over [`run_cli`].

pub mod args;
pub mod mesh;
pub mod record;
pub mod run;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

use args::{expand_config, Cli};
use record::{Metrics, ResultRecord, Status};

/// Parses `argv`, runs the command and writes the record. Returns the
/// process exit code.
pub fn run_cli(argv: Vec<OsString>) -> i32 {
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build();
    let (outcome, threads) = match pool {
        Ok(pool) => (
            pool.install(|| run::dispatch(&cli)),
            pool.current_num_threads(),
        ),
        Err(e) => (Err(e.into()), 0),
    };
    let outcome = outcome.map_err(|e| format!("{e:#}"));
    let metrics = Metrics {
        wall_seconds: started.elapsed().as_secs_f64(),
        threads,
        steps: None,
    };
    let record = ResultRecord::new(cli.clone(), outcome, metrics);
    let mut text = serde_json::to_string_pretty(&record).expect("records serialize");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write result record: {e}");
        return 1;
    }
    match record.status {
        Status::Ok => 0,
        Status::Error => {
            eprintln!("error: {}", record.error.as_deref().unwrap_or_default());
            1
        }
    }
}
