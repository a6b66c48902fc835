//! Library side of the `ghtensor` command-line tool.
//!
//! Exit codes: 0 success, 1 a checked bound or sign claim failed,
//! 2 invalid parameters, 3 unreadable or malformed input files.

pub mod config;
pub mod error;
pub mod input;
pub mod render;
pub mod run;

use std::ffi::OsString;

use clap::Parser;

pub use config::{Cli, Command, OutputFormat, RunConfig};
pub use error::CliError;
pub use input::parse_vector_file;
pub use run::{run, Payload, ResultRecord};

/// Output of one invocation: what to print and how to exit.
#[derive(Debug)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Parses raw arguments, runs, and renders.
pub fn invoke(args: Vec<OsString>) -> Invocation {
    let fail = |e: CliError| Invocation {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: e.exit_code(),
    };
    let args = match config::expand_config(args) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = u8::try_from(e.exit_code()).unwrap_or(2);
            return if e.use_stderr() {
                Invocation {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Invocation {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match run(&config) {
        Ok(record) => Invocation {
            stdout: render::render(&record, config.format),
            stderr: String::new(),
            code: record.exit_code(),
        },
        Err(e) => fail(e),
    }
}
