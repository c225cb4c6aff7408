//! Front end for markoff-core: argument handling, report documents and atomic persistence.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::Cli;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Usage,
    Verdict,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Usage => 1,
            Status::Verdict => 2,
        }
    }
}

/// Parses `argv`, runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Status::Usage.code()
            } else {
                Status::Ok.code()
            };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match commands::dispatch(cli.command, &mut out) {
        Ok(status) => {
            let _ = out.flush();
            status.code()
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            Status::Usage.code()
        }
    }
}
