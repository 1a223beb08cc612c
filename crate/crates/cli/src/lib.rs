//! Command-line front end: single-geometry simulation, visibility sweeps,
//! invariance runs and the three-mode search.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage error, 3 I/O error,
//! 4 property failure.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

mod commands;
mod error;
mod manifest;
mod params;
mod svg;

pub use commands::{
    Cli, Command, InvarianceArgs, InvarianceMode, Search3Args, SimulateArgs, SweepArgs,
};
pub use error::CliError;
pub use manifest::{strip_timestamp, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match params::expand(args) {
        Ok(a) => a,
        Err(e) => return report(e, err),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match commands::dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => report(e, err),
    }
}

fn report(e: CliError, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {e}");
    e.exit_code()
}
