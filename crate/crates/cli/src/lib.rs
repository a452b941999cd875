//! Command-line front end for `markovrec`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use cli::Cli;
pub use commands::{Context, ExperimentConfig, Outcome};
pub use error::{CliError, CliResult};
pub use format::OperatorFile;
pub use report::Report;

pub fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    use cli::Command;
    let ctx = Context::from_args(&cli.global)?;
    match &cli.command {
        Command::Check { first, second } => commands::check(&ctx, first, second),
        Command::Recover {
            first,
            second,
            t,
            method,
        } => commands::recover(&ctx, first, second, *t, *method),
        Command::Select { files } => commands::select(&ctx, files),
        Command::Tree { input, method } => commands::tree(&ctx, input, *method),
        Command::Diagram {
            first,
            second,
            tol_diagram,
        } => commands::diagram(&ctx, first, second, *tol_diagram),
        Command::Counterexample(args) => commands::counterexample(&ctx, args),
        Command::Sample(args) => commands::sample(&ctx, args),
    }
}

/// Runs the command and writes its outputs. An operator goes to
/// `--output` (report on stdout) or to stdout (report on stderr); a
/// report alone goes to `--output` or stdout.
pub fn run(cli: &Cli) -> CliResult<i32> {
    let outcome = dispatch(cli)?;
    let text = outcome.report.render(cli.global.json);
    let mut stderr = std::io::stderr();
    for w in outcome.report.warnings() {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let console = |out: &mut std::io::StdoutLock, s: &str| {
        let _ = out.write_all(s.as_bytes());
    };
    match (&outcome.operator, &cli.global.output) {
        (Some(op), Some(path)) => {
            op.write(path)?;
            console(&mut out, &text);
        }
        (Some(op), None) => {
            console(&mut out, &op.to_json());
            let _ = stderr.write_all(text.as_bytes());
        }
        (None, Some(path)) => std::fs::write(path, &text).map_err(|e| CliError::io(path, e))?,
        (None, None) => console(&mut out, &text),
    }
    Ok(outcome.code)
}

/// Exit status for the given arguments: 0 success, 1 negative verdict,
/// 2 usage or input error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
