//! Command-line front end for the `qcap` library: channel files, report
//! formatting and the subcommand implementations.

pub mod commands;
pub mod error;
pub mod qch;
pub mod report;

use std::io::Write;

use commands::{Cli, Format, Output};
pub use error::CliError;

/// Exit status: 0 converged, 2 stopped on a round limit, 1 error.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let start = std::time::Instant::now();
    let mut output = commands::run(cli)?;
    if let Output::Report(r) = &mut output {
        r.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let format = cli.common.format.unwrap_or_else(|| match &cli.common.out {
        Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
        _ => Format::Text,
    });
    let mut sink: Box<dyn Write> = match &cli.common.out {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| CliError::Io(p.display().to_string(), e))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    let io = |e| CliError::Io("output".into(), e);
    match (&output, format) {
        (Output::Report(r), Format::Text) => r.write_text(&mut sink).map_err(io)?,
        (Output::Report(r), Format::Csv) => r.write_csv(&mut sink)?,
        (Output::Table(t), Format::Text) => t.write_text(&mut sink).map_err(io)?,
        (Output::Table(t), Format::Csv) => t.write_csv(&mut sink)?,
    }
    sink.flush().map_err(io)?;
    Ok(if output.converged() { 0 } else { 2 })
}
