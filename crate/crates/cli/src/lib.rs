//! Command-line frontend: the model-file language, command dispatch and
//! canonical JSON reports.

pub mod commands;
pub mod dsl;
pub mod report;

use std::time::Instant;

pub use commands::{run_command, Command, CommandError, Selection};
pub use report::Report;

/// Parse, resolve and run one command on a model file's text.
pub fn run(
    cmd: Command,
    file: &str,
    src: &str,
    sel: &Selection,
    overrides: &dsl::build::Overrides,
    timing: bool,
) -> Result<Report, CommandError> {
    let start = Instant::now();
    let ast = dsl::parse_model(src)?;
    let model = dsl::build_model(&ast, overrides)?;
    let (verdicts, result) = run_command(cmd, &model, sel)?;
    Ok(Report {
        command: cmd.name().to_string(),
        file: file.to_string(),
        model: dsl::print_model(&ast),
        config: model.config,
        verdicts,
        result,
        timing_ms: timing.then(|| start.elapsed().as_millis()),
    })
}
