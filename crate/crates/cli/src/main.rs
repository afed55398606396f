use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;
use shlr_cli::dsl::build::Overrides;
use shlr_cli::report::render_text;
use shlr_cli::{run, Command, CommandError, Selection};
use shlr_core::DegreeWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

/// Exact computations on strong-homotopy Lie–Rinehart pairs and their
/// Chevalley–Eilenberg algebras.
#[derive(Debug, Parser)]
#[command(name = "shlr", version)]
struct Cli {
    /// check-d2, ce, extract-brackets, linear-part, cohomology, weq,
    /// coproduct, pushout, cylinder, dualize or lift.
    #[arg(value_parser = parse_command)]
    command: Command,
    /// Model file.
    file: PathBuf,
    /// Object to act on (default: first cdga, else module, else algebra).
    #[arg(long, env = "SHLR_OBJECT")]
    object: Option<String>,
    /// Second operand: right summand of a coproduct, cofibration of a pushout.
    #[arg(long, env = "SHLR_WITH")]
    with: Option<String>,
    /// Morphism to act on (default: the first one declared).
    #[arg(long, env = "SHLR_MORPHISM")]
    morphism: Option<String>,
    #[arg(long, env = "SHLR_WEIGHT_CUTOFF")]
    weight_cutoff: Option<u32>,
    /// Inclusive degree window, `LO:HI`.
    #[arg(long, env = "SHLR_DEGREE_WINDOW", value_parser = parse_window, allow_hyphen_values = true)]
    degree_window: Option<DegreeWindow>,
    #[arg(long, env = "SHLR_SEED")]
    seed: Option<u64>,
    /// Cap on the number of base factors in searched monomials.
    #[arg(long, env = "SHLR_MAX_LEN")]
    max_len: Option<u32>,
    #[arg(long, env = "SHLR_OUTPUT", value_enum, default_value = "text")]
    output: Output,
    /// Include wall-clock time in the report (breaks byte-identical output).
    #[arg(long, env = "SHLR_TIMING")]
    timing: bool,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse()
}

fn parse_window(s: &str) -> Result<DegreeWindow, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: i32 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i32 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    DegreeWindow::new(lo, hi).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = cli
        .file
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let sel = Selection {
        object: cli.object,
        with: cli.with,
        morphism: cli.morphism,
    };
    let overrides = Overrides {
        weight_cutoff: cli.weight_cutoff,
        window: cli.degree_window,
        seed: cli.seed,
        max_len: cli.max_len,
    };
    let outcome = std::fs::read_to_string(&cli.file)
        .map_err(|e| CommandError::Usage(format!("cannot read {}: {e}", cli.file.display())))
        .and_then(|src| run(cli.command, &file, &src, &sel, &overrides, cli.timing));
    let (value, code) = match outcome {
        Ok(r) => (r.to_json(), r.exit_code()),
        Err(e) => {
            eprintln!("shlr: {e}");
            let v = json!({
                "schema": 1,
                "command": cli.command.name(),
                "file": file,
                "error": e.to_json(),
            });
            (v, e.exit_code())
        }
    };
    match cli.output {
        Output::Json => println!("{}", serde_json::to_string_pretty(&value).expect("reports serialize")),
        Output::Text => print!("{}", render_text(&value)),
    }
    ExitCode::from(code as u8)
}
