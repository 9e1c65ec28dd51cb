//! `corners`: classify map germs, build fibre products, check orientation
//! signs and run the seeded verification suites.

mod commands;
mod input;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Report;
use corners::suites::SuiteOptions;
use input::{read_input, CliError, CliResult};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "corners", version, about = "Exact computations with map germs between corner models")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a polynomial map at the origin.
    Classify { input: Option<PathBuf> },
    /// Properties of a map germ: submersion tests, boundary data, lifts.
    Germ { input: Option<PathBuf> },
    /// Compose `{"f": .., "g": ..}` as g o f.
    Compose { input: Option<PathBuf> },
    /// Strata counts of a model, or the induced maps on corners of a germ.
    Corners { input: Option<PathBuf> },
    /// Transversality, the fibre product and its boundary for `{"f": .., "g": ..}`.
    Fibre { input: Option<PathBuf> },
    /// Orientation of a fibre product, or a sign identity instance.
    Orient { input: Option<PathBuf> },
    /// Classify a glued complex.
    Complex {
        input: Option<PathBuf>,
        /// Use a built-in complex instead of reading one.
        #[arg(long)]
        corpus: Option<String>,
        /// Print the complex itself as JSON.
        #[arg(long)]
        dump: bool,
    },
    /// Run seeded verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
}

fn run(cli: &Cli) -> CliResult<Report> {
    let read = |p: &Option<PathBuf>| read_input(p.as_deref());
    match &cli.command {
        Command::Classify { input } => commands::classify(&read(input)?),
        Command::Germ { input } => commands::germ(&read(input)?),
        Command::Compose { input } => commands::compose_cmd(&read(input)?),
        Command::Corners { input } => commands::corners(&read(input)?),
        Command::Fibre { input } => commands::fibre(&read(input)?),
        Command::Orient { input } => commands::orient(&read(input)?),
        Command::Complex { input, corpus, dump } => {
            let text = if corpus.is_some() { None } else { Some(read(input)?) };
            commands::complex(text.as_deref(), corpus.as_deref(), *dump)
        }
        Command::Verify { suite, seed, cases, max_dim } => {
            commands::verify(suite, SuiteOptions { seed: *seed, cases: *cases, max_dim: *max_dim })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text.join("\n"),
                Format::Json => serde_json::to_string_pretty(&report.json).expect("json"),
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(report.exit as u8)
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("{e}"),
                Format::Json => {
                    let kind = if matches!(e, CliError::Input(_)) { "input" } else { "verdict" };
                    println!("{}", serde_json::json!({"error": e.to_string(), "kind": kind}));
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
