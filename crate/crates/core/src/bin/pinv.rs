use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use pinv::cli::{self, CliError, Command, Format, EXIT_INPUT};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    /// Run the commands listed in the document
    Run,
    Invariants,
    Compute,
    Wallcheck,
    Components,
    BasicClasses,
    Blowup,
    Snf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Table,
    Json,
}

/// Exact Poincaré invariants of algebraic surfaces.
#[derive(Debug, Parser)]
#[command(name = "pinv", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Request document or bare surface descriptor (JSON)
    #[arg(long)]
    surface: PathBuf,
    /// Class index into the document's "classes", or an inline JSON class
    #[arg(long)]
    class: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: OutFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<String, CliError> {
    let text = fs::read_to_string(&args.surface).map_err(|e| CliError::Input {
        location: String::new(),
        message: format!("cannot read {}: {e}", args.surface.display()),
    })?;
    let command = match args.command {
        Cmd::Run => None,
        Cmd::Invariants => Some(Command::Invariants),
        Cmd::Compute => Some(Command::Compute),
        Cmd::Wallcheck => Some(Command::Wallcheck),
        Cmd::Components => Some(Command::Components),
        Cmd::BasicClasses => Some(Command::BasicClasses),
        Cmd::Blowup => Some(Command::Blowup),
        Cmd::Snf => Some(Command::Snf),
    };
    let req = cli::request_from_file(&text, command, args.class.as_deref())?;
    let report = cli::run(&req)?;
    let format = match args.format {
        OutFormat::Table => Format::Table,
        OutFormat::Json => Format::Json,
    };
    Ok(report.render(format))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(text) => match &args.out {
            Some(path) => match fs::write(path, text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("pinv: cannot write {}: {e}", path.display());
                    ExitCode::from(EXIT_INPUT as u8)
                }
            },
            None => {
                print!("{text}");
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            eprintln!("pinv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
