use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use ahmass::cli_reporting::{run, Command, ConfigFile, Format, RunConfig, EXIT_ERROR};
use ahmass::{Error, Result};
use clap::Parser;

/// Mass, flux identities and Penrose-type bounds for graphs in hyperbolic space.
#[derive(Parser, Debug)]
#[command(name = "ahmass", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; falls back to AHMASS_THREADS, then the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Record wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

fn threads(cli: &Cli) -> Result<usize> {
    if let Some(t) = cli.threads {
        return Ok(t);
    }
    match std::env::var("AHMASS_THREADS") {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("AHMASS_THREADS={v} is not a count"))),
        Err(_) => Ok(0),
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let mut file = ConfigFile::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        file.seed = seed;
    }
    let format = cli.format.unwrap_or(file.output.format);
    let out = cli.out.clone().or_else(|| file.output.path.as_ref().map(PathBuf::from));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads(cli)?)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let cfg = RunConfig { command: cli.command, file, timings: cli.timings };
    let outcome = pool.install(|| run(&cfg))?;
    let text = match format {
        Format::Json => outcome.report.to_json(),
        Format::Csv => outcome.report.to_csv()?,
    };
    match out {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(Error::Io(e.to_string())),
                _ => {}
            }
        }
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let msg = serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } });
            eprintln!("{msg}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
