mod args;
mod commands;
mod config;
mod error;
mod output;

use args::Cli;
use clap::{CommandFactory, Parser};
use error::{usage, CliError};
use output::{Emitter, Manifest};
use std::ffi::OsString;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

fn parse(argv: &[OsString]) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(argv).map_err(|e| {
        let _ = e.print();
        ExitCode::from(e.exit_code() as u8)
    })
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Compute(format!("thread pool: {e}")))?;
    }
    commands::validate(&cli.command)?;
    let name = cli.command.name();
    let output = cli.command.output();
    let mut emitter = Emitter::new(output.out.as_deref(), name, output.format);
    for line in commands::run(&cli.command, &mut emitter)? {
        println!("{line}");
    }
    let manifest_path = emitter.sibling(".manifest.json");
    let manifest = Manifest {
        command: name,
        params: &cli.command,
        seed: cli.command.seed(),
        threads: cli.threads,
        config: cli.config.as_deref(),
        versions: serde_json::json!({ "rsl-cli": env!("CARGO_PKG_VERSION"), "rsl-core": rsl_core::VERSION }),
        outputs: emitter.written.iter().map(|p| p.display().to_string()).collect(),
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Compute(e.to_string()))?;
    text.push('\n');
    emitter.write_text(manifest_path, &text)
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let mut cli = match parse(&argv) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if let Some(path) = cli.config.clone() {
        let merged = std::fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))
            .and_then(|text| config::parse(&text))
            .and_then(|entries| config::merge(&argv, &entries, &Cli::command()));
        match merged {
            Ok(m) => match parse(&m) {
                Ok(c) => cli = c,
                Err(code) => return code,
            },
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
