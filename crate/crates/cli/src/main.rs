use std::process::ExitCode;

use clap::Parser;

use platesoil_cli::error::CliError;
use platesoil_cli::output::write_atomic;
use platesoil_cli::{execute, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(dir) => {
            let doc = serde_json::json!({
                "status": "ok",
                "manifest": dir.join(platesoil_cli::manifest::MANIFEST_NAME),
            });
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let report = e.report();
            println!("{report}");
            if let Some(dir) = &cli.global.out {
                // Best effort; the report is already on stdout.
                let _ = write_atomic(&dir.join("error.json"), report.as_bytes());
            }
            match e {
                CliError::Config { .. } | CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
