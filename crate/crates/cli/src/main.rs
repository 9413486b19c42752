use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "logsync", version, about = "Contraction certificates and synchronization runs for coupled systems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario and write its reports and CSVs.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and resolve a scenario without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Run { config, out, seed } => logsync_cli::run_config(config, out.as_deref(), *seed).map(|(dir, files)| {
            for f in files {
                println!("{}", dir.join(f).display());
            }
        }),
        Cmd::Validate { config } => logsync_cli::load(config, None).map(|sc| println!("ok: {}", sc.command)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
