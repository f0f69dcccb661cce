use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use resolab_cli::{report_to_string, run, save_report, Config};

#[derive(Parser)]
#[command(name = "resolab", version, about = "Verify resolvability experiments on finite partition families")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute the commands listed in a TOML config and write a JSON report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Report path; the report goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for parallel scans.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let Cmd::Run { config, out, seed, jobs } = Cli::parse().command;
    if let Some(jobs) = jobs {
        if jobs == 0 {
            eprintln!("resolab: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let outcome = match Config::load(&config).and_then(|c| run(&c, seed)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("resolab: {e}");
            return ExitCode::from(2);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = save_report(&path, &outcome.report) {
                eprintln!("resolab: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report_to_string(&outcome.report)),
    }
    for r in outcome.report["results"].as_array().into_iter().flatten() {
        if r["status"] != "pass" {
            eprintln!("resolab: {} {}", r["command"].as_str().unwrap_or("?"), r["status"].as_str().unwrap_or("?"));
        }
    }
    ExitCode::from(outcome.exit_code)
}
