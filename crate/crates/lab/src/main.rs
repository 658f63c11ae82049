use std::path::PathBuf;
use std::process::ExitCode;

use ainv_lab::config::{resolve, ConfigFile, FlagOverrides};
use ainv_lab::runner::{exit_status, run_all};
use ainv_lab::Scenario;
use clap::Parser;

const CONFIG_ERROR: u8 = 2;

/// Runs approximate-identity and approximate-inverse experiments and
/// writes CSV reports.
#[derive(Debug, Parser)]
#[command(name = "ainv-lab", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Scenario to run; repeat to select several. Defaults to all.
    #[arg(long = "scenario", value_name = "NAME")]
    scenarios: Vec<String>,
    /// Base seed; each scenario mixes in a hash of its name.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print the scenario registry and exit.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for s in Scenario::ALL {
            println!("{:<16} {:<60} {}", s.name(), s.anchors().join(" "), s.description());
        }
        return ExitCode::SUCCESS;
    }
    let file = match cli.config.as_deref().map(ConfigFile::load).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let flags = FlagOverrides {
        seed: cli.seed,
        out: cli.out,
        scenarios: cli.scenarios,
    };
    let configs = match resolve(&file, &flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let summaries = match run_all(&configs) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot write reports: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    for s in &summaries {
        let status = if s.passed() { "pass" } else { "FAIL" };
        println!(
            "{status}  {:<16} {:>6} rows  {:>10.1} ms",
            s.scenario, s.rows, s.elapsed_ms
        );
        if let Some(e) = &s.error {
            println!("      error: {e}");
        }
        for f in s.failures.iter().take(5) {
            println!("      {f}");
        }
        if s.failures.len() > 5 {
            println!("      ... {} more", s.failures.len() - 5);
        }
    }
    ExitCode::from(exit_status(&summaries))
}
