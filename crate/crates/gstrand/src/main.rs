use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gstrand::{convergence_study, run_scenario, scenarios, HarnessError, ScenarioConfig};

/// `println!` that stops quietly when stdout is closed.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "gstrand",
    version,
    about = "Integrate G-strand scenarios and check their diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its CSV files and report.json.
    Run {
        #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
        config: Option<PathBuf>,
        /// Use a built-in scenario instead of a config file.
        #[arg(long)]
        scenario: Option<String>,
        /// Output directory; overrides output.directory in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refine (Δs, Δt) jointly and print observed orders as JSON.
    Converge {
        #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
        config: Option<PathBuf>,
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 3)]
        levels: u32,
    },
    /// List built-in scenarios.
    ListScenarios,
    /// Print a built-in scenario as a config file.
    ShowScenario { name: String },
}

fn load(config: Option<PathBuf>, scenario: Option<String>) -> Result<ScenarioConfig, HarnessError> {
    match (config, scenario) {
        (Some(path), _) => ScenarioConfig::load(&path),
        (None, Some(name)) => scenarios::find(&name)
            .map(|s| s.config())
            .ok_or_else(|| HarnessError::Validation(format!("unknown scenario {name}"))),
        (None, None) => Err(HarnessError::Validation("pass --config or --scenario".into())),
    }
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run {
            config,
            scenario,
            out,
        } => {
            let cfg = load(config, scenario)?;
            let report = match run_scenario(&cfg, out.as_deref()) {
                Ok(r) => r,
                Err(HarnessError::Runtime { time, source, report }) => {
                    out!(
                        "{}",
                        serde_json::to_string_pretty(&report).expect("report serializes")
                    );
                    return Err(HarnessError::Runtime { time, source, report });
                }
                Err(e) => return Err(e),
            };
            out!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        Command::Converge {
            config,
            scenario,
            levels,
        } => {
            let cfg = load(config, scenario)?;
            let table = convergence_study(&cfg, levels)?;
            let text = serde_json::to_string_pretty(&table).expect("table serializes");
            if let Some(dir) = &cfg.output.directory {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("convergence.json"), format!("{text}\n"))?;
            }
            out!("{text}");
        }
        Command::ListScenarios => {
            for s in scenarios::registry() {
                out!("{:<28} {}", s.name, s.description);
            }
        }
        Command::ShowScenario { name } => {
            let s = scenarios::find(&name)
                .ok_or_else(|| HarnessError::Validation(format!("unknown scenario {name}")))?;
            out!("{}", s.config().to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gstrand: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
