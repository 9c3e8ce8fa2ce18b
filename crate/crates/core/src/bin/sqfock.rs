use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sqfock::experiment::{self, ScenarioConfig};
use sqfock::model::{self, DEFAULT_RWA_THRESHOLD};
use sqfock::Error;

#[derive(Parser)]
#[command(name = "sqfock", version, about = "Squeezed Fock qubit simulations and sensing scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV tables and field files.
    Run {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a configuration file and print the RWA report of its model.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the available scenarios.
    ListScenarios,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::ListScenarios => {
            for (name, about) in experiment::SCENARIOS {
                println!("{name:<12} {about}");
            }
        }
        Command::Validate { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let rwa = model::rwa_report(&cfg.model, DEFAULT_RWA_THRESHOLD)?;
            let eff = model::effective_params(&cfg.model)?;
            println!("config ok, sha256 {}", cfg.hash());
            println!("r = {:.6}, omega_b = {:.6e} rad/s, alpha = {:.6e} rad/s, Gamma = {:.6e} rad/s", eff.r, eff.omega_b, eff.alpha, eff.big_gamma);
            for (k, ratio) in rwa.ratios.iter().enumerate() {
                println!("rwa ratio {}: {ratio:.6e}", k + 1);
            }
            println!("rwa {} (threshold {})", if rwa.all_pass() { "pass" } else { "fail" }, rwa.threshold);
        }
        Command::Run { scenario, config, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let name = cfg.resolve_scenario(Some(&scenario))?;
            let workers = experiment::worker_count()?;
            let output = experiment::run(&name, &cfg, workers)?;
            for path in output.write(&out, &cfg)? {
                println!("wrote {}", path.display());
            }
            for check in &output.checks {
                println!("{}", check.line());
            }
        }
    }
    Ok(())
}
