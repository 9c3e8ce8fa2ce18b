//! Run named scenarios from an in-memory configuration and write their CSV
//! tables, as the `sqfock run` command does.
//!
//! cargo run --release --example scenarios -- /tmp/sqfock-out

use sqfock::experiment::{self, ScenarioConfig};

const CONFIG: &str = r#"
[protocol.fig1c]
r_points = 61

[sweep]
observables = ["alpha_over_gamma", "delta_k_ratio"]

[[sweep.axes]]
variable = "r"
min = 0.0
max = 2.0
points = 5
"#;

fn main() -> sqfock::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "sqfock-out".into());
    let cfg = ScenarioConfig::from_toml(CONFIG)?;
    println!("config sha256 {}", cfg.hash());
    let workers = experiment::worker_count()?;
    for name in ["fig1c", "fig3c", "feasibility", "sweep"] {
        let result = experiment::run(name, &cfg, workers)?;
        for path in result.write(std::path::Path::new(&out), &cfg)? {
            println!("wrote {}", path.display());
        }
        for check in &result.checks {
            println!("  {}", check.line());
        }
    }
    Ok(())
}
