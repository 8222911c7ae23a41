//! Runs an experiment config through the harness, as the CLI does.
//!
//! `cargo run --example run_config -- configs/region_alpha5.cfg`

use spectral_enclosure::harness::{run, ExperimentConfig, RunOptions};

fn main() -> spectral_enclosure::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "configs/shift_torus1.cfg".into());
    let cfg = ExperimentConfig::from_file(path.as_ref())?;
    let outcome = run(&cfg, &RunOptions::default())?;
    print!("{}", outcome.manifest.render());
    std::process::exit(outcome.status.exit_code());
}
