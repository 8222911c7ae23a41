use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spectral_enclosure::harness::{self, config, ExperimentConfig, RunOptions, Status, OUT_ENV};

#[derive(Parser)]
#[command(name = "specenc", version, about = "Spectral enclosure experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for this run (default: $SPECENC_OUT/<name>)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the experiment seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Treat inapplicable verdicts, digest mismatches and unstable pooled fits as violations
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, env = OUT_ENV, default_value = "specenc-out", hide = true)]
    root: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file
    Run { config: PathBuf },
    /// Re-render the plot of a finished run
    Plot { manifest: PathBuf },
    /// Pool the enclosure constants of several runs
    Fit {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> spectral_enclosure::Result<u8> {
    match &cli.command {
        Command::Run { config: path } => {
            let mut cfg = ExperimentConfig::from_file(path)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            if let Some(out) = &cli.out {
                cfg.output_dir = out.display().to_string();
            }
            eprintln!("{}", config::describe(&cfg));
            let opts = RunOptions {
                root: cli.root.clone(),
                strict: cli.strict,
            };
            let outcome = harness::run(&cfg, &opts)?;
            for (k, v) in &outcome.manifest.summary {
                println!("{k} = {v}");
            }
            println!("status = {}", outcome.status.as_str());
            println!("manifest = {}", outcome.dir.join("manifest.txt").display());
            Ok(outcome.status.exit_code() as u8)
        }
        Command::Plot { manifest } => {
            let (path, same) = harness::replot(manifest)?;
            println!("wrote {}", path.display());
            match same {
                Some(false) => {
                    println!("plot differs from the recorded digest");
                    Ok(if cli.strict { Status::Violation.exit_code() as u8 } else { 0 })
                }
                _ => Ok(0),
            }
        }
        Command::Fit { manifests } => {
            let pooled = harness::pooled_fit(manifests)?;
            for (name, c) in &pooled.runs {
                println!("{name}\t{c}");
            }
            println!("c_emp = {}", pooled.c_emp);
            println!("variation = {}", pooled.variation);
            let tol = harness::Manifest::read(&manifests[0])?.config()?.tolerance.variation;
            Ok(if cli.strict && pooled.variation >= tol { Status::Violation.exit_code() as u8 } else { 0 })
        }
    }
}
