use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lwfr::driver::{check_mesh, convergence_study, run_simulation, RunConfig};
use lwfr::LwfrError;

#[derive(Parser)]
#[command(name = "lwfr", version, about = "Lax-Wendroff flux reconstruction solver")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation.
    Solve {
        config: PathBuf,
        /// Output directory, overrides `[output] directory`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write steps.log.
        #[arg(long)]
        log_steps: bool,
    },
    /// Convergence study over resolutions and degrees, written to eoc.csv.
    Eoc {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        nx: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        degrees: Vec<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print the metric-identity residual and the minimum Jacobian.
    CheckMesh { config: PathBuf },
}

fn run(cli: Cli) -> Result<(), LwfrError> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| LwfrError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Solve { config, out, log_steps } => {
            let mut cfg = RunConfig::from_file(&config)?;
            if out.is_some() {
                cfg.output.directory = out;
            }
            cfg.output.log_steps |= log_steps;
            let r = run_simulation(&cfg)?;
            println!(
                "t = {} accepted = {} rejected = {}",
                r.stats.final_time, r.stats.accepted, r.stats.rejected
            );
            if let Some(e) = r.error {
                let list: Vec<String> = e.iter().map(|v| format!("{v:.6e}")).collect();
                println!("l2 error = {}", list.join(" "));
            }
        }
        Command::Eoc { config, nx, degrees, out } => {
            let cfg = RunConfig::from_file(&config)?;
            let report = convergence_study(&cfg, &nx, &degrees, |r| match (&r.error, &r.failure) {
                (Some(e), _) => println!(
                    "N={} nx={} l2={e:.6e} eoc={}",
                    r.degree,
                    r.nx,
                    r.eoc.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into())
                ),
                (None, f) => println!("N={} nx={} failed: {}", r.degree, r.nx, f.as_deref().unwrap_or("")),
            })?;
            std::fs::create_dir_all(&out)?;
            report.write_csv(File::create(out.join("eoc.csv"))?)?;
            if report.rows.iter().any(|r| r.error.is_none()) {
                return Err(LwfrError::StepControl("some runs of the study failed".into()));
            }
        }
        Command::CheckMesh { config } => {
            let cfg = RunConfig::from_file(&config)?;
            let (residual, min_j) = check_mesh(&cfg)?;
            println!("metric identity residual = {residual:.3e}");
            println!("min jacobian = {min_j:.6e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
