//! Argument parsing, config resolution, dispatch, exit codes.
//!
//! Exit codes: 0 success, 2 validation/usage error, 3 resource-cap error,
//! 4 failing acceptance criterion, 1 internal error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::{self, Config};
use crate::runners;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Resource(String),
    Criteria(String),
    Internal(anyhow::Error),
}

impl From<pathsum::Error> for CliError {
    fn from(err: pathsum::Error) -> Self {
        if err.is_resource_cap() {
            CliError::Resource(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        CliError::Internal(err)
    }
}

const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "pathsum",
    version,
    about = "Path-sum propagators, winding decompositions, and Bell/GHZ experiments"
)]
struct Cli {
    /// Output directory for artifacts and run manifests.
    #[arg(long, global = true, default_value = "pathsum-out")]
    out_dir: PathBuf,

    /// JSON config file (a previously written run manifest also works).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed override (default: config file, then PATHSUM_SEED, then 42).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap the worker-thread count; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Interpret angle-valued command-line flags as degrees.
    #[arg(long, global = true)]
    degrees: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mirror-reflection amplitude and its Cornu-spiral trace.
    Cornu {
        #[arg(long)]
        n_points: Option<usize>,
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        t_total: Option<f64>,
    },
    /// Time-sliced free propagator against the closed-form kernel.
    Free {
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        t_total: Option<f64>,
        #[arg(long)]
        n_slices: Option<usize>,
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        half_width: Option<f64>,
    },
    /// Ring propagator: winding sum vs spectral sum.
    Ring {
        #[arg(long)]
        moment: Option<f64>,
        #[arg(long)]
        t_total: Option<f64>,
        #[arg(long)]
        n_cutoff: Option<usize>,
        #[arg(long)]
        m_cutoff: Option<usize>,
        #[arg(long)]
        damping: Option<f64>,
    },
    /// Two-particle coincidence curve over an α grid.
    Interferometer {
        /// Number of α samples over [0, 2π).
        #[arg(long)]
        alpha_grid: Option<usize>,
        /// Fixed β shifter (radians unless --degrees).
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Entangled ring pair factorization diagnostics.
    Rings {
        #[arg(long)]
        p_min: Option<i64>,
        #[arg(long)]
        p_max: Option<i64>,
        #[arg(long)]
        n_cutoff: Option<usize>,
    },
    /// Singlet correlation curve E(α, β).
    Spin {
        #[arg(long)]
        grid: Option<usize>,
        /// Fixed β analyzer angle (radians unless --degrees).
        #[arg(long)]
        beta: Option<f64>,
    },
    /// CHSH quantum value vs the exhaustive LHV bound.
    Chsh,
    /// GHZ products and the Mermin assignment enumeration.
    Ghz,
    /// Event-level Monte Carlo stream.
    Stream {
        /// two-detector, interferometer, or ring-momentum.
        #[arg(long)]
        experiment: Option<String>,
        #[arg(long)]
        n_trials: Option<u64>,
        /// Left shifter for the interferometer experiment.
        #[arg(long)]
        alpha: Option<f64>,
        /// Right shifter for the interferometer experiment.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        momentum: Option<i64>,
        #[arg(long)]
        shadow_paths: Option<usize>,
    },
    /// Run every acceptance criterion and emit a pass/fail summary.
    Suite,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    experiment: String,
    tool_version: String,
    seed: u64,
    /// Fully resolved configuration; pass this manifest back via --config to
    /// reproduce the run.
    config: serde_json::Value,
    outputs: Vec<String>,
    duration_seconds: f64,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Criteria(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(CliError::Internal(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        // Results are chunk-reduced deterministically, so the pool size only
        // affects speed. Ignore the error if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }

    let mut config = match &cli.config {
        Some(path) => config::load(path).map_err(|e| CliError::Validation(format!("{e:#}")))?,
        None => Config::default(),
    };
    let seed = cli
        .seed
        .or(config.seed)
        .or_else(|| {
            std::env::var("PATHSUM_SEED")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_SEED);
    config.seed = Some(seed);

    std::fs::create_dir_all(&cli.out_dir)
        .map_err(|e| CliError::Internal(anyhow::anyhow!("creating out dir: {e}")))?;

    let angle = |v: f64| if cli.degrees { v.to_radians() } else { v };
    let started = Instant::now();

    let (name, outputs) = match &cli.command {
        Command::Cornu {
            n_points,
            mass,
            t_total,
        } => {
            let section = &mut config.cornu;
            overlay(&mut section.n_points, *n_points);
            overlay(&mut section.mass, *mass);
            overlay(&mut section.t_total, *t_total);
            ("cornu", runners::cornu(section, &cli.out_dir)?)
        }
        Command::Free {
            mass,
            t_total,
            n_slices,
            sites,
            half_width,
        } => {
            let section = &mut config.free;
            overlay(&mut section.mass, *mass);
            overlay(&mut section.t_total, *t_total);
            overlay(&mut section.n_slices, *n_slices);
            overlay(&mut section.sites, *sites);
            overlay(&mut section.half_width, *half_width);
            ("free", runners::free(section, &cli.out_dir)?)
        }
        Command::Ring {
            moment,
            t_total,
            n_cutoff,
            m_cutoff,
            damping,
        } => {
            let section = &mut config.ring;
            overlay(&mut section.moment, *moment);
            overlay(&mut section.t_total, *t_total);
            overlay(&mut section.n_cutoff, *n_cutoff);
            overlay(&mut section.m_cutoff, *m_cutoff);
            overlay(&mut section.damping, *damping);
            ("ring", runners::ring(section, &cli.out_dir)?)
        }
        Command::Interferometer { alpha_grid, beta } => {
            let section = &mut config.interferometer;
            overlay(&mut section.alpha_grid, *alpha_grid);
            overlay(&mut section.beta, beta.map(angle));
            (
                "interferometer",
                runners::interferometer(section, &cli.out_dir)?,
            )
        }
        Command::Rings {
            p_min,
            p_max,
            n_cutoff,
        } => {
            let section = &mut config.rings;
            overlay(&mut section.p_min, *p_min);
            overlay(&mut section.p_max, *p_max);
            overlay(&mut section.n_cutoff, *n_cutoff);
            ("rings", runners::rings(section, &cli.out_dir)?)
        }
        Command::Spin { grid, beta } => {
            let section = &mut config.spin;
            overlay(&mut section.grid, *grid);
            overlay(&mut section.beta, beta.map(angle));
            ("spin", runners::spin(section, &cli.out_dir)?)
        }
        Command::Chsh => ("chsh", runners::chsh(&cli.out_dir)?),
        Command::Ghz => ("ghz", runners::ghz(&cli.out_dir)?),
        Command::Stream {
            experiment,
            n_trials,
            alpha,
            beta,
            momentum,
            shadow_paths,
        } => {
            let section = &mut config.stream;
            overlay_clone(&mut section.experiment, experiment.clone());
            overlay(&mut section.n_trials, *n_trials);
            overlay(&mut section.alpha, alpha.map(angle));
            overlay(&mut section.beta, beta.map(angle));
            overlay(&mut section.momentum, *momentum);
            overlay(&mut section.shadow_paths, *shadow_paths);
            ("stream", runners::stream(section, seed, &cli.out_dir)?)
        }
        Command::Suite => {
            let (outputs, all_pass) = runners::suite(&cli.out_dir)?;
            write_manifest(
                &cli.out_dir,
                "suite",
                seed,
                &config,
                outputs,
                started.elapsed().as_secs_f64(),
            )?;
            return if all_pass {
                Ok(())
            } else {
                Err(CliError::Criteria(
                    "suite_summary.json names the failing criteria".into(),
                ))
            };
        }
    };

    write_manifest(
        &cli.out_dir,
        name,
        seed,
        &config,
        outputs,
        started.elapsed().as_secs_f64(),
    )?;
    Ok(())
}

fn overlay<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn overlay_clone<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn write_manifest(
    out_dir: &Path,
    experiment: &str,
    seed: u64,
    config: &Config,
    outputs: Vec<String>,
    duration_seconds: f64,
) -> Result<(), CliError> {
    let manifest = RunManifest {
        experiment: experiment.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        config: serde_json::to_value(config).expect("config serializes"),
        outputs,
        duration_seconds,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(out_dir.join(format!("{experiment}_manifest.json")), text)
        .map_err(|e| CliError::Internal(anyhow::anyhow!("writing manifest: {e}")))?;
    Ok(())
}
