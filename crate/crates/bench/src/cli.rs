//! `ncmusic` command-line interface.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ncmusic_core::crb::{crb_nc, CrbInputs};
use ncmusic_core::estimate;
use ncmusic_core::signal::{noise_variance, synthesize_snapshots};

use crate::config::{ScenarioConfig, SweepConfig};
use crate::flops::{flop_model, FlopAlgorithm, GridPoints};
use crate::sweep::{run_sweep, write_report};

#[derive(Debug, Parser)]
#[command(name = "ncmusic", version, about = "Quaternion MUSIC DOA/polarization estimation and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte-Carlo sweep and write trials.csv and summary.csv.
    Sweep {
        config: PathBuf,
        /// Overrides the file's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; overrides the file's setting.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory; overrides the file and NCMUSIC_OUTPUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize one data set and print the estimates of each algorithm.
    Estimate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the Cramér-Rao bound for a scenario.
    Crb { config: PathBuf },
    /// Print the operation-count model.
    Flops {
        /// LV, QDR, QNC or DR; all four when omitted.
        #[arg(long)]
        alg: Option<FlopAlgorithm>,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        n: u64,
        /// Grid sizes J1,J2,J3,J4.
        #[arg(long, value_delimiter = ',', value_name = "J1,J2,J3,J4")]
        j: Option<Vec<u64>>,
    },
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Sweep {
            config,
            seed,
            workers,
            out: dir,
        } => {
            let mut cfg =
                SweepConfig::load(&config).with_context(|| format!("loading sweep config {}", config.display()))?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let workers = workers.unwrap_or(cfg.workers);
            let report = run_sweep(&cfg, workers)?;
            let dir = dir.unwrap_or_else(|| cfg.resolved_output_dir());
            let (trials, summary) = write_report(&report, &dir)?;
            for r in &report.records {
                writeln!(
                    out,
                    "{:<4} {}x{} snr {:>6.1} dB N {:>5}: rmse theta {:.4} phi {:.4} gamma {:.4} eta {:.4} ({} used, {} failed)",
                    r.algorithm,
                    r.mx,
                    r.my,
                    r.snr_db,
                    r.snapshots,
                    r.rmse_theta,
                    r.rmse_phi,
                    r.rmse_gamma,
                    r.rmse_eta,
                    r.trials_used,
                    r.failures
                )?;
            }
            writeln!(out, "wrote {} and {}", trials.display(), summary.display())?;
        }
        Command::Estimate { config, seed } => {
            let cfg = ScenarioConfig::load(&config)
                .with_context(|| format!("loading scenario config {}", config.display()))?;
            let seed = seed.unwrap_or(cfg.seed);
            let data = synthesize_snapshots(&cfg.array, &cfg.sources, cfg.snapshots, cfg.snr_db, seed, cfg.signal)?;
            for &alg in &cfg.algorithms {
                let mut res = estimate(alg, &data, &cfg.array, cfg.sources.len(), &cfg.grid)
                    .with_context(|| format!("{alg} estimation"))?;
                res.estimates.sort_by(|a, b| a.theta.total_cmp(&b.theta));
                writeln!(out, "{alg}")?;
                for e in &res.estimates {
                    writeln!(
                        out,
                        "  theta {:9.4}  phi {:8.4}  gamma {:8.4}  eta {:9.4}  spectrum {:.3e}",
                        e.theta.to_degrees(),
                        e.phi.to_degrees(),
                        e.gamma.to_degrees(),
                        e.eta.to_degrees(),
                        e.spectrum
                    )?;
                }
            }
        }
        Command::Crb { config } => {
            let cfg = ScenarioConfig::load(&config)
                .with_context(|| format!("loading scenario config {}", config.display()))?;
            let nv = noise_variance(&cfg.sources, cfg.snr_db)?;
            let b = crb_nc(&CrbInputs::from_scene(&cfg.array, &cfg.sources, cfg.signal, nv, cfg.snapshots))?;
            writeln!(out, "sqrt(CRB) in degrees, augmented covariance condition {:.3e}", b.condition_number)?;
            let sd: Vec<Vec<f64>> = (0..4).map(|p| b.std_devs(p)).collect();
            for k in 0..cfg.sources.len() {
                writeln!(
                    out,
                    "  source {k}: theta {:.3e}  phi {:.3e}  gamma {:.3e}  eta {:.3e}",
                    sd[0][k].to_degrees(),
                    sd[1][k].to_degrees(),
                    sd[2][k].to_degrees(),
                    sd[3][k].to_degrees()
                )?;
            }
        }
        Command::Flops { alg, m, l, n, j } => {
            let grid = match j.as_deref() {
                None => GridPoints::default(),
                Some([j1, j2, j3, j4]) => GridPoints {
                    j1: *j1,
                    j2: *j2,
                    j3: *j3,
                    j4: *j4,
                },
                Some(_) => bail!("--j takes exactly four values"),
            };
            let algs = alg.map(|a| vec![a]).unwrap_or_else(|| FlopAlgorithm::ALL.to_vec());
            for a in algs {
                writeln!(out, "{a} M={m} L={l} N={n}: {}", flop_model(a, m, l, n, grid)?)?;
            }
        }
    }
    Ok(())
}
