use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cran_core::harness::{dump_channels, RunOptions};
use cran_core::{emit, emit_compare, load_config, run_compare, run_sweep, ScenarioConfig, SweepResult};

/// Monte-Carlo simulator for cloud-RAN downlink coordination schemes.
#[derive(Parser)]
#[command(name = "cran-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured scenario at a single operating point.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write the drawn channels of every drop as JSON lines.
        #[arg(long, value_name = "FILE")]
        dump_channels: Option<PathBuf>,
    },
    /// Sweep the axis named in the config.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Run every scheme listed under `compare` in the config.
    Compare {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// TOML scenario file; defaults apply to missing keys.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Master seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Drops per point, overriding the config.
    #[arg(long)]
    drops: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    parallel: usize,
    /// Give every compared scheme the same drops.
    #[arg(long)]
    paired: bool,
}

impl Common {
    fn config(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => ScenarioConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(drops) = self.drops {
            cfg.n_drops = drops;
        }
        if self.paired {
            cfg.paired = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn options(&self) -> RunOptions {
        RunOptions {
            parallel: self.parallel,
            scheme_tag: 0,
        }
    }
}

fn summarize(result: &SweepResult) {
    println!("{} ({})", result.scheme, result.axis);
    for p in &result.points {
        println!(
            "  {:>10} sum-rate {:.3} ± {:.3}  adjusted {:.3}  drops {} rejected {}",
            p.value, p.mean_sum_rate, p.std_err, p.mean_adjusted_sum_rate, p.drops, p.rejected
        );
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { common, dump_channels: dump } => {
            let mut cfg = common.config()?;
            cfg.sweep_param = None;
            cfg.sweep_values.clear();
            let result = run_sweep(&cfg, common.options())?;
            emit(&result, &common.out).with_context(|| format!("writing {}", common.out.display()))?;
            if let Some(path) = dump {
                dump_channels(&result, &path)?;
            }
            summarize(&result);
        }
        Command::Sweep { common } => {
            let cfg = common.config()?;
            if cfg.sweep_param.is_none() || cfg.sweep_values.is_empty() {
                bail!("the config names no sweep (set `sweep_param` and `sweep_values`)");
            }
            let result = run_sweep(&cfg, common.options())?;
            emit(&result, &common.out)?;
            summarize(&result);
        }
        Command::Compare { common } => {
            let cfg = common.config()?;
            let results = run_compare(&cfg, common.parallel)?;
            emit_compare(&results, &common.out)?;
            for r in &results {
                summarize(r);
            }
        }
    }
    Ok(())
}
