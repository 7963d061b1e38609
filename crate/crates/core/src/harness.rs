//! Monte-Carlo engine: single drops, sweeps, paired scheme comparisons and
//! the files they are written to.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::association::{associate_users, Association};
use crate::channel::{synthesize, ChannelSet};
use crate::clustering::{cluster_for, Clustering};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::metrics::{ecdf, sinr_terms, RateReport};
use crate::precoding::{wmmse_precoder, zfbf_precoder, PrecodeResult, WmmseDiagnostics, WmmseOptions};
use crate::scenario::{drop_deployment, Coordination, Deployment, PrecoderKind, ScenarioConfig, SweepParam};
use crate::seed::{drop_seed, mix, Stream};

/// Attempts per drop beyond the first when a channel turns out singular.
pub const MAX_REDRAWS: usize = 5;

/// Sweeps fail when more than this share of drops is rejected.
pub const MAX_REJECTION_RATE: f64 = 0.10;

pub const VERSION: &str = concat!("cran-core ", env!("CARGO_PKG_VERSION"));

/// Everything produced by one drop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DropOutcome {
    pub report: RateReport,
    /// Absent for global zero-forcing, which serves every user jointly.
    pub association: Option<Association>,
    pub clustering: Clustering,
    pub wmmse: Vec<WmmseDiagnostics>,
    /// Seed the deployment and channel were finally drawn from.
    pub channel_seed: u64,
    pub redraws: usize,
}

/// Seed of the `attempt`-th try of a drop.
pub fn attempt_seed(drop_seed: u64, attempt: usize) -> u64 {
    if attempt == 0 {
        drop_seed
    } else {
        mix(drop_seed, &[Stream::Redraw as u64, attempt as u64])
    }
}

/// Deployment and channels of one attempt.
pub fn draw_channels(cfg: &ScenarioConfig, seed: u64) -> Result<(Deployment, ChannelSet)> {
    let dep = drop_deployment(cfg, mix(seed, &[Stream::Deployment as u64]));
    let ch = synthesize(&dep, cfg, mix(seed, &[Stream::Channel as u64]))?;
    Ok((dep, ch))
}

struct Tier<'a> {
    h: &'a CMatrix,
    n_rrh: usize,
    m_ant: usize,
    per_rrh: usize,
    coordination: Coordination,
}

fn precode_tier(
    tier: Tier<'_>,
    cfg: &ScenarioConfig,
) -> Result<(CMatrix, Option<Association>, Clustering, Vec<WmmseDiagnostics>)> {
    let global_zf = cfg.precoder == PrecoderKind::ZeroForcing && tier.coordination == Coordination::Global;
    let assoc = (!global_zf).then(|| associate_users(tier.h, tier.n_rrh, tier.m_ant, tier.per_rrh));
    let clus = cluster_for(
        tier.h,
        assoc.as_ref(),
        tier.n_rrh,
        tier.m_ant,
        tier.per_rrh,
        tier.coordination,
        cfg,
    )?;
    match cfg.precoder {
        PrecoderKind::ZeroForcing => {
            let w = zfbf_precoder(tier.h, &clus, assoc.as_ref(), tier.m_ant, cfg.p_rrh_w())?;
            Ok((w, assoc, clus, Vec::new()))
        }
        PrecoderKind::Coordinated => {
            let a = assoc.as_ref().expect("CB always associates");
            let (w, diags) = wmmse_precoder(
                tier.h,
                &clus,
                a,
                tier.m_ant,
                tier.per_rrh,
                cfg.p_rrh_w(),
                cfg.noise_w(),
                &WmmseOptions::from_config(cfg),
            )?;
            Ok((w, assoc, clus, diags))
        }
    }
}

/// Precoders of the AD and, if external interference is on, of the external
/// tier, along with the in-AD association and clustering.
pub fn precode(ch: &ChannelSet, cfg: &ScenarioConfig) -> Result<(PrecodeResult, Option<Association>, Clustering)> {
    let (w, assoc, clus, mut diagnostics) = precode_tier(
        Tier {
            h: &ch.h,
            n_rrh: cfg.n_rrh,
            m_ant: cfg.m_ant,
            per_rrh: cfg.users_per_rrh(),
            coordination: cfg.coordination,
        },
        cfg,
    )?;
    let w_out = if cfg.external_interference && cfg.k_out() > 0 {
        // The external tier mirrors the in-AD zero-forcing coordination; with
        // CB every external RRH precodes only for its own users.
        let coordination = match cfg.precoder {
            PrecoderKind::ZeroForcing => cfg.coordination,
            PrecoderKind::Coordinated => Coordination::None,
        };
        let (w_out, _, _, diags) = precode_tier(
            Tier {
                h: &ch.h_out,
                n_rrh: cfg.n_out(),
                m_ant: cfg.m_out(),
                per_rrh: cfg.users_per_out_rrh(),
                coordination,
            },
            cfg,
        )?;
        diagnostics.extend(diags);
        Some(w_out)
    } else {
        None
    };
    Ok((
        PrecodeResult {
            w,
            w_out,
            diagnostics,
        },
        assoc,
        clus,
    ))
}

/// Rates of a precoded drop.
pub fn evaluate(ch: &ChannelSet, pre: &PrecodeResult, cfg: &ScenarioConfig) -> Result<RateReport> {
    let cross = pre.w_out.as_ref().map(|w_out| (&ch.h_cross, w_out));
    let split = sinr_terms(&ch.h, &pre.w, cross, cfg.noise_w())?;
    RateReport::new(split, cfg)
}

fn run_attempt(cfg: &ScenarioConfig, seed: u64) -> Result<(RateReport, Option<Association>, Clustering, Vec<WmmseDiagnostics>)> {
    let (_, ch) = draw_channels(cfg, seed)?;
    let (pre, assoc, clus) = precode(&ch, cfg)?;
    let report = evaluate(&ch, &pre, cfg)?;
    Ok((report, assoc, clus, pre.diagnostics))
}

/// Runs the full pipeline for one drop, redrawing on singular channels.
pub fn run_drop(cfg: &ScenarioConfig, drop_seed: u64) -> Result<DropOutcome> {
    let mut last = None;
    for attempt in 0..=MAX_REDRAWS {
        let seed = attempt_seed(drop_seed, attempt);
        match run_attempt(cfg, seed) {
            Ok((report, association, clustering, wmmse)) => {
                return Ok(DropOutcome {
                    report,
                    association,
                    clustering,
                    wmmse,
                    channel_seed: seed,
                    redraws: attempt,
                })
            }
            Err(e @ Error::SingularChannel { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Per-drop summary kept in sweep results, in drop order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DropSummary {
    pub drop_seed: u64,
    pub channel_seed: u64,
    /// `None` for a rejected drop.
    pub sum_rate: Option<f64>,
    pub adjusted_sum_rate: Option<f64>,
    pub redraws: usize,
    pub wmmse_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub mean_sum_rate: f64,
    pub mean_adjusted_sum_rate: f64,
    pub std_err: f64,
    pub std_err_adjusted: f64,
    pub drops: usize,
    pub rejected: usize,
    pub redraws: usize,
    pub records: Vec<DropSummary>,
}

impl SweepPoint {
    pub fn sum_rates(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.sum_rate).collect()
    }

    pub fn adjusted_sum_rates(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.adjusted_sum_rate).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config: ScenarioConfig,
    pub master_seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub scheme: String,
    pub axis: String,
    pub points: Vec<SweepPoint>,
    pub provenance: Provenance,
}

/// Mean and standard error (sample deviation over `sqrt(n)`).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 uses all cores, 1 runs serially.
    pub parallel: usize,
    /// Mixed into drop seeds; 0 for paired runs.
    pub scheme_tag: u64,
}

fn in_pool<T: Send>(parallel: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    Ok(pool.install(f))
}

fn run_point(cfg: &ScenarioConfig, index: usize, value: f64, opts: RunOptions) -> Result<SweepPoint> {
    let outcomes: Vec<(u64, Result<DropOutcome>)> = in_pool(opts.parallel, || {
        (0..cfg.n_drops)
            .into_par_iter()
            .map(|d| {
                let seed = drop_seed(cfg.master_seed, index, d, opts.scheme_tag);
                (seed, run_drop(cfg, seed))
            })
            .collect()
    })?;
    let mut records = Vec::with_capacity(outcomes.len());
    for (seed, outcome) in outcomes {
        records.push(match outcome {
            Ok(o) => DropSummary {
                drop_seed: seed,
                channel_seed: o.channel_seed,
                sum_rate: Some(o.report.sum_rate),
                adjusted_sum_rate: Some(o.report.adjusted_sum_rate),
                redraws: o.redraws,
                wmmse_converged: o.wmmse.iter().all(|d| d.converged),
            },
            Err(Error::SingularChannel { .. }) => DropSummary {
                drop_seed: seed,
                channel_seed: attempt_seed(seed, MAX_REDRAWS),
                sum_rate: None,
                adjusted_sum_rate: None,
                redraws: MAX_REDRAWS,
                wmmse_converged: false,
            },
            Err(e) => return Err(e),
        });
    }
    let rejected = records.iter().filter(|r| r.sum_rate.is_none()).count();
    if rejected as f64 > MAX_REJECTION_RATE * cfg.n_drops as f64 {
        return Err(Error::TooManyRejections {
            rejected,
            total: cfg.n_drops,
        });
    }
    let point = SweepPoint {
        value,
        mean_sum_rate: 0.0,
        mean_adjusted_sum_rate: 0.0,
        std_err: 0.0,
        std_err_adjusted: 0.0,
        drops: cfg.n_drops - rejected,
        rejected,
        redraws: records.iter().map(|r| r.redraws).sum(),
        records,
    };
    let (mean_sum_rate, std_err) = mean_and_se(&point.sum_rates());
    let (mean_adjusted_sum_rate, std_err_adjusted) = mean_and_se(&point.adjusted_sum_rates());
    Ok(SweepPoint {
        mean_sum_rate,
        mean_adjusted_sum_rate,
        std_err,
        std_err_adjusted,
        ..point
    })
}

/// Axis name and values; without a sweep, a single point at the configured
/// per-RRH power.
pub fn sweep_axis(cfg: &ScenarioConfig) -> (SweepParam, Vec<f64>) {
    match cfg.sweep_param {
        Some(p) => (p, cfg.sweep_values.clone()),
        None => (SweepParam::PRrhDbm, vec![cfg.p_rrh_dbm]),
    }
}

/// Runs `n_drops` drops at every sweep point. Drop `d` at point `a` uses
/// the seed derived from `(master_seed, a, d, scheme_tag)`.
pub fn run_sweep(cfg: &ScenarioConfig, opts: RunOptions) -> Result<SweepResult> {
    cfg.validate()?;
    let (param, values) = sweep_axis(cfg);
    let points = values
        .iter()
        .enumerate()
        .map(|(i, &v)| run_point(&cfg.with_param(param, v)?, i, v, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        scheme: Scheme::of(cfg).to_string(),
        axis: param.name().to_string(),
        points,
        provenance: Provenance {
            config: cfg.clone(),
            master_seed: cfg.master_seed,
            version: VERSION.to_string(),
        },
    })
}

/// A coordination/precoder variant, written like `gc-zfbf`, `lc4-cb` or
/// `nc-zfbf-ext` (`-ext` / `-noext` override external interference).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scheme {
    pub coordination: Coordination,
    /// Cluster size under LC.
    pub cluster_size: Option<usize>,
    pub precoder: PrecoderKind,
    pub external: Option<bool>,
}

impl Scheme {
    pub fn of(cfg: &ScenarioConfig) -> Scheme {
        Scheme {
            coordination: cfg.coordination,
            cluster_size: (cfg.coordination == Coordination::Local).then(|| cfg.cluster_size()),
            precoder: cfg.precoder,
            external: Some(cfg.external_interference),
        }
    }

    pub fn apply(&self, cfg: &ScenarioConfig) -> Result<ScenarioConfig> {
        let mut out = cfg.clone();
        out.coordination = self.coordination;
        out.precoder = self.precoder;
        out.n_clusters = None;
        out.cluster_size = self.cluster_size;
        if let Some(ext) = self.external {
            out.external_interference = ext;
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coordination, self.cluster_size) {
            (Coordination::Local, Some(b)) => write!(f, "lc{b}")?,
            (c, _) => write!(f, "{}", c.to_string().to_lowercase())?,
        }
        write!(f, "-{}", self.precoder.to_string().to_lowercase())?;
        match self.external {
            Some(true) => write!(f, "-ext"),
            Some(false) => write!(f, "-noext"),
            None => Ok(()),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let mut parts = lower.split('-');
        let bad = || Error::config("compare", format!("unrecognized scheme `{s}`"));
        let coord = parts.next().ok_or_else(bad)?;
        let (coordination, cluster_size) = match coord {
            "gc" => (Coordination::Global, None),
            "nc" => (Coordination::None, None),
            "lc" => (Coordination::Local, None),
            c if c.starts_with("lc") => (
                Coordination::Local,
                Some(c[2..].parse::<usize>().map_err(|_| bad())?),
            ),
            _ => return Err(bad()),
        };
        let precoder = match parts.next() {
            Some("zfbf") | Some("zf") => PrecoderKind::ZeroForcing,
            Some("cb") | Some("wmmse") => PrecoderKind::Coordinated,
            _ => return Err(bad()),
        };
        let external = match parts.next() {
            None => None,
            Some("ext") => Some(true),
            Some("noext") => Some(false),
            Some(_) => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Scheme {
            coordination,
            cluster_size,
            precoder,
            external,
        })
    }
}

/// Runs every scheme of `cfg.compare` over the same sweep. With `paired`,
/// all schemes share drop seeds, so drop `d` sees the same deployment and
/// fading under each scheme.
pub fn run_compare(cfg: &ScenarioConfig, parallel: usize) -> Result<Vec<SweepResult>> {
    if cfg.compare.is_empty() {
        return Err(Error::config("compare", "no schemes listed"));
    }
    cfg.compare
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let scheme: Scheme = label.parse()?;
            let scfg = scheme.apply(cfg)?;
            let tag = if cfg.paired { 0 } else { i as u64 + 1 };
            run_sweep(
                &scfg,
                RunOptions {
                    parallel,
                    scheme_tag: tag,
                },
            )
        })
        .collect()
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

const POINT_COLUMNS: [&str; 7] = [
    "mean_sum_rate",
    "mean_adjusted_sum_rate",
    "std_err",
    "std_err_adjusted",
    "drops",
    "rejected",
    "redraws",
];

fn point_fields(p: &SweepPoint) -> Vec<String> {
    vec![
        fmt_f64(p.value),
        fmt_f64(p.mean_sum_rate),
        fmt_f64(p.mean_adjusted_sum_rate),
        fmt_f64(p.std_err),
        fmt_f64(p.std_err_adjusted),
        p.drops.to_string(),
        p.rejected.to_string(),
        p.redraws.to_string(),
    ]
}

/// Writes `sweep.csv`, one `ecdf_<i>.csv` per point, `run.json` and the
/// plotting script into `out_dir`.
pub fn emit(result: &SweepResult, out_dir: &Path) -> Result<()> {
    create_dir(out_dir)?;
    let path = out_dir.join("sweep.csv");
    let mut wr = csv_writer(&path)?;
    let mut header = vec![result.axis.as_str()];
    header.extend(POINT_COLUMNS);
    wr.write_record(&header).map_err(|e| csv_err(&path, e))?;
    for p in &result.points {
        wr.write_record(point_fields(p)).map_err(|e| csv_err(&path, e))?;
    }
    wr.flush().map_err(|e| Error::io(&path, e))?;

    for (i, p) in result.points.iter().enumerate() {
        let path = out_dir.join(format!("ecdf_{i}.csv"));
        let mut wr = csv_writer(&path)?;
        wr.write_record(["adjusted_sum_rate", "cumulative_probability"])
            .map_err(|e| csv_err(&path, e))?;
        let values = p.adjusted_sum_rates();
        if !values.is_empty() {
            for (v, q) in ecdf(&values)? {
                wr.write_record([fmt_f64(v), fmt_f64(q)]).map_err(|e| csv_err(&path, e))?;
            }
        }
        wr.flush().map_err(|e| Error::io(&path, e))?;
    }

    #[derive(Serialize)]
    struct RunRecord<'a> {
        scheme: &'a str,
        axis: &'a str,
        values: Vec<f64>,
        drop_seeds: Vec<Vec<u64>>,
        #[serde(flatten)]
        provenance: &'a Provenance,
    }
    let record = RunRecord {
        scheme: &result.scheme,
        axis: &result.axis,
        values: result.points.iter().map(|p| p.value).collect(),
        drop_seeds: result
            .points
            .iter()
            .map(|p| p.records.iter().map(|r| r.drop_seed).collect())
            .collect(),
        provenance: &result.provenance,
    };
    write_json(&out_dir.join("run.json"), &record)?;
    write_text(&out_dir.join("plot_figures.py"), PLOT_SCRIPT)
}

/// Writes `compare.csv` plus one [`emit`] directory per scheme.
pub fn emit_compare(results: &[SweepResult], out_dir: &Path) -> Result<()> {
    create_dir(out_dir)?;
    let path = out_dir.join("compare.csv");
    let mut wr = csv_writer(&path)?;
    let axis = results.first().map_or("value", |r| r.axis.as_str());
    let mut header = vec!["scheme", axis];
    header.extend(POINT_COLUMNS);
    wr.write_record(&header).map_err(|e| csv_err(&path, e))?;
    for r in results {
        for p in &r.points {
            let mut row = vec![r.scheme.clone()];
            row.extend(point_fields(p));
            wr.write_record(row).map_err(|e| csv_err(&path, e))?;
        }
    }
    wr.flush().map_err(|e| Error::io(&path, e))?;
    for r in results {
        emit(r, &out_dir.join(&r.scheme))?;
    }
    write_text(&out_dir.join("plot_figures.py"), PLOT_SCRIPT)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct ComplexArray {
    rows: usize,
    cols: usize,
    /// Row-major.
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<&CMatrix> for ComplexArray {
    fn from(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                re.push(m[(r, c)].re);
                im.push(m[(r, c)].im);
            }
        }
        ComplexArray { rows, cols, re, im }
    }
}

#[derive(Serialize)]
struct ChannelRecord {
    drop: usize,
    channel_seed: u64,
    /// Rows are users; columns are `rrh * antennas + antenna`.
    h: ComplexArray,
    h_cross: ComplexArray,
}

/// Writes one JSON line per drop of the first sweep point with `H` and
/// `H_cross` as drawn for that drop.
pub fn dump_channels(result: &SweepResult, path: &Path) -> Result<()> {
    let cfg = &result.provenance.config;
    let (param, values) = sweep_axis(cfg);
    let Some(first) = result.points.first() else {
        return Ok(());
    };
    let point_cfg = cfg.with_param(param, values[0])?;
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    for (d, rec) in first.records.iter().enumerate() {
        let (_, ch) = draw_channels(&point_cfg, rec.channel_seed)?;
        let line = serde_json::to_string(&ChannelRecord {
            drop: d,
            channel_seed: rec.channel_seed,
            h: (&ch.h).into(),
            h_cross: (&ch.h_cross).into(),
        })
        .map_err(|e| Error::Internal(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plots sum-rate curves and ECDFs from the CSV files in this directory.

Usage: python3 plot_figures.py [directory]
"""
import csv
import glob
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def curves(ax, rows, axis, label=None):
    xs = [float(r[axis]) for r in rows]
    for col, style in (("mean_sum_rate", "-o"), ("mean_adjusted_sum_rate", "--x")):
        ys = [float(r[col]) for r in rows]
        err = [2 * float(r["std_err"]) for r in rows]
        name = col if label is None else f"{label} ({col.replace('mean_', '')})"
        ax.errorbar(xs, ys, yerr=err, fmt=style, capsize=3, label=name)


def main(root):
    compare = os.path.join(root, "compare.csv")
    fig, ax = plt.subplots()
    if os.path.exists(compare):
        rows = read(compare)
        axis = list(rows[0].keys())[1]
        for scheme in dict.fromkeys(r["scheme"] for r in rows):
            curves(ax, [r for r in rows if r["scheme"] == scheme], axis, scheme)
        ecdf_dirs = [os.path.join(root, s) for s in dict.fromkeys(r["scheme"] for r in rows)]
    else:
        rows = read(os.path.join(root, "sweep.csv"))
        axis = list(rows[0].keys())[0]
        curves(ax, rows, axis)
        ecdf_dirs = [root]
    ax.set_xlabel(axis)
    ax.set_ylabel("ergodic sum-rate [bit/s/Hz]")
    ax.grid(True)
    ax.legend(fontsize="small")
    fig.savefig(os.path.join(root, "sum_rate.png"), dpi=150)

    fig, ax = plt.subplots()
    for d in ecdf_dirs:
        for path in sorted(glob.glob(os.path.join(d, "ecdf_*.csv"))):
            pts = read(path)
            xs = [float(p["adjusted_sum_rate"]) for p in pts]
            ys = [float(p["cumulative_probability"]) for p in pts]
            name = os.path.relpath(path, root).replace(".csv", "")
            ax.step(xs, ys, where="post", label=name)
    ax.set_xlabel("sum-rate [bit/s/Hz]")
    ax.set_ylabel("ECDF")
    ax.grid(True)
    ax.legend(fontsize="small")
    fig.savefig(os.path.join(root, "ecdf.png"), dpi=150)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__)))
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_labels_round_trip() {
        for label in ["gc-zfbf", "lc4-cb", "nc-zfbf-ext", "lc8-zfbf-noext"] {
            let s: Scheme = label.parse().unwrap();
            assert_eq!(s.to_string(), label);
        }
        assert!("xx-zfbf".parse::<Scheme>().is_err());
        assert!("gc-foo".parse::<Scheme>().is_err());
        assert!("lcx-cb".parse::<Scheme>().is_err());
    }

    #[test]
    fn scheme_applies_partition() {
        let cfg = ScenarioConfig::default();
        let lc: Scheme = "lc8-zfbf".parse().unwrap();
        let c = lc.apply(&cfg).unwrap();
        assert_eq!((c.n_clusters(), c.cluster_size()), (3, 8));
        let bad: Scheme = "lc5-zfbf".parse().unwrap();
        assert!(bad.apply(&cfg).is_err());
    }

    #[test]
    fn standard_error() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((se - sd / 2.0).abs() < 1e-15);
        assert_eq!(mean_and_se(&[3.0]), (3.0, 0.0));
    }
}
