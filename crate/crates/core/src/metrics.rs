//! SINR, sum-rate and overhead-adjusted sum-rate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scenario::ScenarioConfig;

/// Received power components at one user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferenceSplit {
    pub signal: f64,
    pub intra: f64,
    pub external: f64,
    pub noise: f64,
}

impl InterferenceSplit {
    pub fn denominator(&self) -> f64 {
        self.intra + self.external + self.noise
    }

    pub fn sinr(&self) -> f64 {
        self.signal / self.denominator()
    }
}

/// Per-user SINR terms. `cross` carries `(H_cross, W_out)` when external
/// interference is modeled.
pub fn sinr_terms(
    h: &CMatrix,
    w: &CMatrix,
    cross: Option<(&CMatrix, &CMatrix)>,
    noise: f64,
) -> Result<Vec<InterferenceSplit>> {
    if h.ncols() != w.nrows() || w.ncols() != h.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "H is {:?} but W is {:?}",
            h.shape(),
            w.shape()
        )));
    }
    let hw = h * w;
    let ext = match cross {
        Some((hc, wo)) => {
            if hc.nrows() != h.nrows() || hc.ncols() != wo.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "H_cross is {:?} but W_out is {:?}",
                    hc.shape(),
                    wo.shape()
                )));
            }
            let hcw = hc * wo;
            hcw.row_iter().map(|r| r.norm_squared()).collect()
        }
        None => vec![0.0; h.nrows()],
    };
    Ok((0..h.nrows())
        .map(|k| {
            let signal = hw[(k, k)].norm_sqr();
            let intra = (0..hw.ncols())
                .filter(|&j| j != k)
                .map(|j| hw[(k, j)].norm_sqr())
                .sum();
            InterferenceSplit {
                signal,
                intra,
                external: ext[k],
                noise,
            }
        })
        .collect())
}

/// `sum_k log2(1 + sinr_k)`.
pub fn sum_rate(sinr: &[f64]) -> Result<f64> {
    if let Some(bad) = sinr.iter().find(|s| !(**s >= 0.0)) {
        return Err(Error::Domain(format!("negative SINR {bad}")));
    }
    Ok(sinr.iter().map(|s| s.ln_1p() / std::f64::consts::LN_2).sum())
}

/// Discounts `sum_rate` by the share of downlink symbols spent on training:
/// `(W - omega) / W * sum_rate` with `omega = K * PF`.
pub fn adjusted_sum_rate_with(sum_rate: f64, n_users: usize, pf_hz: f64, w_sym: f64) -> Result<f64> {
    let omega = n_users as f64 * pf_hz;
    if omega >= w_sym {
        return Err(Error::OverheadExceedsBudget { omega, budget: w_sym });
    }
    Ok((w_sym - omega) / w_sym * sum_rate)
}

pub fn adjusted_sum_rate(sum_rate: f64, cfg: &ScenarioConfig) -> Result<f64> {
    adjusted_sum_rate_with(sum_rate, cfg.n_users, cfg.pf_hz, cfg.w_sym)
}

/// Empirical CDF as `(value, i/n)` steps over the sorted values.
pub fn ecdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::EmptyInput("ECDF of no values"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, (i + 1) as f64 / n))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub sinr: Vec<f64>,
    pub rate: Vec<f64>,
    pub sum_rate: f64,
    pub adjusted_sum_rate: f64,
    pub omega: f64,
    pub interference_split: Vec<InterferenceSplit>,
}

impl RateReport {
    pub fn new(split: Vec<InterferenceSplit>, cfg: &ScenarioConfig) -> Result<Self> {
        let sinr: Vec<f64> = split.iter().map(InterferenceSplit::sinr).collect();
        let rate: Vec<f64> = sinr.iter().map(|s| s.ln_1p() / std::f64::consts::LN_2).collect();
        let total = sum_rate(&sinr)?;
        Ok(RateReport {
            adjusted_sum_rate: adjusted_sum_rate(total, cfg)?,
            omega: cfg.omega(),
            sum_rate: total,
            sinr,
            rate,
            interference_split: split,
        })
    }
}
