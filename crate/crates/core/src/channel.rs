//! Channel synthesis: Rician small-scale fading, lognormal shadowing,
//! distance path loss and Kronecker spatial correlation.
//!
//! Channel matrices are user-major: row `k` holds user `k`'s gains toward
//! every transmit antenna, antenna `m` of RRH `n` sitting in column `n*M + m`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, repair_psd, to_complex, CMatrix, C64};
use crate::scenario::{Deployment, ScenarioConfig};
use crate::seed::{stream_rng, Stream};

/// Log-distance path loss `intercept + slope * log10(d)` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub intercept_db: f64,
    pub slope_db: f64,
}

impl Default for PathLossModel {
    /// The 3GPP LTE urban model, 36.3 + 37.6 log10(d).
    fn default() -> Self {
        PathLossModel {
            intercept_db: 36.3,
            slope_db: 37.6,
        }
    }
}

impl PathLossModel {
    /// Slope `10 * alpha` dB per decade on the default intercept.
    pub fn from_exponent(alpha: f64) -> Self {
        PathLossModel {
            slope_db: 10.0 * alpha,
            ..Default::default()
        }
    }

    pub fn db(&self, d_m: f64) -> Result<f64> {
        if !(d_m >= 1.0) {
            return Err(Error::Domain(format!("path loss needs d >= 1 m, got {d_m}")));
        }
        Ok(self.intercept_db + self.slope_db * d_m.log10())
    }

    /// Linear amplitude gain `10^(-PL/20)`.
    pub fn amplitude(&self, d_m: f64) -> Result<f64> {
        Ok(10f64.powf(-self.db(d_m)? / 20.0))
    }
}

/// Path loss in dB of the default 3GPP model.
pub fn path_loss_db(d_m: f64) -> Result<f64> {
    PathLossModel::default().db(d_m)
}

/// Mean and per-component deviation of Rician fading with factor `k`:
/// `mu = sqrt(k/(k+1))`, `sigma = sqrt(1/(2k+2))`.
pub fn rician_params(k_factor: f64) -> Result<(f64, f64)> {
    if k_factor.is_nan() || k_factor < 0.0 {
        return Err(Error::Domain(format!("Rician factor must be >= 0, got {k_factor}")));
    }
    if k_factor.is_infinite() {
        return Ok((1.0, 0.0));
    }
    Ok(((k_factor / (k_factor + 1.0)).sqrt(), (1.0 / (2.0 * k_factor + 2.0)).sqrt()))
}

/// Transmit correlation over the antennas of a set of RRHs, before repair.
///
/// Antennas `p, q` of one RRH correlate as `rho_t^|p-q|`; antennas of
/// distinct RRHs `i, j` as `rho_t_prime^ceil(d_ij / d_min)`.
pub fn tx_correlation_raw(
    d_rrh: &DMatrix<f64>,
    d_min: f64,
    m_ant: usize,
    rho_t: f64,
    rho_t_prime: f64,
) -> DMatrix<f64> {
    let n = d_rrh.nrows();
    DMatrix::from_fn(n * m_ant, n * m_ant, |a, b| {
        let (i, p) = (a / m_ant, a % m_ant);
        let (j, q) = (b / m_ant, b % m_ant);
        if i == j {
            rho_t.powi(p.abs_diff(q) as i32)
        } else {
            ceil_power(rho_t_prime, d_rrh[(i, j)], d_min)
        }
    })
}

/// Receive correlation `rho_r^ceil(d_ij / d_min)` between users, before repair.
pub fn rx_correlation_raw(d_user: &DMatrix<f64>, d_min: f64, rho_r: f64) -> DMatrix<f64> {
    let k = d_user.nrows();
    DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            1.0
        } else {
            ceil_power(rho_r, d_user[(i, j)], d_min)
        }
    })
}

fn ceil_power(rho: f64, d: f64, d_min: f64) -> f64 {
    let ratio = (d / d_min).ceil();
    if !ratio.is_finite() {
        return 0.0;
    }
    rho.powf(ratio)
}

/// Repaired in-AD transmit correlation, `(N*M) x (N*M)`.
pub fn build_tx_correlation(dep: &Deployment, cfg: &ScenarioConfig) -> DMatrix<f64> {
    repair_psd(&tx_correlation_raw(
        &dep.d_rrh_rrh,
        dep.d_min_rrh,
        cfg.m_ant,
        cfg.rho_t,
        cfg.rho_t_prime(),
    ))
}

/// Repaired in-AD receive correlation, `K x K`.
pub fn build_rx_correlation(dep: &Deployment, cfg: &ScenarioConfig) -> DMatrix<f64> {
    repair_psd(&rx_correlation_raw(&dep.d_user_user, dep.d_min_user, cfg.rho_r))
}

/// Correlation matrices of one deployment and their square roots. These only
/// depend on geometry, so they can be shared across fading redraws.
#[derive(Debug, Clone)]
pub struct Correlations {
    pub r_tx: DMatrix<f64>,
    pub r_rx: DMatrix<f64>,
    pub r_tx_out: DMatrix<f64>,
    pub r_rx_out: DMatrix<f64>,
    sqrt_tx: DMatrix<f64>,
    sqrt_rx: DMatrix<f64>,
    sqrt_tx_out: DMatrix<f64>,
    sqrt_rx_out: DMatrix<f64>,
}

impl Correlations {
    /// External-tier matrices are left empty when external interference is
    /// off.
    pub fn new(dep: &Deployment, cfg: &ScenarioConfig) -> Result<Self> {
        let r_tx = build_tx_correlation(dep, cfg);
        let r_rx = build_rx_correlation(dep, cfg);
        let (r_tx_out, r_rx_out) = if cfg.external_interference {
            (
                repair_psd(&tx_correlation_raw(
                    &dep.d_out_rrh_rrh,
                    dep.d_min_out_rrh,
                    cfg.m_out(),
                    cfg.rho_t,
                    cfg.rho_t_prime(),
                )),
                repair_psd(&rx_correlation_raw(
                    &dep.d_out_user_user,
                    dep.d_min_out_user,
                    cfg.rho_r,
                )),
            )
        } else {
            (DMatrix::zeros(0, 0), DMatrix::zeros(0, 0))
        };
        Ok(Correlations {
            sqrt_tx: psd_sqrt(&r_tx)?,
            sqrt_rx: psd_sqrt(&r_rx)?,
            sqrt_tx_out: psd_sqrt(&r_tx_out)?,
            sqrt_rx_out: psd_sqrt(&r_rx_out)?,
            r_tx,
            r_rx,
            r_tx_out,
            r_rx_out,
        })
    }
}

/// Small-scale and shadowing draws for one link block.
#[derive(Debug, Clone)]
pub struct FadingDraw {
    /// Rician coefficients, users x (RRHs * antennas).
    pub eta: CMatrix,
    /// Shadowing in dB, users x RRHs; shared by an RRH's antennas.
    pub zeta_db: DMatrix<f64>,
}

impl FadingDraw {
    pub fn sample<R: Rng>(
        rng: &mut R,
        n_users: usize,
        n_rrh: usize,
        m_ant: usize,
        rician_k: f64,
        shadow_sigma_db: f64,
    ) -> Result<Self> {
        let (mu, sigma) = rician_params(rician_k)?;
        let mut eta = CMatrix::zeros(n_users, n_rrh * m_ant);
        for k in 0..n_users {
            for c in 0..n_rrh * m_ant {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                eta[(k, c)] = C64::new(mu + sigma * re, sigma * im);
            }
        }
        let mut zeta_db = DMatrix::zeros(n_users, n_rrh);
        for k in 0..n_users {
            for n in 0..n_rrh {
                let z: f64 = rng.sample(StandardNormal);
                zeta_db[(k, n)] = shadow_sigma_db * z;
            }
        }
        Ok(FadingDraw { eta, zeta_db })
    }
}

/// In-AD channel `h` (K x N*M), cross channel `h_cross` from the external
/// RRHs to in-AD users (K x N_out*M_out), and the external tier's own channel
/// `h_out` (K_out x N_out*M_out) used to compute the external precoder.
#[derive(Debug, Clone)]
pub struct ChannelSet {
    pub h: CMatrix,
    pub h_cross: CMatrix,
    pub h_out: CMatrix,
    pub r_tx: DMatrix<f64>,
    pub r_rx: DMatrix<f64>,
    pub r_tx_out: DMatrix<f64>,
    pub r_rx_out: DMatrix<f64>,
}

struct LinkSpec<'a> {
    sqrt_rx: &'a DMatrix<f64>,
    sqrt_tx: &'a DMatrix<f64>,
    /// RRHs x users.
    dist: &'a DMatrix<f64>,
    m_ant: usize,
}

fn synthesize_link<R: Rng>(
    rng: &mut R,
    link: LinkSpec<'_>,
    cfg: &ScenarioConfig,
    path_loss: &PathLossModel,
) -> Result<CMatrix> {
    let (n_rrh, n_users) = link.dist.shape();
    let draw = FadingDraw::sample(rng, n_users, n_rrh, link.m_ant, cfg.rician_k, cfg.shadow_sigma_db)?;
    let mut h = to_complex(link.sqrt_rx) * &draw.eta * to_complex(link.sqrt_tx);
    for k in 0..n_users {
        for n in 0..n_rrh {
            let gain = 10f64.powf(draw.zeta_db[(k, n)] / 20.0) * path_loss.amplitude(link.dist[(n, k)])?;
            for m in 0..link.m_ant {
                h[(k, n * link.m_ant + m)] *= gain;
            }
        }
    }
    Ok(h)
}

/// Draws all channels of one drop. The external-tier channels are only
/// drawn when external interference is on; they use their own random
/// streams, so the in-AD channel is the same either way.
pub fn synthesize(dep: &Deployment, cfg: &ScenarioConfig, seed: u64) -> Result<ChannelSet> {
    let corr = Correlations::new(dep, cfg)?;
    synthesize_with(dep, &corr, cfg, seed)
}

/// Same as [`synthesize`] with precomputed correlations.
pub fn synthesize_with(
    dep: &Deployment,
    corr: &Correlations,
    cfg: &ScenarioConfig,
    seed: u64,
) -> Result<ChannelSet> {
    let pl = PathLossModel::from_exponent(cfg.alpha);
    let h = synthesize_link(
        &mut stream_rng(seed, Stream::FadingInside),
        LinkSpec {
            sqrt_rx: &corr.sqrt_rx,
            sqrt_tx: &corr.sqrt_tx,
            dist: &dep.d_rrh_user,
            m_ant: cfg.m_ant,
        },
        cfg,
        &pl,
    )?;
    if !cfg.external_interference {
        return Ok(ChannelSet {
            h_cross: CMatrix::zeros(h.nrows(), 0),
            h_out: CMatrix::zeros(0, 0),
            h,
            r_tx: corr.r_tx.clone(),
            r_rx: corr.r_rx.clone(),
            r_tx_out: corr.r_tx_out.clone(),
            r_rx_out: corr.r_rx_out.clone(),
        });
    }
    let h_cross = synthesize_link(
        &mut stream_rng(seed, Stream::FadingCross),
        LinkSpec {
            sqrt_rx: &corr.sqrt_rx,
            sqrt_tx: &corr.sqrt_tx_out,
            dist: &dep.d_out_rrh_user,
            m_ant: cfg.m_out(),
        },
        cfg,
        &pl,
    )?;
    let h_out = synthesize_link(
        &mut stream_rng(seed, Stream::FadingOutside),
        LinkSpec {
            sqrt_rx: &corr.sqrt_rx_out,
            sqrt_tx: &corr.sqrt_tx_out,
            dist: &dep.d_out_rrh_out_user,
            m_ant: cfg.m_out(),
        },
        cfg,
        &pl,
    )?;
    Ok(ChannelSet {
        h,
        h_cross,
        h_out,
        r_tx: corr.r_tx.clone(),
        r_rx: corr.r_rx.clone(),
        r_tx_out: corr.r_tx_out.clone(),
        r_rx_out: corr.r_rx_out.clone(),
    })
}
