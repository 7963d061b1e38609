//! Scenario configuration and random deployment of the antenna domain.
//!
//! The antenna domain (AD) is the square `[0, side) x [0, side)`. External
//! nodes live in the ring of eight neighboring squares around it, i.e. the
//! super-square `[-side, 2 side)^2` minus the AD.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{stream_rng, Stream};

/// RRH-user pairs closer than this are redrawn so that path loss stays in
/// the valid range of the distance law.
pub const MIN_RRH_USER_DISTANCE_M: f64 = 1.0;

/// Default LC cluster size when neither `cluster_size` nor `n_clusters` is set.
pub const DEFAULT_LC_CLUSTER_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coordination {
    /// Global coordination: all RRHs form one cluster.
    #[serde(rename = "GC", alias = "gc")]
    Global,
    /// Local coordination: `C` disjoint clusters of `B` RRHs.
    #[serde(rename = "LC", alias = "lc")]
    Local,
    /// No coordination: every RRH serves its own users.
    #[serde(rename = "NC", alias = "nc")]
    None,
}

impl fmt::Display for Coordination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coordination::Global => "GC",
            Coordination::Local => "LC",
            Coordination::None => "NC",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrecoderKind {
    #[serde(rename = "ZFBF", alias = "zfbf")]
    ZeroForcing,
    /// WMMSE coordinated beamforming.
    #[serde(rename = "CB", alias = "cb")]
    Coordinated,
}

impl fmt::Display for PrecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrecoderKind::ZeroForcing => "ZFBF",
            PrecoderKind::Coordinated => "CB",
        })
    }
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    PRrhDbm,
    PfHz,
    NUsers,
    ClusterSize,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::PRrhDbm => "p_rrh_dbm",
            SweepParam::PfHz => "pf_hz",
            SweepParam::NUsers => "n_users",
            SweepParam::ClusterSize => "cluster_size",
        }
    }
}

/// Every tunable of a simulation run.
///
/// Fields stored as `Option` are derived from the others when absent; use the
/// accessor of the same name to read the effective value. Derived values
/// follow sweeps (e.g. `users_per_rrh` tracks `n_users`) unless pinned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_rrh: usize,
    pub m_ant: usize,
    pub n_users: usize,
    /// J; defaults to `ceil(n_users / n_rrh)`.
    pub users_per_rrh: Option<usize>,
    pub side_m: f64,
    /// Path-loss exponent; the distance slope is `10 * alpha` dB/decade.
    pub alpha: f64,
    pub shadow_sigma_db: f64,
    /// Rician factor, linear.
    pub rician_k: f64,
    pub rho_t: f64,
    pub rho_r: f64,
    /// Inter-RRH correlation; defaults to `rho_t ^ m_ant`.
    pub rho_t_prime: Option<f64>,
    pub n_clusters: Option<usize>,
    pub cluster_size: Option<usize>,
    pub coordination: Coordination,
    pub precoder: PrecoderKind,
    pub p_rrh_dbm: f64,
    /// Defaults to thermal noise over 180 kHz with a 9 dB noise figure.
    pub noise_dbm: f64,
    pub external_interference: bool,
    /// External RRH count; defaults to `3 * n_rrh`.
    pub n_out: Option<usize>,
    /// Antennas per external RRH; defaults to `m_ant`.
    pub m_out: Option<usize>,
    /// External user count; defaults to `n_out * m_out / 2`.
    pub k_out: Option<usize>,
    /// Piloting frequency (trainings per second).
    pub pf_hz: f64,
    /// Downlink symbols per second.
    pub w_sym: f64,
    pub n_drops: usize,
    pub master_seed: u64,
    pub sweep_param: Option<SweepParam>,
    pub sweep_values: Vec<f64>,
    /// Scheme labels for `compare`, e.g. `["gc-zfbf", "lc4-zfbf", "nc-zfbf"]`.
    pub compare: Vec<String>,
    /// Reuse the same drop seeds across compared schemes.
    pub paired: bool,
    pub wmmse_max_iter: usize,
    pub wmmse_tol: f64,
    pub wmmse_bisection_tol: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n_rrh: 24,
            m_ant: 4,
            n_users: 48,
            users_per_rrh: None,
            side_m: 250.0,
            alpha: 3.76,
            shadow_sigma_db: 8.0,
            rician_k: 1.0,
            rho_t: 0.5,
            rho_r: 0.5,
            rho_t_prime: None,
            n_clusters: None,
            cluster_size: None,
            coordination: Coordination::Global,
            precoder: PrecoderKind::ZeroForcing,
            p_rrh_dbm: 20.0,
            noise_dbm: -112.4,
            external_interference: false,
            n_out: None,
            m_out: None,
            k_out: None,
            pf_hz: 0.0,
            w_sym: 14_000.0,
            n_drops: 200,
            master_seed: 1,
            sweep_param: None,
            sweep_values: Vec::new(),
            compare: Vec::new(),
            paired: true,
            wmmse_max_iter: 100,
            wmmse_tol: 1e-5,
            wmmse_bisection_tol: 1e-8,
        }
    }
}

impl FromStr for ScenarioConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Reads a TOML key-value file; absent keys take their defaults.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.parse()
}

impl ScenarioConfig {
    pub fn users_per_rrh(&self) -> usize {
        self.users_per_rrh
            .unwrap_or_else(|| self.n_users.div_ceil(self.n_rrh.max(1)))
    }

    pub fn rho_t_prime(&self) -> f64 {
        self.rho_t_prime
            .unwrap_or_else(|| self.rho_t.powi(self.m_ant as i32))
    }

    /// Cluster size B under the configured coordination.
    pub fn cluster_size(&self) -> usize {
        match self.coordination {
            Coordination::Global => self.n_rrh,
            Coordination::None => 1,
            Coordination::Local => match (self.cluster_size, self.n_clusters) {
                (Some(b), _) => b,
                (None, Some(c)) if c > 0 => self.n_rrh / c,
                _ => DEFAULT_LC_CLUSTER_SIZE,
            },
        }
    }

    /// Cluster count C under the configured coordination.
    pub fn n_clusters(&self) -> usize {
        match self.coordination {
            Coordination::Global => 1,
            Coordination::None => self.n_rrh,
            Coordination::Local => match (self.n_clusters, self.cluster_size) {
                (Some(c), _) => c,
                (None, Some(b)) if b > 0 => self.n_rrh / b,
                _ => self.n_rrh / DEFAULT_LC_CLUSTER_SIZE,
            },
        }
    }

    pub fn n_out(&self) -> usize {
        self.n_out.unwrap_or(3 * self.n_rrh)
    }

    pub fn m_out(&self) -> usize {
        self.m_out.unwrap_or(self.m_ant)
    }

    pub fn k_out(&self) -> usize {
        self.k_out.unwrap_or(self.n_out() * self.m_out() / 2)
    }

    /// Users per external RRH.
    pub fn users_per_out_rrh(&self) -> usize {
        self.k_out().div_ceil(self.n_out().max(1))
    }

    pub fn p_rrh_w(&self) -> f64 {
        dbm_to_watts(self.p_rrh_dbm)
    }

    pub fn noise_w(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }

    /// Training symbols per second, `K * PF`.
    pub fn omega(&self) -> f64 {
        self.n_users as f64 * self.pf_hz
    }

    /// Returns a copy with the sweep parameter set to `value`.
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<ScenarioConfig> {
        let mut cfg = self.clone();
        let as_count = |field: &'static str| -> Result<usize> {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(Error::config(field, format!("sweep value {value} is not a count")));
            }
            Ok(value as usize)
        };
        match param {
            SweepParam::PRrhDbm => cfg.p_rrh_dbm = value,
            SweepParam::PfHz => cfg.pf_hz = value,
            SweepParam::NUsers => cfg.n_users = as_count("n_users")?,
            SweepParam::ClusterSize => {
                cfg.cluster_size = Some(as_count("cluster_size")?);
                cfg.n_clusters = None;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_rrh;
        let m = self.m_ant;
        let k = self.n_users;
        if n == 0 {
            return Err(Error::config("n_rrh", "must be at least 1"));
        }
        if m == 0 {
            return Err(Error::config("m_ant", "must be at least 1"));
        }
        if k > n * m {
            return Err(Error::config("n_users", format!("K = {k} exceeds N·M = {}", n * m)));
        }
        let j = self.users_per_rrh();
        if j > m {
            return Err(Error::config("users_per_rrh", format!("J = {j} exceeds M = {m}")));
        }
        if k > n * j {
            return Err(Error::config("users_per_rrh", format!("K = {k} exceeds N·J = {}", n * j)));
        }
        check_positive("side_m", self.side_m)?;
        check_nonneg("alpha", self.alpha)?;
        check_nonneg("shadow_sigma_db", self.shadow_sigma_db)?;
        check_nonneg("rician_k", self.rician_k)?;
        check_unit("rho_t", self.rho_t)?;
        check_unit("rho_r", self.rho_r)?;
        let rho_tp = self.rho_t_prime();
        check_unit("rho_t_prime", rho_tp)?;
        if rho_tp > self.rho_t {
            return Err(Error::config("rho_t_prime", "must not exceed rho_t"));
        }

        let (c, b) = (self.n_clusters(), self.cluster_size());
        match self.coordination {
            Coordination::Global => {
                if self.n_clusters.is_some_and(|c| c != 1) {
                    return Err(Error::config("n_clusters", "GC requires C = 1"));
                }
                if self.cluster_size.is_some_and(|b| b != n) {
                    return Err(Error::config("cluster_size", "GC requires B = N"));
                }
            }
            Coordination::None => {
                if self.n_clusters.is_some_and(|c| c != n) {
                    return Err(Error::config("n_clusters", "NC requires C = N"));
                }
                if self.cluster_size.is_some_and(|b| b != 1) {
                    return Err(Error::config("cluster_size", "NC requires B = 1"));
                }
            }
            Coordination::Local => {
                if b == 0 || c == 0 {
                    return Err(Error::config("cluster_size", "C and B must be positive"));
                }
                if c * b != n {
                    return Err(Error::config(
                        "n_clusters",
                        format!("C·B ≠ N ({c}·{b} ≠ {n})"),
                    ));
                }
            }
        }

        let n_out = self.n_out();
        let m_out = self.m_out();
        let k_out = self.k_out();
        if n_out > 0 {
            if m_out == 0 {
                return Err(Error::config("m_out", "must be at least 1"));
            }
            if k_out > n_out * m_out {
                return Err(Error::config("k_out", "K_out exceeds N_out·M_out"));
            }
            if self.users_per_out_rrh() > m_out {
                return Err(Error::config("k_out", "more than M_out users per external RRH"));
            }
            if self.external_interference
                && self.coordination == Coordination::Local
                && self.precoder == PrecoderKind::ZeroForcing
                && !n_out.is_multiple_of(b)
            {
                return Err(Error::config("n_out", format!("N_out = {n_out} not divisible by B = {b}")));
            }
        } else if k_out > 0 {
            return Err(Error::config("k_out", "external users without external RRHs"));
        }

        check_nonneg("pf_hz", self.pf_hz)?;
        check_positive("w_sym", self.w_sym)?;
        if self.omega() >= self.w_sym {
            return Err(Error::config("pf_hz", "K·PF must be below w_sym"));
        }
        if !self.p_rrh_dbm.is_finite() {
            return Err(Error::config("p_rrh_dbm", "must be finite"));
        }
        if !self.noise_dbm.is_finite() {
            return Err(Error::config("noise_dbm", "must be finite"));
        }
        if self.n_drops == 0 {
            return Err(Error::config("n_drops", "must be at least 1"));
        }
        if self.sweep_param.is_some() && self.sweep_values.is_empty() {
            return Err(Error::config("sweep_values", "sweep_param set without values"));
        }
        if self.wmmse_max_iter == 0 {
            return Err(Error::config("wmmse_max_iter", "must be at least 1"));
        }
        check_positive("wmmse_tol", self.wmmse_tol)?;
        check_positive("wmmse_bisection_tol", self.wmmse_bisection_tol)?;
        Ok(())
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

fn check_positive(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} must be positive")))
    }
}

fn check_nonneg(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} must be nonnegative")))
    }
}

fn check_unit(field: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} must lie in [0, 1]")))
    }
}

pub type Point = [f64; 2];

pub fn distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Node positions of one drop and the distance matrices derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub side_m: f64,
    pub rrh_pos: Vec<Point>,
    pub user_pos: Vec<Point>,
    pub out_rrh_pos: Vec<Point>,
    pub out_user_pos: Vec<Point>,
    /// N x K.
    pub d_rrh_user: DMatrix<f64>,
    /// N_out x K.
    pub d_out_rrh_user: DMatrix<f64>,
    /// N_out x K_out.
    pub d_out_rrh_out_user: DMatrix<f64>,
    pub d_rrh_rrh: DMatrix<f64>,
    pub d_user_user: DMatrix<f64>,
    pub d_out_rrh_rrh: DMatrix<f64>,
    pub d_out_user_user: DMatrix<f64>,
    pub d_min_rrh: f64,
    pub d_min_user: f64,
    pub d_min_out_rrh: f64,
    pub d_min_out_user: f64,
}

impl Deployment {
    /// Builds the distance matrices for explicit positions.
    pub fn from_positions(
        side_m: f64,
        rrh_pos: Vec<Point>,
        user_pos: Vec<Point>,
        out_rrh_pos: Vec<Point>,
        out_user_pos: Vec<Point>,
    ) -> Deployment {
        let d_rrh_rrh = pairwise(&rrh_pos);
        let d_user_user = pairwise(&user_pos);
        let d_out_rrh_rrh = pairwise(&out_rrh_pos);
        let d_out_user_user = pairwise(&out_user_pos);
        Deployment {
            side_m,
            d_rrh_user: cross(&rrh_pos, &user_pos),
            d_out_rrh_user: cross(&out_rrh_pos, &user_pos),
            d_out_rrh_out_user: cross(&out_rrh_pos, &out_user_pos),
            d_min_rrh: min_offdiag(&d_rrh_rrh),
            d_min_user: min_offdiag(&d_user_user),
            d_min_out_rrh: min_offdiag(&d_out_rrh_rrh),
            d_min_out_user: min_offdiag(&d_out_user_user),
            d_rrh_rrh,
            d_user_user,
            d_out_rrh_rrh,
            d_out_user_user,
            rrh_pos,
            user_pos,
            out_rrh_pos,
            out_user_pos,
        }
    }
}

fn pairwise(p: &[Point]) -> DMatrix<f64> {
    DMatrix::from_fn(p.len(), p.len(), |i, j| if i == j { 0.0 } else { distance(p[i], p[j]) })
}

fn cross(a: &[Point], b: &[Point]) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), b.len(), |i, j| distance(a[i], b[j]))
}

/// Minimum off-diagonal entry; infinite when there is no pair.
fn min_offdiag(d: &DMatrix<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..d.nrows() {
        for j in (i + 1)..d.ncols() {
            best = best.min(d[(i, j)]);
        }
    }
    best
}

pub fn in_square(p: Point, side: f64) -> bool {
    (0.0..side).contains(&p[0]) && (0.0..side).contains(&p[1])
}

/// True for points of the eight-neighbor ring around the AD.
pub fn in_ring(p: Point, side: f64) -> bool {
    let inside_super = (-side..2.0 * side).contains(&p[0]) && (-side..2.0 * side).contains(&p[1]);
    inside_super && !in_square(p, side)
}

fn uniform_square<R: Rng>(rng: &mut R, side: f64) -> Point {
    [rng.random_range(0.0..side), rng.random_range(0.0..side)]
}

fn uniform_ring<R: Rng>(rng: &mut R, side: f64) -> Point {
    loop {
        let p = [
            rng.random_range(-side..2.0 * side),
            rng.random_range(-side..2.0 * side),
        ];
        if !in_square(p, side) {
            return p;
        }
    }
}

fn draw_nodes<R: Rng>(
    rng: &mut R,
    count: usize,
    mut sample: impl FnMut(&mut R) -> Point,
    mut accept: impl FnMut(Point, &[Point]) -> bool,
) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(count);
    while out.len() < count {
        let p = sample(rng);
        if accept(p, &out) {
            out.push(p);
        }
    }
    out
}

fn coincides(p: Point, others: &[Point]) -> bool {
    others.iter().any(|&q| distance(p, q) == 0.0)
}

fn too_close(p: Point, rrhs: &[Point]) -> bool {
    rrhs.iter().any(|&q| distance(p, q) < MIN_RRH_USER_DISTANCE_M)
}

/// Drops RRHs and users uniformly over the AD and the external ring.
///
/// Every node class draws from its own stream, so the in-AD layout does not
/// depend on the external tier's size. Users within 1 m of any RRH and
/// coincident nodes are redrawn.
pub fn drop_deployment(cfg: &ScenarioConfig, seed: u64) -> Deployment {
    let side = cfg.side_m;
    let mut rng = stream_rng(seed, Stream::RrhInside);
    let rrh = draw_nodes(&mut rng, cfg.n_rrh, |r| uniform_square(r, side), |p, prev| !coincides(p, prev));
    let mut rng = stream_rng(seed, Stream::RrhOutside);
    let out_rrh = draw_nodes(&mut rng, cfg.n_out(), |r| uniform_ring(r, side), |p, prev| !coincides(p, prev));

    let mut rng = stream_rng(seed, Stream::UserInside);
    let users = draw_nodes(
        &mut rng,
        cfg.n_users,
        |r| uniform_square(r, side),
        |p, prev| !coincides(p, prev) && !too_close(p, &rrh) && !too_close(p, &out_rrh),
    );
    let mut rng = stream_rng(seed, Stream::UserOutside);
    let out_users = draw_nodes(
        &mut rng,
        cfg.k_out(),
        |r| uniform_ring(r, side),
        |p, prev| !coincides(p, prev) && !too_close(p, &out_rrh),
    );

    Deployment::from_positions(side, rrh, users, out_rrh, out_users)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let cfg: ScenarioConfig = "".parse().unwrap();
        assert_eq!(cfg.n_rrh, 24);
        assert_eq!(cfg.m_ant, 4);
        assert_eq!(cfg.n_users, 48);
        assert_eq!(cfg.users_per_rrh(), 2);
        assert_eq!(cfg.side_m, 250.0);
        assert_eq!(cfg.rician_k, 1.0);
        assert_eq!(cfg.shadow_sigma_db, 8.0);
        assert_eq!(cfg.alpha, 3.76);
        assert_eq!(cfg.rho_t, 0.5);
        assert_eq!(cfg.rho_r, 0.5);
        assert_eq!(cfg.rho_t_prime(), 0.0625);
        assert_eq!(cfg.n_out(), 72);
        assert_eq!(cfg.m_out(), 4);
        assert_eq!(cfg.k_out(), 144);
    }

    #[test]
    fn local_coordination_accepts_matching_partition() {
        let cfg: ScenarioConfig = "coordination = \"LC\"\nn_clusters = 6\ncluster_size = 4\n"
            .parse()
            .unwrap();
        assert_eq!(cfg.n_clusters(), 6);
        assert_eq!(cfg.cluster_size(), 4);
    }

    #[test]
    fn local_coordination_rejects_bad_partition() {
        let err = "coordination = \"LC\"\nn_clusters = 5\ncluster_size = 5\n"
            .parse::<ScenarioConfig>()
            .unwrap_err();
        match err {
            Error::Config { field, message } => {
                assert_eq!(field, "n_clusters");
                assert!(message.contains("C·B ≠ N"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(matches!("bogus = 3".parse::<ScenarioConfig>(), Err(Error::Parse(_))));
    }

    #[test]
    fn trivial_partitions_follow_coordination() {
        let mut cfg = ScenarioConfig::default();
        assert_eq!((cfg.n_clusters(), cfg.cluster_size()), (1, 24));
        cfg.coordination = Coordination::None;
        assert_eq!((cfg.n_clusters(), cfg.cluster_size()), (24, 1));
        cfg.coordination = Coordination::Local;
        cfg.cluster_size = Some(8);
        assert_eq!((cfg.n_clusters(), cfg.cluster_size()), (3, 8));
        cfg.validate().unwrap();
    }

    #[test]
    fn gc_rejects_explicit_partition() {
        let mut cfg = ScenarioConfig {
            cluster_size: Some(4),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        cfg.cluster_size = Some(24);
        cfg.validate().unwrap();
    }

    #[test]
    fn user_bound_is_enforced() {
        let cfg = ScenarioConfig {
            n_users: 97,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rho_ordering_is_enforced() {
        let cfg = ScenarioConfig {
            rho_t_prime: Some(0.6),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn overhead_budget_is_enforced() {
        let cfg = ScenarioConfig {
            pf_hz: 14_000.0 / 48.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sweep_users_rederives_j() {
        let cfg = ScenarioConfig {
            m_ant: 8,
            ..Default::default()
        };
        let c24 = cfg.with_param(SweepParam::NUsers, 24.0).unwrap();
        assert_eq!(c24.users_per_rrh(), 1);
        assert!(cfg.with_param(SweepParam::NUsers, 2.5).is_err());
    }

    #[test]
    fn dbm_conversion() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(0.0) - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn deployment_is_deterministic() {
        let cfg = ScenarioConfig::default();
        assert_eq!(drop_deployment(&cfg, 42), drop_deployment(&cfg, 42));
        assert_ne!(drop_deployment(&cfg, 42).rrh_pos, drop_deployment(&cfg, 43).rrh_pos);
    }

    #[test]
    fn single_pair_distance() {
        let dep = Deployment::from_positions(10.0, vec![[1.0, 2.0]], vec![[4.0, 6.0]], vec![], vec![]);
        assert_eq!(dep.d_rrh_user.shape(), (1, 1));
        assert_eq!(dep.d_rrh_user[(0, 0)], 5.0);
        assert!(dep.d_min_rrh.is_infinite());
    }

    #[test]
    fn containment_and_minimum_distance() {
        let cfg = ScenarioConfig::default();
        for seed in 0..20 {
            let dep = drop_deployment(&cfg, seed);
            assert!(dep.rrh_pos.iter().chain(&dep.user_pos).all(|&p| in_square(p, cfg.side_m)));
            assert!(dep.out_rrh_pos.iter().chain(&dep.out_user_pos).all(|&p| in_ring(p, cfg.side_m)));
            assert!(dep.d_rrh_user.iter().all(|&d| d >= MIN_RRH_USER_DISTANCE_M));
            assert!(dep.d_out_rrh_user.iter().all(|&d| d >= MIN_RRH_USER_DISTANCE_M));
            assert!(dep.d_out_rrh_out_user.iter().all(|&d| d >= MIN_RRH_USER_DISTANCE_M));
            for d in [&dep.d_rrh_rrh, &dep.d_user_user] {
                assert_eq!(d, &d.transpose());
                for i in 0..d.nrows() {
                    for j in 0..d.ncols() {
                        assert_eq!(d[(i, j)] == 0.0, i == j);
                    }
                }
            }
        }
    }
}
