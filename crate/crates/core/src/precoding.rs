//! Linear transmit precoders: per-cluster zero-forcing and iterative WMMSE
//! coordinated beamforming with per-RRH power constraints.
//!
//! Precoders are `(antennas x users)` matrices with the transmit power folded
//! into the column norms, so `|[H W]_{k,j}|^2` is the power user `k` receives
//! from user `j`'s stream.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::association::Association;
use crate::channel::ChannelSet;
use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix, CVector, C64};
use crate::scenario::ScenarioConfig;

/// Gram matrices with a larger condition number are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Channels weaker than this are considered absent.
const ZERO_CHANNEL_NORM: f64 = 1e-15;

/// Zero-forcing precoder for one cluster.
///
/// Computes the right pseudo-inverse `H^H (H H^H)^-1`, normalizes each column
/// to unit norm and scales it to `p_budget / K_c`. Rows of `h_c` are
/// equilibrated first; this does not change the normalized columns but keeps
/// the Gram matrix well conditioned when users see very different path loss.
pub fn zfbf_cluster(h_c: &CMatrix, p_budget: f64) -> Result<CMatrix> {
    let (k_c, n_ant) = h_c.shape();
    if k_c == 0 {
        return Ok(CMatrix::zeros(n_ant, 0));
    }
    if k_c > n_ant {
        return Err(Error::DimensionMismatch(format!(
            "zero-forcing {k_c} users with {n_ant} antennas"
        )));
    }
    let mut eq = h_c.clone();
    for mut row in eq.row_iter_mut() {
        let norm = row.norm();
        if norm < ZERO_CHANNEL_NORM {
            return Err(Error::SingularChannel { cond: f64::INFINITY });
        }
        row /= C64::new(norm, 0.0);
    }
    let gram = &eq * eq.adjoint();
    let ev = hermitian_eigenvalues(&gram);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::SingularChannel { cond });
    }
    let chol = gram
        .cholesky()
        .ok_or(Error::SingularChannel { cond })?;
    // (G^-1 H)^H = H^H G^-1 since G is Hermitian.
    let mut w = chol.solve(&eq).adjoint();
    let scale = (p_budget / k_c as f64).sqrt();
    for mut col in w.column_iter_mut() {
        let norm = col.norm();
        col *= C64::new(scale / norm, 0.0);
    }
    Ok(w)
}

/// Users of each cluster: the RRHs' associated users, or everyone when no
/// association is given (global zero-forcing).
fn cluster_users(rrhs: &[usize], assoc: Option<&Association>, n_users: usize, n_clusters: usize) -> Result<Vec<usize>> {
    match assoc {
        Some(a) => Ok(a.users_of(rrhs)),
        None if n_clusters == 1 => Ok((0..n_users).collect()),
        None => Err(Error::Internal("clustered precoding without association".into())),
    }
}

fn antenna_columns(rrhs: &[usize], m_ant: usize) -> Vec<usize> {
    rrhs.iter().flat_map(|&n| n * m_ant..(n + 1) * m_ant).collect()
}

/// Zero-forcing over every cluster of `clus`, each with budget `B * p_rrh`.
pub fn zfbf_precoder(
    h: &CMatrix,
    clus: &Clustering,
    assoc: Option<&Association>,
    m_ant: usize,
    p_rrh: f64,
) -> Result<CMatrix> {
    let mut w = CMatrix::zeros(h.ncols(), h.nrows());
    for rrhs in &clus.clusters {
        let users = cluster_users(rrhs, assoc, h.nrows(), clus.clusters.len())?;
        if users.is_empty() {
            continue;
        }
        let cols = antenna_columns(rrhs, m_ant);
        let sub = h.select_rows(&users).select_columns(&cols);
        let wc = zfbf_cluster(&sub, rrhs.len() as f64 * p_rrh)?;
        for (j, &k) in users.iter().enumerate() {
            for (a, &col) in cols.iter().enumerate() {
                w[(col, k)] = wc[(a, j)];
            }
        }
    }
    Ok(w)
}

/// In-AD zero-forcing for the scenario.
pub fn zfbf_all(
    ch: &ChannelSet,
    clus: &Clustering,
    assoc: Option<&Association>,
    cfg: &ScenarioConfig,
) -> Result<CMatrix> {
    zfbf_precoder(&ch.h, clus, assoc, cfg.m_ant, cfg.p_rrh_w())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WmmseOptions {
    pub max_iter: usize,
    /// Stop when the objective changes by less than `tol * max(|f|, 1)`.
    pub tol: f64,
    /// Relative power accuracy of the multiplier bisection.
    pub bisection_tol: f64,
}

impl Default for WmmseOptions {
    fn default() -> Self {
        WmmseOptions {
            max_iter: 100,
            tol: 1e-5,
            bisection_tol: 1e-8,
        }
    }
}

impl WmmseOptions {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        WmmseOptions {
            max_iter: cfg.wmmse_max_iter,
            tol: cfg.wmmse_tol,
            bisection_tol: cfg.wmmse_bisection_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WmmseDiagnostics {
    pub iterations: usize,
    pub objective: f64,
    /// Weighted sum-MSE objective at the start and after every iteration.
    pub objective_history: Vec<f64>,
    pub converged: bool,
}

/// Beamformers of one coordination scope.
#[derive(Debug, Clone)]
pub struct ScopeSolution {
    /// `(user, owner RRH, beamformer)`.
    pub beams: Vec<(usize, usize, CVector)>,
    /// In-scope SINR per entry of `beams`.
    pub sinr: Vec<f64>,
    pub diagnostics: WmmseDiagnostics,
}

impl ScopeSolution {
    pub fn sum_rate(&self) -> f64 {
        self.sinr.iter().map(|s| (1.0 + s).log2()).sum()
    }
}

/// Per-scope problem data. `links[i][r]` is user `i`'s channel toward the
/// `r`-th scope RRH, as a column of length `M`.
struct ScopeProblem {
    users: Vec<usize>,
    owner_global: Vec<usize>,
    owner: Vec<usize>,
    links: Vec<Vec<CVector>>,
    active: Vec<bool>,
    n_rrh: usize,
    noise: f64,
    p_rrh: f64,
}

struct LinkStats {
    /// `cross[i][j]`: amplitude at user `i` of user `j`'s beam.
    cross: Vec<Vec<C64>>,
    total: Vec<f64>,
}

impl ScopeProblem {
    fn stats(&self, v: &[CVector]) -> LinkStats {
        let u = self.users.len();
        let mut cross = vec![vec![C64::new(0.0, 0.0); u]; u];
        let mut total = vec![self.noise; u];
        for i in 0..u {
            for j in 0..u {
                let a = self.links[i][self.owner[j]].dot(&v[j]);
                cross[i][j] = a;
                total[i] += a.norm_sqr();
            }
        }
        LinkStats { cross, total }
    }

    fn sinr(&self, st: &LinkStats) -> Vec<f64> {
        (0..self.users.len())
            .map(|i| {
                let s = st.cross[i][i].norm_sqr();
                s / (st.total[i] - s)
            })
            .collect()
    }

    /// Weighted sum-MSE with MMSE receivers and optimal weights,
    /// `sum_k (1 - ln w_k)` over active users.
    fn objective(&self, st: &LinkStats) -> f64 {
        self.sinr(st)
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(s, _)| 1.0 - s.ln_1p())
            .sum()
    }
}

/// Solves `min sum ||v||` terms for one RRH: `v_i = (A + mu I)^+ b_i` with the
/// smallest `mu >= 0` that keeps the RRH's power within `p_max`.
fn rrh_update(a: &CMatrix, bs: &[CVector], p_max: f64, tol: f64) -> Result<Vec<CVector>> {
    let eig = SymmetricEigen::new(a.clone());
    let q = &eig.eigenvectors;
    let lambda: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let l_max = lambda.iter().copied().fold(0.0, f64::max);
    let floor = 1e-12 * l_max;
    let coeffs: Vec<CVector> = bs.iter().map(|b| q.adjoint() * b).collect();

    let power = |mu: f64| -> f64 {
        coeffs
            .iter()
            .flat_map(|c| c.iter().zip(&lambda))
            .map(|(c, &l)| {
                if mu == 0.0 && l <= floor {
                    0.0
                } else {
                    c.norm_sqr() / (l + mu).powi(2)
                }
            })
            .sum()
    };
    let beams = |mu: f64| -> Vec<CVector> {
        coeffs
            .iter()
            .map(|c| {
                let scaled = CVector::from_iterator(
                    c.len(),
                    c.iter().zip(&lambda).map(|(c, &l)| {
                        if mu == 0.0 && l <= floor {
                            C64::new(0.0, 0.0)
                        } else {
                            c / (l + mu)
                        }
                    }),
                );
                q * scaled
            })
            .collect()
    };

    if power(0.0) <= p_max {
        return Ok(beams(0.0));
    }
    let b_energy: f64 = bs.iter().map(|b| b.norm_squared()).sum();
    let mut lo = 0.0;
    let mut hi = (b_energy / p_max).sqrt();
    if power(hi) > p_max * (1.0 + 1e-12) {
        return Err(Error::Internal(format!(
            "multiplier bracket failed: power {} at mu = {hi}",
            power(hi)
        )));
    }
    for _ in 0..200 {
        if power(hi) >= p_max * (1.0 - tol) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if power(mid) > p_max {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(beams(hi))
}

/// Runs WMMSE within one coordination scope.
///
/// `groups` lists each scope RRH with the users it owns. Every user is served
/// only by its owner; interference from outside the scope is ignored.
pub fn wmmse_scope(
    h: &CMatrix,
    m_ant: usize,
    groups: &[(usize, Vec<usize>)],
    per_rrh: usize,
    p_rrh: f64,
    noise: f64,
    opts: &WmmseOptions,
) -> Result<ScopeSolution> {
    let mut users = Vec::new();
    let mut owner = Vec::new();
    let mut owner_global = Vec::new();
    for (r, (n, us)) in groups.iter().enumerate() {
        for &k in us {
            users.push(k);
            owner.push(r);
            owner_global.push(*n);
        }
    }
    let links: Vec<Vec<CVector>> = users
        .iter()
        .map(|&k| {
            groups
                .iter()
                .map(|(n, _)| {
                    CVector::from_iterator(m_ant, (0..m_ant).map(|m| h[(k, n * m_ant + m)]))
                })
                .collect()
        })
        .collect();
    let active: Vec<bool> = (0..users.len())
        .map(|i| links[i][owner[i]].norm() >= ZERO_CHANNEL_NORM)
        .collect();
    let prob = ScopeProblem {
        users,
        owner_global,
        owner,
        links,
        active,
        n_rrh: groups.len(),
        noise,
        p_rrh,
    };
    solve_scope(&prob, per_rrh.max(1), opts)
}

fn solve_scope(prob: &ScopeProblem, per_rrh: usize, opts: &WmmseOptions) -> Result<ScopeSolution> {
    let n_users = prob.users.len();
    let start = (prob.p_rrh / per_rrh as f64).sqrt();
    let mut v: Vec<CVector> = (0..n_users)
        .map(|i| {
            let g = &prob.links[i][prob.owner[i]];
            if prob.active[i] {
                g.conjugate() * C64::new(start / g.norm(), 0.0)
            } else {
                CVector::zeros(g.len())
            }
        })
        .collect();

    let mut st = prob.stats(&v);
    let mut obj = prob.objective(&st);
    let mut history = vec![obj];
    let mut converged = false;
    let mut iterations = 0;
    let mut best = (obj, v.clone());

    while iterations < opts.max_iter && n_users > 0 {
        iterations += 1;
        let mut u = vec![C64::new(0.0, 0.0); n_users];
        let mut w = vec![0.0; n_users];
        for i in (0..n_users).filter(|&i| prob.active[i]) {
            let signal = st.cross[i][i];
            u[i] = signal / st.total[i];
            w[i] = st.total[i] / (st.total[i] - signal.norm_sqr());
        }
        let mut next = v.clone();
        for r in 0..prob.n_rrh {
            let own: Vec<usize> = (0..n_users)
                .filter(|&i| prob.owner[i] == r && prob.active[i])
                .collect();
            if own.is_empty() {
                continue;
            }
            let m = prob.links[own[0]][r].len();
            let mut a = CMatrix::zeros(m, m);
            for i in (0..n_users).filter(|&i| prob.active[i]) {
                let g = &prob.links[i][r];
                let c = w[i] * u[i].norm_sqr();
                // conj(g) g^T
                a += g.conjugate() * g.transpose() * C64::new(c, 0.0);
            }
            let bs: Vec<CVector> = own
                .iter()
                .map(|&i| prob.links[i][r].conjugate() * (u[i] * w[i]))
                .collect();
            for (i, beam) in own.iter().zip(rrh_update(&a, &bs, prob.p_rrh, opts.bisection_tol)?) {
                next[*i] = beam;
            }
        }
        v = next;
        st = prob.stats(&v);
        let next_obj = prob.objective(&st);
        history.push(next_obj);
        if next_obj < best.0 {
            best = (next_obj, v.clone());
        }
        let change = (obj - next_obj).abs();
        obj = next_obj;
        if change <= opts.tol * obj.abs().max(1.0) {
            converged = true;
            break;
        }
    }

    let (best_obj, best_v) = best;
    let st = prob.stats(&best_v);
    let sinr = prob.sinr(&st);
    Ok(ScopeSolution {
        beams: (0..n_users)
            .map(|i| (prob.users[i], prob.owner_global[i], best_v[i].clone()))
            .collect(),
        sinr,
        diagnostics: WmmseDiagnostics {
            iterations,
            objective: best_obj,
            objective_history: history,
            converged: converged || n_users == 0,
        },
    })
}

/// WMMSE coordinated beamforming with one scope per cluster.
pub fn wmmse_precoder(
    h: &CMatrix,
    clus: &Clustering,
    assoc: &Association,
    m_ant: usize,
    per_rrh: usize,
    p_rrh: f64,
    noise: f64,
    opts: &WmmseOptions,
) -> Result<(CMatrix, Vec<WmmseDiagnostics>)> {
    let mut w = CMatrix::zeros(h.ncols(), h.nrows());
    let mut diags = Vec::with_capacity(clus.clusters.len());
    for rrhs in &clus.clusters {
        let groups: Vec<(usize, Vec<usize>)> =
            rrhs.iter().map(|&n| (n, assoc.served[n].clone())).collect();
        let sol = wmmse_scope(h, m_ant, &groups, per_rrh, p_rrh, noise, opts)?;
        for (k, n, beam) in &sol.beams {
            for (m, x) in beam.iter().enumerate() {
                w[(n * m_ant + m, *k)] = *x;
            }
        }
        diags.push(sol.diagnostics);
    }
    Ok((w, diags))
}

/// In-AD WMMSE for the scenario.
pub fn wmmse_cb(
    ch: &ChannelSet,
    clus: &Clustering,
    assoc: &Association,
    cfg: &ScenarioConfig,
    opts: &WmmseOptions,
) -> Result<(CMatrix, Vec<WmmseDiagnostics>)> {
    wmmse_precoder(
        &ch.h,
        clus,
        assoc,
        cfg.m_ant,
        cfg.users_per_rrh(),
        cfg.p_rrh_w(),
        cfg.noise_w(),
        opts,
    )
}

/// Precoders of the AD and of the external tier.
#[derive(Debug, Clone)]
pub struct PrecodeResult {
    pub w: CMatrix,
    /// Absent when external interference is off.
    pub w_out: Option<CMatrix>,
    pub diagnostics: Vec<WmmseDiagnostics>,
}

/// Transmit power of each RRH, `||rows of w owned by n||_F^2`.
pub fn rrh_powers(w: &CMatrix, m_ant: usize) -> Vec<f64> {
    (0..w.nrows() / m_ant.max(1))
        .map(|n| w.rows(n * m_ant, m_ant).norm_squared())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| {
            C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        })
    }

    #[test]
    fn identity_channel_gives_scaled_unit_vectors() {
        let w = zfbf_cluster(&CMatrix::identity(2, 2), 4.0).unwrap();
        let s = 2f64.sqrt();
        assert!((w - CMatrix::identity(2, 2) * C64::new(s, 0.0)).camax() < 1e-14);
    }

    #[test]
    fn rank_deficient_channel_is_singular() {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        assert!(matches!(zfbf_cluster(&h, 1.0), Err(Error::SingularChannel { .. })));
    }

    #[test]
    fn too_many_users_is_rejected() {
        let h = CMatrix::identity(3, 2);
        assert!(zfbf_cluster(&h, 1.0).is_err());
    }

    #[test]
    fn zero_forcing_nulls_interference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let h = random_matrix(&mut rng, 5, 8);
            let w = zfbf_cluster(&h, 3.0).unwrap();
            let hw = &h * &w;
            let bound = 1e-9 * h.norm() * w.norm();
            for i in 0..5 {
                for j in 0..5 {
                    if i != j {
                        assert!(hw[(i, j)].norm() < bound);
                    }
                }
                assert!((w.column(i).norm_squared() - 0.6).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_forcing_scaling_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random_matrix(&mut rng, 3, 4);
        let gamma = C64::from_polar(1e-4, 0.7);
        let w1 = zfbf_cluster(&h, 1.0).unwrap();
        let w2 = zfbf_cluster(&(&h * gamma), 1.0).unwrap();
        let phase = C64::from_polar(1.0, -0.7);
        assert!((w1 * phase - w2).camax() < 1e-10);
    }

    #[test]
    fn single_user_wmmse_is_full_power_matched_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_matrix(&mut rng, 1, 2);
        let sol = wmmse_scope(&h, 2, &[(0, vec![0])], 1, 2.0, 1.0, &WmmseOptions::default()).unwrap();
        let v = &sol.beams[0].2;
        let mf = h.row(0).adjoint();
        let cos = (mf.dotc(v)).norm() / (mf.norm() * v.norm());
        assert!(cos.min(1.0).acos() < 1e-6);
        assert!((v.norm_squared() - 2.0).abs() < 2.0 * 1e-6);
        assert!(sol.diagnostics.converged);
    }

    #[test]
    fn wmmse_objective_is_monotone_and_power_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let h = random_matrix(&mut rng, 6, 12);
            let groups = vec![(0, vec![0, 1]), (1, vec![2, 3]), (2, vec![4, 5])];
            let sol = wmmse_scope(&h, 4, &groups, 2, 1.0, 0.1, &WmmseOptions::default()).unwrap();
            for pair in sol.diagnostics.objective_history.windows(2) {
                assert!(pair[1] <= pair[0] + 1e-8, "{pair:?}");
            }
            let mut power = [0.0; 3];
            for (_, n, b) in &sol.beams {
                power[*n] += b.norm_squared();
            }
            assert!(power.iter().all(|&p| p <= 1.0 + 1e-6));
        }
    }

    #[test]
    fn degenerate_user_gets_zero_beam() {
        let mut h = CMatrix::from_element(2, 2, C64::new(1.0, 0.5));
        h[(1, 0)] = C64::new(0.0, 0.0);
        h[(1, 1)] = C64::new(0.0, 0.0);
        let sol = wmmse_scope(&h, 2, &[(0, vec![0, 1])], 2, 1.0, 1.0, &WmmseOptions::default()).unwrap();
        assert_eq!(sol.beams[1].2.norm(), 0.0);
        assert!(sol.beams[0].2.norm() > 0.0);
    }
}
