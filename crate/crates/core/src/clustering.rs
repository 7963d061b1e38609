//! RRH clustering: the trivial GC/NC partitions and the greedy sum-rate
//! driven partition used under local coordination.

use serde::Serialize;

use crate::association::Association;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::precoding::{wmmse_scope, zfbf_cluster, WmmseOptions};
use crate::scenario::{Coordination, PrecoderKind, ScenarioConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clustering {
    pub clusters: Vec<Vec<usize>>,
    pub member_of: Vec<usize>,
}

impl Clustering {
    pub fn from_clusters(clusters: Vec<Vec<usize>>, n_rrh: usize) -> Clustering {
        let mut member_of = vec![usize::MAX; n_rrh];
        for (c, rrhs) in clusters.iter().enumerate() {
            for &n in rrhs {
                member_of[n] = c;
            }
        }
        Clustering { clusters, member_of }
    }

    pub fn single(n_rrh: usize) -> Clustering {
        Clustering::from_clusters(vec![(0..n_rrh).collect()], n_rrh)
    }

    pub fn singletons(n_rrh: usize) -> Clustering {
        Clustering::from_clusters((0..n_rrh).map(|n| vec![n]).collect(), n_rrh)
    }

    /// Disjoint cover of `0..n_rrh` with equally sized clusters.
    pub fn is_valid_partition(&self, n_rrh: usize) -> bool {
        let mut seen = vec![false; n_rrh];
        let size = self.clusters.first().map_or(0, Vec::len);
        for rrhs in &self.clusters {
            if rrhs.len() != size {
                return false;
            }
            for &n in rrhs {
                if n >= n_rrh || seen[n] {
                    return false;
                }
                seen[n] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// One cluster for GC, singletons for NC.
pub fn cluster_trivial(cfg: &ScenarioConfig) -> Result<Clustering> {
    match cfg.coordination {
        Coordination::Global => Ok(Clustering::single(cfg.n_rrh)),
        Coordination::None => Ok(Clustering::singletons(cfg.n_rrh)),
        Coordination::Local => Err(Error::Internal("trivial clustering requested under LC".into())),
    }
}

/// Greedy clustering.
///
/// Clusters are built one after another. A new cluster starts from the free
/// RRH with the best singleton score and then repeatedly absorbs the free RRH
/// that maximizes `rate_eval` of the enlarged cluster, until it holds
/// `cluster_size` RRHs. `rate_eval(rrhs, users)` returns `None` for an
/// infeasible candidate. Ties go to the lowest RRH index.
pub fn cluster_greedy<F>(
    n_rrh: usize,
    n_clusters: usize,
    cluster_size: usize,
    assoc: &Association,
    mut rate_eval: F,
) -> Result<Clustering>
where
    F: FnMut(&[usize], &[usize]) -> Option<f64>,
{
    if n_clusters * cluster_size != n_rrh || cluster_size == 0 {
        return Err(Error::Domain(format!(
            "cannot split {n_rrh} RRHs into {n_clusters} clusters of {cluster_size}"
        )));
    }
    let mut free = vec![true; n_rrh];
    let mut clusters = Vec::with_capacity(n_clusters);
    for _ in 0..n_clusters {
        let mut current: Vec<usize> = Vec::with_capacity(cluster_size);
        while current.len() < cluster_size {
            let mut best: Option<(usize, f64)> = None;
            for n in (0..n_rrh).filter(|&n| free[n]) {
                current.push(n);
                let users = assoc.users_of(&current);
                let score = rate_eval(&current, &users);
                current.pop();
                if let Some(s) = score {
                    if best.is_none_or(|(_, b)| s > b) {
                        best = Some((n, s));
                    }
                }
            }
            let (n, _) = best.ok_or(Error::SingularChannel { cond: f64::INFINITY })?;
            free[n] = false;
            current.push(n);
        }
        clusters.push(current);
    }
    Ok(Clustering::from_clusters(clusters, n_rrh))
}

/// Sum rate of a candidate cluster served in isolation: no interference from
/// RRHs outside the candidate and no external interference.
#[derive(Debug, Clone)]
pub struct IsolatedRate<'a> {
    pub h: &'a CMatrix,
    pub assoc: &'a Association,
    pub m_ant: usize,
    pub per_rrh: usize,
    pub p_rrh: f64,
    pub noise: f64,
    pub precoder: PrecoderKind,
    pub wmmse: WmmseOptions,
}

impl<'a> IsolatedRate<'a> {
    pub fn new(
        h: &'a CMatrix,
        assoc: &'a Association,
        m_ant: usize,
        per_rrh: usize,
        cfg: &ScenarioConfig,
    ) -> Self {
        IsolatedRate {
            h,
            assoc,
            m_ant,
            per_rrh,
            p_rrh: cfg.p_rrh_w(),
            noise: cfg.noise_w(),
            precoder: cfg.precoder,
            wmmse: WmmseOptions::from_config(cfg),
        }
    }

    /// `users` must be the users associated with `rrhs`.
    pub fn eval(&self, rrhs: &[usize], users: &[usize]) -> Option<f64> {
        if users.is_empty() {
            return Some(0.0);
        }
        match self.precoder {
            PrecoderKind::ZeroForcing => {
                let cols: Vec<usize> = rrhs
                    .iter()
                    .flat_map(|&n| n * self.m_ant..(n + 1) * self.m_ant)
                    .collect();
                if users.len() > cols.len() {
                    return None;
                }
                let sub = self.h.select_rows(users).select_columns(&cols);
                let w = zfbf_cluster(&sub, rrhs.len() as f64 * self.p_rrh).ok()?;
                let hw = &sub * &w;
                Some(
                    (0..users.len())
                        .map(|i| (1.0 + hw[(i, i)].norm_sqr() / self.noise).log2())
                        .sum(),
                )
            }
            PrecoderKind::Coordinated => {
                let groups: Vec<(usize, Vec<usize>)> = rrhs
                    .iter()
                    .map(|&n| (n, self.assoc.served[n].clone()))
                    .collect();
                wmmse_scope(self.h, self.m_ant, &groups, self.per_rrh, self.p_rrh, self.noise, &self.wmmse)
                    .ok()
                    .map(|s| s.sum_rate())
            }
        }
    }
}

/// Clustering for a coordination mode; greedy with [`IsolatedRate`] under LC.
pub fn cluster_for(
    h: &CMatrix,
    assoc: Option<&Association>,
    n_rrh: usize,
    m_ant: usize,
    per_rrh: usize,
    coordination: Coordination,
    cfg: &ScenarioConfig,
) -> Result<Clustering> {
    match coordination {
        Coordination::Global => Ok(Clustering::single(n_rrh)),
        Coordination::None => Ok(Clustering::singletons(n_rrh)),
        Coordination::Local => {
            let assoc = assoc.ok_or_else(|| Error::Internal("LC clustering needs an association".into()))?;
            let b = cfg.cluster_size();
            let eval = IsolatedRate::new(h, assoc, m_ant, per_rrh, cfg);
            cluster_greedy(n_rrh, n_rrh / b, b, assoc, |rrhs, users| eval.eval(rrhs, users))
        }
    }
}
