//! Independent re-implementations and fixtures shared by the integration tests.
#![allow(dead_code)]

use cran_core::{Association, CMatrix, C64};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian_channel<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// RRH-by-RRH association written as repeated arg-max scans.
pub fn oracle_association(h: &CMatrix, n_rrh: usize, m_ant: usize, per_rrh: usize) -> Vec<Vec<usize>> {
    let k_total = h.nrows();
    let mut taken = vec![false; k_total];
    let mut out = vec![Vec::new(); n_rrh];
    for (n, list) in out.iter_mut().enumerate() {
        for _ in 0..per_rrh {
            let mut pick: Option<usize> = None;
            let mut pick_gain = f64::NEG_INFINITY;
            for k in 0..k_total {
                if taken[k] {
                    continue;
                }
                let mut g = 0.0;
                for m in 0..m_ant {
                    let z = h[(k, n * m_ant + m)];
                    g += z.re * z.re + z.im * z.im;
                }
                if g > pick_gain {
                    pick_gain = g;
                    pick = Some(k);
                }
            }
            match pick {
                Some(k) => {
                    taken[k] = true;
                    list.push(k);
                }
                None => break,
            }
        }
    }
    out
}

/// Sequential greedy clustering: each cluster starts empty and repeatedly
/// takes the unused RRH with the highest score of the grown cluster.
pub fn oracle_clustering(
    n_rrh: usize,
    n_clusters: usize,
    size: usize,
    served: &[Vec<usize>],
    mut score: impl FnMut(&[usize], &[usize]) -> Option<f64>,
) -> Option<Vec<Vec<usize>>> {
    let mut used = vec![false; n_rrh];
    let mut result = Vec::new();
    for _ in 0..n_clusters {
        let mut cluster: Vec<usize> = Vec::new();
        for _ in 0..size {
            let mut best_n = usize::MAX;
            let mut best_s = f64::NEG_INFINITY;
            for n in 0..n_rrh {
                if used[n] {
                    continue;
                }
                let mut trial = cluster.clone();
                trial.push(n);
                let mut users = Vec::new();
                for &r in &trial {
                    users.extend_from_slice(&served[r]);
                }
                if let Some(s) = score(&trial, &users) {
                    if s > best_s {
                        best_s = s;
                        best_n = n;
                    }
                }
            }
            if best_n == usize::MAX {
                return None;
            }
            used[best_n] = true;
            cluster.push(best_n);
        }
        result.push(cluster);
    }
    Some(result)
}

pub fn association_from(served: Vec<Vec<usize>>, n_users: usize) -> Association {
    let mut owner = vec![None; n_users];
    for (n, us) in served.iter().enumerate() {
        for &k in us {
            owner[k] = Some(n);
        }
    }
    Association { served, owner }
}

/// Kolmogorov-Smirnov statistic of `xs` against uniform(0, 1).
pub fn ks_uniform(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let lo = x - i as f64 / n;
            let hi = (i + 1) as f64 / n - x;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

/// Two-sided 1% critical value of the KS statistic for large `n`.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Mean and standard error of paired differences `a - b`.
pub fn paired_gap(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    cran_core::harness::mean_and_se(&d)
}
