mod common;

use cran_core::linalg::repair_psd;
use cran_core::metrics::adjusted_sum_rate_with;
use cran_core::precoding::{rrh_powers, wmmse_scope};
use cran_core::{associate_users, ecdf, rician_params, sinr_terms, sum_rate, zfbf_cluster, CMatrix, WmmseOptions, C64};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn channel(seed: u64, rows: usize, cols: usize) -> CMatrix {
    common::gaussian_channel(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn association_partitions_users(seed: u64, n in 1usize..6, m in 1usize..4, jm in 1usize..4) {
        let j = jm.min(m);
        let k = n * j;
        let h = channel(seed, k, n * m);
        let a = associate_users(&h, n, m, j);
        let mut all: Vec<usize> = a.served.concat();
        all.sort();
        prop_assert_eq!(all, (0..k).collect::<Vec<_>>());
        prop_assert!(a.served.iter().all(|s| s.len() <= j));
        for (r, us) in a.served.iter().enumerate() {
            for &u in us {
                prop_assert_eq!(a.owner[u], Some(r));
            }
        }
    }

    #[test]
    fn zf_residual_is_tiny(seed: u64, k in 1usize..6, extra in 0usize..4) {
        let h = channel(seed, k, k + extra);
        let w = zfbf_cluster(&h, 2.0).unwrap();
        let hw = &h * &w;
        let diag_max = (0..k).map(|i| hw[(i, i)].norm()).fold(0.0, f64::max);
        for i in 0..k {
            prop_assert!((w.column(i).norm_squared() - 2.0 / k as f64).abs() < 1e-12);
            for j in (0..k).filter(|&j| j != i) {
                prop_assert!(hw[(i, j)].norm() < 1e-9 * diag_max);
            }
        }
    }

    #[test]
    fn zf_scaling_covariance(seed: u64, re in -3.0f64..3.0, im in 0.1f64..3.0) {
        let h = channel(seed, 3, 4);
        let g = C64::new(re, im);
        let w = zfbf_cluster(&h, 1.0).unwrap();
        let ws = zfbf_cluster(&h.map(|z| z * g), 1.0).unwrap();
        let phase = C64::from_polar(1.0, -g.arg());
        prop_assert!((ws - w.map(|z| z * phase)).camax() < 1e-9);
    }

    #[test]
    fn wmmse_is_monotone_and_feasible(seed: u64, n in 1usize..4, m in 1usize..4, noise_exp in -2.0f64..1.0) {
        let j = m.min(2);
        let h = channel(seed, n * j, n * m);
        let a = associate_users(&h, n, m, j);
        let groups: Vec<(usize, Vec<usize>)> = (0..n).map(|r| (r, a.served[r].clone())).collect();
        let p = 1.0;
        let sol = wmmse_scope(&h, m, &groups, j, p, 10f64.powf(noise_exp), &WmmseOptions::default()).unwrap();
        for pair in sol.diagnostics.objective_history.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-8);
        }
        let mut w = CMatrix::zeros(n * m, n * j);
        for (k, r, beam) in &sol.beams {
            for (i, x) in beam.iter().enumerate() {
                w[(r * m + i, *k)] = *x;
            }
        }
        for pw in rrh_powers(&w, m) {
            prop_assert!(pw <= p * (1.0 + 1e-6));
        }
    }

    #[test]
    fn split_reconstructs_denominator(seed: u64, k in 1usize..5, noise in 0.01f64..2.0) {
        let h = channel(seed, k, 6);
        let w = channel(seed ^ 1, 6, k);
        let hc = channel(seed ^ 2, k, 3);
        let wo = channel(seed ^ 3, 3, 2);
        let terms = sinr_terms(&h, &w, Some((&hc, &wo)), noise).unwrap();
        let hw = &h * &w;
        let hcw = &hc * &wo;
        for (i, t) in terms.iter().enumerate() {
            let total: f64 = hw.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>() - hw[(i, i)].norm_sqr()
                + hcw.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>()
                + noise;
            prop_assert!((t.denominator() - total).abs() <= 1e-12 * total);
            prop_assert!(t.intra >= 0.0 && t.external >= 0.0);
        }
    }

    #[test]
    fn sum_rate_is_monotone(mut g in proptest::collection::vec(0.0f64..100.0, 1..10), i in 0usize..10, bump in 0.001f64..10.0) {
        let before = sum_rate(&g).unwrap();
        let i = i % g.len();
        g[i] += bump;
        prop_assert!(sum_rate(&g).unwrap() > before);
    }

    #[test]
    fn adjusted_never_exceeds_raw(raw in 0.0f64..1000.0, k in 1usize..100, pf in 0.0f64..100.0, w in 1.0f64..1e5) {
        match adjusted_sum_rate_with(raw, k, pf, w) {
            Ok(adj) => {
                prop_assert!(adj <= raw);
                if pf == 0.0 {
                    prop_assert_eq!(adj, raw);
                } else if raw > 0.0 {
                    prop_assert!(adj < raw);
                }
            }
            Err(_) => prop_assert!(k as f64 * pf >= w),
        }
    }

    #[test]
    fn rician_unit_power(k in 0.0f64..100.0) {
        let (mu, sigma) = rician_params(k).unwrap();
        prop_assert!((mu * mu + 2.0 * sigma * sigma - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repair_is_idempotent_on_psd(seed: u64, n in 1usize..6) {
        let g = channel(seed, n, n + 2);
        let cov = (&g * g.adjoint()).map(|z| z.re);
        let d: Vec<f64> = (0..n).map(|i| cov[(i, i)].sqrt()).collect();
        let corr = DMatrix::from_fn(n, n, |i, j| cov[(i, j)] / (d[i] * d[j]));
        let once = repair_psd(&corr);
        let twice = repair_psd(&once);
        let e1 = SymmetricEigen::new(once).eigenvalues;
        let e2 = SymmetricEigen::new(twice).eigenvalues;
        let e0 = SymmetricEigen::new(corr).eigenvalues;
        let mut a: Vec<f64> = e0.iter().copied().collect();
        let mut b: Vec<f64> = e1.iter().copied().collect();
        let mut c: Vec<f64> = e2.iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        c.sort_by(f64::total_cmp);
        for i in 0..n {
            prop_assert!((a[i] - b[i]).abs() <= 1e-12);
            prop_assert!((b[i] - c[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn ecdf_is_a_step_function(xs in proptest::collection::vec(-1e3f64..1e3, 1..50)) {
        let e = ecdf(&xs).unwrap();
        prop_assert_eq!(e.len(), xs.len());
        for pair in e.windows(2) {
            prop_assert!(pair[0].0 <= pair[1].0 && pair[0].1 < pair[1].1);
        }
        prop_assert_eq!(e.last().unwrap().1, 1.0);
    }
}

#[test]
fn ecdf_of_uniform_samples_hugs_identity() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
    let dev = ecdf(&xs)
        .unwrap()
        .iter()
        .map(|&(v, p)| (p - v).abs())
        .fold(0.0, f64::max);
    assert!(dev < 0.03);
}
