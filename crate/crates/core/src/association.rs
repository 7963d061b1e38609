//! Greedy RRH-centric user association.

use crate::linalg::CMatrix;

/// Which users each RRH serves.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Association {
    /// Per RRH, its users in selection order.
    pub served: Vec<Vec<usize>>,
    /// Per user, the serving RRH (`None` if unassigned).
    pub owner: Vec<Option<usize>>,
}

impl Association {
    pub fn users_of(&self, rrhs: &[usize]) -> Vec<usize> {
        rrhs.iter().flat_map(|&n| self.served[n].iter().copied()).collect()
    }
}

/// Squared norm of user `k`'s channel toward the `m_ant` antennas of RRH `n`.
pub fn link_gain(h: &CMatrix, k: usize, n: usize, m_ant: usize) -> f64 {
    (0..m_ant).map(|m| h[(k, n * m_ant + m)].norm_sqr()).sum()
}

/// Visits RRHs in index order; each takes the `per_rrh` unassigned users with
/// the largest [`link_gain`] toward it, ties going to the lower user index.
pub fn associate_users(h: &CMatrix, n_rrh: usize, m_ant: usize, per_rrh: usize) -> Association {
    let n_users = h.nrows();
    let mut assigned = vec![false; n_users];
    let mut served = vec![Vec::new(); n_rrh];
    let mut owner = vec![None; n_users];
    let mut left = n_users;
    for n in 0..n_rrh {
        if left == 0 {
            break;
        }
        let mut cand: Vec<(usize, f64)> = (0..n_users)
            .filter(|&k| !assigned[k])
            .map(|k| (k, link_gain(h, k, n, m_ant)))
            .collect();
        // Stable sort keeps lower indices first among equal gains.
        cand.sort_by(|a, b| b.1.total_cmp(&a.1));
        for &(k, _) in cand.iter().take(per_rrh) {
            assigned[k] = true;
            owner[k] = Some(n);
            served[n].push(k);
            left -= 1;
        }
    }
    Association { served, owner }
}

/// In-AD association under the scenario's N, M and J.
pub fn associate(ch: &crate::channel::ChannelSet, cfg: &crate::scenario::ScenarioConfig) -> Association {
    associate_users(&ch.h, cfg.n_rrh, cfg.m_ant, cfg.users_per_rrh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn real(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(rows, cols, &v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn hand_traced_two_by_two() {
        // |h| per (RRH, user) = [[3, 1], [2, 5]]; rows of h are users.
        let h = real(2, 2, &[3.0, 2.0, 1.0, 5.0]);
        let a = associate_users(&h, 2, 1, 1);
        assert_eq!(a.served, vec![vec![0], vec![1]]);
        assert_eq!(a.owner, vec![Some(0), Some(1)]);
    }

    #[test]
    fn empty_user_set() {
        let h = CMatrix::zeros(0, 6);
        let a = associate_users(&h, 3, 2, 2);
        assert!(a.served.iter().all(Vec::is_empty));
        assert!(a.owner.is_empty());
    }

    #[test]
    fn ties_go_to_lower_index() {
        let h = real(3, 1, &[1.0, 1.0, 1.0]);
        let a = associate_users(&h, 1, 1, 2);
        assert_eq!(a.served[0], vec![0, 1]);
        assert_eq!(a.owner[2], None);
    }

    #[test]
    fn short_user_set_leaves_late_rrhs_empty() {
        let h = real(3, 3, &[1.0, 2.0, 3.0, 3.0, 2.0, 1.0, 2.0, 2.0, 2.0]);
        let a = associate_users(&h, 3, 1, 2);
        assert_eq!(a.served[0], vec![1, 2]);
        assert_eq!(a.served[1], vec![0]);
        assert!(a.served[2].is_empty());
    }
}
