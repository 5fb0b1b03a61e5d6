// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::vector::ProbVector;

/// PageRank order of the integers `1..=N`.
///
/// Ranks `K` are 1-based. Exactly equal probabilities are ordered by
/// increasing `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    /// `order[K - 1] = n(K)`.
    pub order: Vec<u32>,
    /// `inverse[n - 1] = K(n)`.
    pub inverse: Vec<u32>,
    /// Inclusive `(start_K, end_K)` spans of bit-identical probabilities,
    /// only spans of two or more entries.
    pub tie_groups: Vec<(usize, usize)>,
    /// Number of ranks ahead of the first tie group, i.e. its 0-based
    /// start; 0 if there is none.
    pub k_d: usize,
}

impl RankTable {
    pub fn n_max(&self) -> usize {
        self.order.len()
    }

    /// `n(K)` for 1-based `K`.
    pub fn n_at(&self, k: usize) -> usize {
        self.order[k - 1] as usize
    }

    /// `K(n)` for 1-based `n`.
    pub fn k_of(&self, n: usize) -> usize {
        self.inverse[n - 1] as usize
    }

    pub fn in_tie(&self, k: usize) -> bool {
        let i = self.tie_groups.partition_point(|&(_, end)| end < k);
        self.tie_groups.get(i).is_some_and(|&(start, _)| start <= k)
    }
}

/// Sorts by descending probability, then ascending `n`.
pub fn rank_order(p: &ProbVector) -> RankTable {
    let vals = p.as_slice();
    let n = vals.len();
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.par_sort_unstable_by(|&a, &b| {
        vals[b as usize - 1]
            .total_cmp(&vals[a as usize - 1])
            .then(a.cmp(&b))
    });
    let mut inverse = vec![0u32; n];
    for (k, &m) in order.iter().enumerate() {
        inverse[m as usize - 1] = k as u32 + 1;
    }
    let mut tie_groups = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        let boundary = k == n || vals[order[k] as usize - 1] != vals[order[start] as usize - 1];
        if boundary {
            if k - start >= 2 {
                tie_groups.push((start + 1, k));
            }
            start = k;
        }
    }
    let k_d = tie_groups.first().map_or(0, |g| g.0 - 1);
    RankTable {
        order,
        inverse,
        tie_groups,
        k_d,
    }
}

/// Position of the first degenerate plateau: the count of ranks before it.
/// Use `tie_groups` to tell a plateau at `K = 1` from no plateau.
pub fn plateau_kd(table: &RankTable) -> usize {
    table.k_d
}

/// Adjacent rank pairs whose probabilities differ, but by at most
/// `rel_tol` relative. Returns the first-rank `K` of each such pair.
pub fn near_ties(p: &ProbVector, table: &RankTable, rel_tol: f64) -> Vec<usize> {
    let vals = p.as_slice();
    table
        .order
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| {
            let (a, b) = (vals[w[0] as usize - 1], vals[w[1] as usize - 1]);
            (a != b && (a - b).abs() <= rel_tol * a.abs()).then_some(i + 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_nodes() {
        let p = ProbVector::from_values(&[0.2, 0.4, 0.2, 0.2]);
        let t = rank_order(&p);
        assert_eq!(t.order, vec![2, 1, 3, 4]);
        assert_eq!(t.inverse, vec![2, 1, 3, 4]);
        assert_eq!(t.tie_groups, vec![(2, 4)]);
        assert_eq!(plateau_kd(&t), 1);
        assert!(t.in_tie(3) && !t.in_tie(1));
    }

    #[test]
    fn no_ties() {
        let p = ProbVector::from_values(&[0.1, 0.3, 0.2, 0.4]);
        let t = rank_order(&p);
        assert_eq!(t.order, vec![4, 2, 3, 1]);
        assert_eq!(t.k_d, 0);
        assert!(t.tie_groups.is_empty());
    }

    #[test]
    fn near_tie_diagnostic() {
        let a = 0.25;
        let p = ProbVector::from_values(&[a, a * (1.0 - 1e-15), 0.1, 0.1]);
        let t = rank_order(&p);
        assert_eq!(near_ties(&p, &t, 1e-14), vec![1]);
        assert_eq!(t.tie_groups, vec![(3, 4)]);
    }
}
