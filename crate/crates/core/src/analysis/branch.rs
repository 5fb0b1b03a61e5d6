// SPDX-License-Identifier: Apache-2.0

//! Per-integer data behind the `nP` and `n/K` branch structure.

use super::rank::RankTable;
use crate::sieve::{big_omega, smallest_prime_factors};
use crate::vector::ProbVector;

/// Largest `N` for which a full smallest-prime-factor table is built.
pub const SPF_CAP: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BranchRecord {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub np: f64,
    pub n_over_k: f64,
    /// Ω(n), prime factors counted with multiplicity (0 for n = 1).
    pub omega: u32,
}

fn omega_trial(mut n: usize) -> u32 {
    let mut count = 0;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            n /= d;
            count += 1;
        }
        d += 1;
    }
    count + (n > 1) as u32
}

/// One record per integer up to [`SPF_CAP`]; above that, `samples`
/// logarithmically spaced integers.
pub fn branch_profile(p: &ProbVector, rank: &RankTable, samples: usize) -> Vec<BranchRecord> {
    let n_max = p.n_max();
    let record = |n: usize, omega: u32| BranchRecord {
        n,
        k: rank.k_of(n),
        p: p[n],
        np: n as f64 * p[n],
        n_over_k: n as f64 / rank.k_of(n) as f64,
        omega,
    };
    if n_max <= SPF_CAP {
        let spf = smallest_prime_factors(n_max);
        (1..=n_max).map(|n| record(n, big_omega(n, &spf))).collect()
    } else {
        let ln_max = (n_max as f64).ln();
        let mut ns: Vec<usize> = (0..samples)
            .map(|i| (ln_max * i as f64 / (samples - 1).max(1) as f64).exp().round() as usize)
            .map(|n| n.clamp(1, n_max))
            .collect();
        ns.dedup();
        ns.into_iter().map(|n| record(n, omega_trial(n))).collect()
    }
}

/// Checks that in every window of `window` consecutive ranks up to `k_max`,
/// the largest integer (the top of the `n(K)` branch structure) is prime.
/// Ranks inside degenerate plateaus are ignored.
pub fn top_branch_is_prime(records: &[BranchRecord], rank: &RankTable, k_max: usize, window: usize) -> bool {
    let mut by_k: Vec<&BranchRecord> = records.iter().filter(|r| r.k <= k_max).collect();
    by_k.sort_by_key(|r| r.k);
    by_k.chunks(window).all(|w| {
        w.iter()
            .filter(|r| !rank.in_tie(r.k))
            .max_by_key(|r| r.n)
            .is_none_or(|r| r.omega == 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_omega() {
        let spf = smallest_prime_factors(2000);
        for n in 1..=2000 {
            assert_eq!(omega_trial(n), big_omega(n, &spf));
        }
    }
}
