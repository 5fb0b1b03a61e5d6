// SPDX-License-Identifier: Apache-2.0

use super::rank::RankTable;
use crate::error::{Error, Result};

/// How the rank order changes between two network sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub n1: usize,
    pub n2: usize,
    /// `delta_k[n − 1] = |K_n(N2) − K_n(N1)|` for `n <= N1`.
    pub delta_k: Vec<u32>,
    /// First `K` at which the orders differ; `None` if the first `N1`
    /// entries agree.
    pub k_s: Option<usize>,
}

pub fn stability(t1: &RankTable, t2: &RankTable) -> Result<StabilityReport> {
    let (n1, n2) = (t1.n_max(), t2.n_max());
    if n1 > n2 {
        return Err(Error::InvalidArgument(format!(
            "first table (N = {n1}) must not be larger than the second (N = {n2})"
        )));
    }
    let delta_k = (1..=n1)
        .map(|n| t1.k_of(n).abs_diff(t2.k_of(n)) as u32)
        .collect();
    let k_s = t1
        .order
        .iter()
        .zip(&t2.order)
        .position(|(a, b)| a != b)
        .map(|i| i + 1);
    Ok(StabilityReport {
        n1,
        n2,
        delta_k,
        k_s,
    })
}
