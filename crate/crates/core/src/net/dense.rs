// SPDX-License-Identifier: Apache-2.0

//! Explicit dense matrices for small networks. Built from the link
//! definition directly, without the count tables, so they can serve as an
//! oracle for the matrix-free operators.

use nalgebra::DMatrix;

use super::table::{multiplicity, ModelVariant};
use crate::error::{Error, Result};
use crate::sieve::is_prime;

pub const DENSE_MAX_N: usize = 4096;

fn link_weight(variant: ModelVariant, from: u64, to: u64) -> f64 {
    match variant {
        ModelVariant::Multiplicity => multiplicity(from, to) as f64,
        ModelVariant::Simplified => (to > 1 && to < from && from.is_multiple_of(to)) as u8 as f64,
        ModelVariant::PrimeFactors => {
            (to < from && from.is_multiple_of(to) && is_prime(to)) as u8 as f64
        }
    }
}

/// Adjacency matrix `A[m][n]` = weight of the link `n -> m` (0-based storage).
pub fn dense_adjacency(n_max: usize, variant: ModelVariant) -> Result<DMatrix<f64>> {
    if n_max == 0 {
        return Err(Error::InvalidSize(0));
    }
    if n_max > DENSE_MAX_N {
        return Err(Error::Capacity {
            n: n_max as u64,
            max: DENSE_MAX_N as u64,
        });
    }
    Ok(DMatrix::from_fn(n_max, n_max, |i, j| {
        link_weight(variant, j as u64 + 1, i as u64 + 1)
    }))
}

/// `S0`: adjacency with nonzero columns normalized, dangling columns zero.
pub fn dense_s0(n_max: usize, variant: ModelVariant) -> Result<DMatrix<f64>> {
    let mut a = dense_adjacency(n_max, variant)?;
    for mut col in a.column_iter_mut() {
        let s: f64 = col.sum();
        if s > 0.0 {
            col /= s;
        }
    }
    Ok(a)
}

/// The Google matrix `G(α)`.
pub fn dense_matrix(n_max: usize, variant: ModelVariant, alpha: f64) -> Result<DMatrix<f64>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let mut s = dense_s0(n_max, variant)?;
    let inv_n = 1.0 / n_max as f64;
    for mut col in s.column_iter_mut() {
        if col.iter().all(|&x| x == 0.0) {
            col.fill(inv_n);
        }
    }
    Ok(s.map(|x| alpha * x + (1.0 - alpha) * inv_n))
}
