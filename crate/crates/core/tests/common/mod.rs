// SPDX-License-Identifier: Apache-2.0

//! Reference implementations written straight from the definitions, sharing
//! no code with the library.

#![allow(dead_code)]

use divrank_core::ModelVariant;

pub fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn trial_prime_count(n: u64) -> u64 {
    (2..=n).filter(|&k| trial_is_prime(k)).count() as u64
}

/// Weight of the link `n → m` for a proper divisor `1 < m < n`.
pub fn link_weight(n: u64, m: u64, variant: ModelVariant) -> f64 {
    if m < 2 || m >= n || !n.is_multiple_of(m) {
        return 0.0;
    }
    match variant {
        ModelVariant::Multiplicity => {
            let mut k = 0;
            let mut rest = n;
            while rest.is_multiple_of(m) {
                rest /= m;
                k += 1;
            }
            k as f64
        }
        ModelVariant::Simplified => 1.0,
        ModelVariant::PrimeFactors => {
            if trial_is_prime(m) {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Row-major dense `G(α)`: `g[row][col]`, 0-based with row `i` for node `i + 1`.
pub fn dense_google(n: usize, variant: ModelVariant, alpha: f64) -> Vec<Vec<f64>> {
    let mut g = vec![vec![0.0; n]; n];
    for col in 1..=n {
        let out: f64 = (2..col).map(|m| link_weight(col as u64, m as u64, variant)).sum();
        for row in 1..=n {
            let s = if out == 0.0 {
                1.0 / n as f64
            } else {
                link_weight(col as u64, row as u64, variant) / out
            };
            g[row - 1][col - 1] = alpha * s + (1.0 - alpha) / n as f64;
        }
    }
    g
}

/// Dense `S0`: `S` with the dangling columns left empty.
pub fn dense_s0(n: usize, variant: ModelVariant) -> Vec<Vec<f64>> {
    let mut s = vec![vec![0.0; n]; n];
    for col in 1..=n {
        let out: f64 = (2..col).map(|m| link_weight(col as u64, m as u64, variant)).sum();
        if out > 0.0 {
            for row in 2..col {
                s[row - 1][col - 1] = link_weight(col as u64, row as u64, variant) / out;
            }
        }
    }
    s
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Dominant eigenvector of a dense column-stochastic matrix by power
/// iteration, L1-normalized.
pub fn dense_power(g: &[Vec<f64>]) -> Vec<f64> {
    let n = g.len();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        let mut y = matvec(g, &x);
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= s);
        let change = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = y;
        if change < 1e-15 {
            break;
        }
    }
    x
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}
