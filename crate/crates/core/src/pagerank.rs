// SPDX-License-Identifier: Apache-2.0

//! PageRank of the divisor network.
//!
//! Three routes are provided and cross-checked against each other:
//!
//! * the power method on `G(α)`;
//! * the finite self-consistent sum `P ∝ Σ_j S0^j v` with `v = e / N`,
//!   which is exact after `l` terms because `S0` is nilpotent;
//! * closed-form first- and second-order estimates for primes, and the
//!   explicit three-term formula of the simplified model.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::net::{s0_gather, DivisorCountTable, Formulation, GoogleOperator, ModelVariant};
use crate::sieve::is_prime;
use crate::vector::ProbVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    Power,
    SelfConsistent,
}

/// Convergence record of one PageRank computation.
///
/// For [`Method::Power`] `deltas[i]` is the L1 change made by iteration
/// `i + 1`. For [`Method::SelfConsistent`] `deltas[j - 1]` is
/// `δ_j = ‖P⁽ʲ⁾ − P‖₁` for `j = 1..=l`, so the last entry is exactly zero.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct IterationTrace {
    pub method: Method,
    pub deltas: Vec<f64>,
}

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Power iteration from the uniform vector, renormalizing every step.
///
/// Stops once an iteration changes the vector by at most `tol` in L1.
pub fn pagerank_power(
    table: &DivisorCountTable,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(ProbVector, IterationTrace)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let op = GoogleOperator::new(table, alpha)?;
    let n = table.n_max();
    let mut x = ProbVector::uniform(n);
    let mut y = ProbVector::zeros(n);
    let mut deltas = Vec::new();
    for _ in 0..max_iter {
        op.apply_into(&x, &mut y)?;
        y.normalize();
        let delta = y.l1_distance(&x);
        deltas.push(delta);
        std::mem::swap(&mut x, &mut y);
        if delta <= tol {
            return Ok((
                x,
                IterationTrace {
                    method: Method::Power,
                    deltas,
                },
            ));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_delta: deltas.last().copied().unwrap_or(f64::NAN),
    })
}

/// Walks `v⁽ʲ⁾ = S0^j e/N` for `j = 0..l`, keeping one vector alive.
///
/// Each step reads its input only up to `⌊N / 2^j⌋`, the largest index that
/// can be nonzero. The walk ends early if a vector vanishes identically.
pub fn for_each_krylov<F>(table: &DivisorCountTable, mut f: F)
where
    F: FnMut(usize, &ProbVector),
{
    let n = table.n_max();
    let l = table.nilpotency_index();
    let mut v = ProbVector::uniform(n);
    let mut next = ProbVector::zeros(n);
    for j in 0..l {
        f(j, &v);
        if j + 1 == l {
            break;
        }
        let limit = n >> j;
        s0_gather(v.padded(), table, limit, Formulation::default(), next.padded_mut());
        std::mem::swap(&mut v, &mut next);
        if v.support_max() == 0 {
            break;
        }
    }
}

/// All nonzero Krylov vectors `v⁽⁰⁾, v⁽¹⁾, …`.
pub fn krylov_vectors(table: &DivisorCountTable) -> Vec<ProbVector> {
    let mut out = Vec::new();
    for_each_krylov(table, |_, v| out.push(v.clone()));
    out
}

/// Result of the self-consistent summation.
#[derive(Debug, Clone)]
pub struct SemiAnalytic {
    pub pagerank: ProbVector,
    pub trace: IterationTrace,
    /// `C = 1 / Σ_j ‖v⁽ʲ⁾‖₁`, the factor turning `Σ_j v⁽ʲ⁾` into a probability.
    pub c: f64,
    /// `‖v⁽ʲ⁾‖₁` for every computed Krylov vector.
    pub krylov_norms: Vec<f64>,
}

/// `P = C Σ_{j<l} v⁽ʲ⁾` with the constant applied once at the end.
pub fn pagerank_semianalytic(table: &DivisorCountTable) -> (ProbVector, IterationTrace) {
    let s = semianalytic(table);
    (s.pagerank, s.trace)
}

pub fn semianalytic(table: &DivisorCountTable) -> SemiAnalytic {
    let n = table.n_max();
    let l = table.nilpotency_index();
    let mut sum = ProbVector::zeros(n);
    let mut norms = Vec::with_capacity(l);
    for_each_krylov(table, |j, v| {
        let top = (n >> j).max(1);
        sum.padded_mut()[..=top]
            .par_iter_mut()
            .zip(&v.padded()[..=top])
            .for_each(|(a, b)| *a += b);
        norms.push(v.l1_norm());
    });
    let total = sum.normalize();
    let c = 1.0 / total;
    // All terms are nonnegative, so the L1 distance of a partial sum to the
    // full sum is the mass of the omitted tail.
    let mut deltas = vec![0.0; l];
    for j in 1..=l {
        let tail: f64 = norms.iter().skip(j).sum();
        deltas[j - 1] = c * tail;
    }
    SemiAnalytic {
        pagerank: sum,
        trace: IterationTrace {
            method: Method::SelfConsistent,
            deltas,
        },
        c,
        krylov_norms: norms,
    }
}

/// First- and second-order weights of a prime `p` in a network of size `N`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PrimeApprox {
    /// Estimate of `v⁽¹⁾_p`.
    pub v1: f64,
    /// Estimate of `v⁽²⁾_p`.
    pub v2: f64,
    /// Unnormalized three-term PageRank `1/N + v1 + v2`.
    pub p3: f64,
}

pub fn analytic_prime_approx(p: u64, n_max: u64) -> Result<PrimeApprox> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    // ln ln(N / 2p) needs N / 2p > 1
    if 2 * p >= n_max {
        return Err(Error::InvalidArgument(format!(
            "prime {p} too large for N = {n_max}; need 2p < N"
        )));
    }
    let (pf, nf) = (p as f64, n_max as f64);
    let ln_ratio = (nf / pf).ln();
    let v1 = 1.0 / (2.0 * pf * ln_ratio);
    let v2 = ((nf / (2.0 * pf)).ln().ln() - 2f64.ln().ln()) / (6.0 * pf * ln_ratio);
    Ok(PrimeApprox {
        v1,
        v2,
        p3: 1.0 / nf + v1 + v2,
    })
}

/// First-order estimate of `v⁽¹⁾_{p1 p2}` for distinct primes.
pub fn semiprime_v1(p1: u64, p2: u64, n_max: u64) -> f64 {
    let (a, b, n) = (p1 as f64, p2 as f64, n_max as f64);
    1.0 / (6.0 * a * b * (n.ln() - a.ln() - b.ln()))
}

/// First-order estimate of `v⁽¹⁾_{p²}`.
pub fn prime_square_v1(p: u64, n_max: u64) -> f64 {
    let (a, n) = (p as f64, n_max as f64);
    1.0 / (5.0 * a * a * (n.ln() - 2.0 * a.ln()))
}

/// Leading first-order weight without its logarithmic factor:
/// `1/(2p)` for primes, `1/(6 p1 p2)` for squarefree semiprimes and
/// `1/(5 p²)` for prime squares. `None` for anything else.
pub fn first_order_weight(n: u64) -> Option<f64> {
    if is_prime(n) {
        return Some(1.0 / (2.0 * n as f64));
    }
    let p = (2..n).find(|d| n.is_multiple_of(*d))?;
    let rest = n / p;
    if !is_prime(rest) {
        return None;
    }
    Some(if rest == p {
        1.0 / (5.0 * (n as f64))
    } else {
        1.0 / (6.0 * n as f64)
    })
}

/// Closed-form `P_p · p / C` for `N ≫ p`:
/// `(1 − ln ln 2 + ln ln N / 3) / (2 ln N)`.
pub fn prime_constant(n_max: u64) -> f64 {
    let ln_n = (n_max as f64).ln();
    (1.0 - 2f64.ln().ln() + ln_n.ln() / 3.0) / (2.0 * ln_n)
}

/// Ratio of the measured `p · P_p` to the closed-form constant, for the
/// normalization constant `c` of the self-consistent sum.
pub fn prime_constant_ratio(pagerank: &ProbVector, c: f64, p: usize) -> f64 {
    p as f64 * pagerank[p] / (c * prime_constant(pagerank.n_max() as u64))
}

/// Three-term PageRank of the simplified model from its explicit double sum.
pub fn simplified_p3(table: &DivisorCountTable) -> Result<ProbVector> {
    if table.variant() != ModelVariant::Simplified {
        return Err(Error::WrongVariant {
            expected: ModelVariant::Simplified.name(),
            got: table.variant().name(),
        });
    }
    let n_max = table.n_max();
    let q = table.padded();
    let mut values = vec![0.0; n_max + 1];
    values[1..].par_iter_mut().enumerate().for_each(|(i, out)| {
        let n = i + 1;
        let mut s = 1.0;
        // nothing links to 1
        if n > 1 {
            for m1 in 2..=n_max / n {
                let k1 = m1 * n;
                let w1 = 1.0 / q[k1] as f64;
                s += w1;
                for m2 in 2..=n_max / k1 {
                    s += w1 / q[m2 * k1] as f64;
                }
            }
        }
        *out = s;
    });
    let mut p = ProbVector::from_padded(values);
    p.normalize();
    Ok(p)
}

/// Normalized partial sum `P⁽ʲ⁾ ∝ Σ_{i<j} v⁽ⁱ⁾` from the generic recursion.
pub fn partial_pagerank(table: &DivisorCountTable, terms: usize) -> ProbVector {
    let mut sum = ProbVector::zeros(table.n_max());
    for_each_krylov(table, |j, v| {
        if j < terms {
            sum.add_assign(v);
        }
    });
    sum.normalize();
    sum
}
