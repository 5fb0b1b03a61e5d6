// SPDX-License-Identifier: Apache-2.0

//! Matrix-free application of `S0`, `S` and `G(α)`.
//!
//! `S0` is never stored. Column `k` of the adjacency matrix holds the
//! divisors of `k`, so row `n` of `S0` holds the multiples `m·n` of `n`, and
//! `(S0 x)_n` is a gather over those multiples weighted by `1 / q(m·n)`.

use rayon::prelude::*;

use super::table::{DivisorCountTable, ModelVariant};
use crate::error::{Error, Result};
use crate::vector::{compensated_sum, ProbVector};

/// How the multiplicity weights of the main model are evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Formulation {
    /// One sum over multiples `m·n`, recomputing `M(m·n, n)` for each term.
    Recompute,
    /// Unit weights over multiples of `n`, plus one extra sum over the
    /// multiples of every power `n^ν <= N`, `ν >= 2`.
    #[default]
    PowerSums,
}

#[inline]
fn step_sum(x: &[f64], q: &[u32], start: usize, step: usize, limit: usize) -> f64 {
    let mut s = 0.0;
    let mut k = start;
    while k <= limit {
        s += x[k] / q[k] as f64;
        k += step;
    }
    s
}

fn row_multiplicity(x: &[f64], q: &[u32], n: usize, limit: usize, formulation: Formulation) -> f64 {
    match formulation {
        Formulation::Recompute => {
            let mut s = 0.0;
            for m in 2..=limit / n {
                let k = m * n;
                let mut rest = m;
                let mut mu = 1u32;
                while rest % n == 0 {
                    rest /= n;
                    mu += 1;
                }
                s += x[k] * mu as f64 / q[k] as f64;
            }
            s
        }
        Formulation::PowerSums => {
            let mut s = step_sum(x, q, 2 * n, n, limit);
            let mut pw = n.checked_mul(n);
            while let Some(p) = pw.filter(|&p| p <= limit) {
                s += step_sum(x, q, p, p, limit);
                pw = p.checked_mul(n);
            }
            s
        }
    }
}

/// Gathers `out = S0 x` on padded slices, reading `x` only up to `limit`.
pub(crate) fn s0_gather(
    x: &[f64],
    table: &DivisorCountTable,
    limit: usize,
    formulation: Formulation,
    out: &mut [f64],
) {
    let q = table.padded();
    let variant = table.variant();
    let top = limit / 2;
    out.iter_mut().for_each(|y| *y = 0.0);
    if top < 2 {
        return;
    }
    out[2..=top].par_iter_mut().enumerate().for_each(|(i, y)| {
        let n = i + 2;
        *y = match variant {
            ModelVariant::Multiplicity => row_multiplicity(x, q, n, limit, formulation),
            ModelVariant::Simplified => step_sum(x, q, 2 * n, n, limit),
            // only primes receive links
            ModelVariant::PrimeFactors if q[n] == 0 => step_sum(x, q, 2 * n, n, limit),
            ModelVariant::PrimeFactors => 0.0,
        };
    });
}

fn check_len(x: &ProbVector, table: &DivisorCountTable) -> Result<()> {
    if x.n_max() != table.n_max() {
        return Err(Error::LengthMismatch {
            expected: table.n_max(),
            got: x.n_max(),
        });
    }
    Ok(())
}

/// `S0 x`, treating entries of `x` above `active_limit` as zero.
pub fn apply_s0(x: &ProbVector, table: &DivisorCountTable, active_limit: usize) -> Result<ProbVector> {
    apply_s0_with(x, table, active_limit, Formulation::default())
}

pub fn apply_s0_with(
    x: &ProbVector,
    table: &DivisorCountTable,
    active_limit: usize,
    formulation: Formulation,
) -> Result<ProbVector> {
    check_len(x, table)?;
    if active_limit > table.n_max() {
        return Err(Error::InvalidArgument(format!(
            "active limit {active_limit} exceeds N = {}",
            table.n_max()
        )));
    }
    let mut out = ProbVector::zeros(table.n_max());
    s0_gather(x.padded(), table, active_limit, formulation, out.padded_mut());
    Ok(out)
}

/// `dᵀx`: the mass of `x` sitting on dangling nodes.
pub fn dangling_mass(x: &ProbVector, table: &DivisorCountTable) -> f64 {
    compensated_sum(
        x.as_slice()
            .iter()
            .zip(table.counts())
            .filter(|(_, &c)| c == 0)
            .map(|(v, _)| *v),
    )
}

/// The Google matrix `G(α) = α S + (1 − α) e eᵀ / N` as a linear operator.
#[derive(Debug, Clone, Copy)]
pub struct GoogleOperator<'a> {
    table: &'a DivisorCountTable,
    alpha: f64,
    formulation: Formulation,
}

impl<'a> GoogleOperator<'a> {
    pub fn new(table: &'a DivisorCountTable, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self {
            table,
            alpha,
            formulation: Formulation::default(),
        })
    }

    pub fn with_formulation(mut self, formulation: Formulation) -> Self {
        self.formulation = formulation;
        self
    }

    pub fn table(&self) -> &'a DivisorCountTable {
        self.table
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `out = G x` for arbitrary (not necessarily normalized) `x`.
    pub fn apply_into(&self, x: &ProbVector, out: &mut ProbVector) -> Result<()> {
        check_len(x, self.table)?;
        check_len(out, self.table)?;
        let n = self.table.n_max();
        s0_gather(x.padded(), self.table, n, self.formulation, out.padded_mut());
        let shift = self.alpha * dangling_mass(x, self.table) / n as f64
            + (1.0 - self.alpha) * x.sum() / n as f64;
        let alpha = self.alpha;
        out.as_mut_slice()
            .par_iter_mut()
            .for_each(|y| *y = alpha * *y + shift);
        Ok(())
    }

    pub fn apply(&self, x: &ProbVector) -> Result<ProbVector> {
        let mut out = ProbVector::zeros(self.table.n_max());
        self.apply_into(x, &mut out)?;
        Ok(out)
    }
}

/// `G(α) x` for a probability vector `x`.
pub fn apply_google(x: &ProbVector, table: &DivisorCountTable, alpha: f64) -> Result<ProbVector> {
    let op = GoogleOperator::new(table, alpha)?;
    check_len(x, table)?;
    let s = x.sum();
    if (s - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(s));
    }
    op.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: u64, v: ModelVariant) -> DivisorCountTable {
        DivisorCountTable::build(n, v).unwrap()
    }

    #[test]
    fn s0_on_four() {
        let t = table(4, ModelVariant::Multiplicity);
        let y = apply_s0(&ProbVector::uniform(4), &t, 4).unwrap();
        assert_eq!(y.as_slice(), &[0.0, 0.25, 0.0, 0.0]);
        let z = apply_s0(&ProbVector::zeros(4), &t, 4).unwrap();
        assert_eq!(z, ProbVector::zeros(4));
    }

    #[test]
    fn column_24() {
        let t = table(24, ModelVariant::Multiplicity);
        let mut x = ProbVector::zeros(24);
        x[24] = 1.0;
        for f in [Formulation::Recompute, Formulation::PowerSums] {
            let y = apply_s0_with(&x, &t, 24, f).unwrap();
            assert_eq!(y[2], 3.0 / 8.0);
            for m in [3, 4, 6, 8, 12] {
                assert_eq!(y[m], 1.0 / 8.0);
            }
            assert_eq!(y.nnz(), 6);
        }
    }

    #[test]
    fn google_examples() {
        let t = table(2, ModelVariant::Multiplicity);
        let y = apply_google(&ProbVector::uniform(2), &t, 1.0).unwrap();
        assert_eq!(y.as_slice(), &[0.5, 0.5]);

        let t = table(4, ModelVariant::Multiplicity);
        let y = apply_google(&ProbVector::uniform(4), &t, 1.0).unwrap();
        let e = [3.0 / 16.0, 3.0 / 16.0 + 0.25, 3.0 / 16.0, 3.0 / 16.0];
        for (a, b) in y.as_slice().iter().zip(e) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn google_rejects_bad_input() {
        let t = table(10, ModelVariant::Multiplicity);
        let x = ProbVector::uniform(10);
        assert!(matches!(apply_google(&x, &t, 0.0), Err(Error::AlphaOutOfRange(_))));
        assert!(matches!(apply_google(&x, &t, 1.5), Err(Error::AlphaOutOfRange(_))));
        let mut y = x.clone();
        y.scale(2.0);
        assert!(matches!(apply_google(&y, &t, 1.0), Err(Error::NotNormalized(_))));
        assert!(matches!(
            apply_google(&ProbVector::uniform(9), &t, 1.0),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(apply_s0(&x, &t, 11).is_err());
    }

    #[test]
    fn single_node_network() {
        let t = table(1, ModelVariant::Multiplicity);
        let y = apply_google(&ProbVector::uniform(1), &t, 1.0).unwrap();
        assert_eq!(y.as_slice(), &[1.0]);
    }

    #[test]
    fn formulations_agree() {
        let t = table(20_000, ModelVariant::Multiplicity);
        let mut x = ProbVector::zeros(20_000);
        for n in 1..=20_000 {
            x[n] = ((n * 7919) % 1009) as f64 / 1009.0;
        }
        x.normalize();
        let a = apply_s0_with(&x, &t, 20_000, Formulation::Recompute).unwrap();
        let b = apply_s0_with(&x, &t, 20_000, Formulation::PowerSums).unwrap();
        assert!(a.linf_distance(&b) <= 1e-15);
    }

    #[test]
    fn active_limit_truncates_input() {
        let t = table(100, ModelVariant::Multiplicity);
        let x = ProbVector::uniform(100);
        let y = apply_s0(&x, &t, 40).unwrap();
        assert!(y.support_max() <= 20);
        let mut xt = x.clone();
        for n in 41..=100 {
            xt[n] = 0.0;
        }
        assert_eq!(y, apply_s0(&xt, &t, 100).unwrap());
    }

    #[test]
    fn prime_model_only_feeds_primes() {
        let t = table(500, ModelVariant::PrimeFactors);
        let y = apply_s0(&ProbVector::uniform(500), &t, 500).unwrap();
        for n in 1..=500 {
            if y[n] != 0.0 {
                assert!(crate::sieve::is_prime(n as u64));
            }
        }
        let z = apply_s0(&y, &t, 500).unwrap();
        assert_eq!(z.nnz(), 0);
    }
}
