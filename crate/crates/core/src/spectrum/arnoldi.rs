// SPDX-License-Identifier: Apache-2.0

//! Arnoldi iteration on the full Google matrix at `α = 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dense::dense_eigenvalues;
use super::{EigenvalueSet, Provenance};
use crate::error::{Error, Result};
use crate::net::{DivisorCountTable, GoogleOperator};
use crate::vector::ProbVector;

/// Initial Krylov vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartVector {
    /// Components `1/√N`.
    Uniform,
    /// Components uniform in `[−1, 1)` from a seeded generator, then
    /// normalized.
    Random(u64),
}

#[derive(Debug, Clone)]
pub struct ArnoldiResult {
    pub ritz: EigenvalueSet,
    /// `h_{k+1,k}` for every completed step.
    pub couplings: Vec<f64>,
    /// Size of the Hessenberg matrix the Ritz values come from.
    pub dimension: usize,
    pub breakdown: bool,
}

const BREAKDOWN: f64 = 1e-14;
const CHUNK: usize = 1 << 15;

// Chunked so the summation order does not depend on the thread count.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partial.iter().sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_chunks_mut(CHUNK)
        .zip(x.par_chunks(CHUNK))
        .for_each(|(ys, xs)| ys.iter_mut().zip(xs).for_each(|(a, b)| *a += alpha * b));
}

fn start_vector(n: usize, start: StartVector) -> ProbVector {
    let mut v = match start {
        StartVector::Uniform => ProbVector::from_values(&vec![1.0; n]),
        StartVector::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            ProbVector::from_values(&vals)
        }
    };
    let norm = dot(v.as_slice(), v.as_slice()).sqrt();
    v.scale(1.0 / norm);
    v
}

/// Runs `n_a` Arnoldi steps with modified Gram–Schmidt and one
/// reorthogonalization pass. Stops early on breakdown (`h_{k+1,k} < 1e-14`).
pub fn arnoldi(table: &DivisorCountTable, n_a: usize, start: StartVector) -> Result<ArnoldiResult> {
    if n_a < 2 {
        return Err(Error::InvalidArgument(format!("Arnoldi dimension {n_a} must be >= 2")));
    }
    let op = GoogleOperator::new(table, 1.0)?;
    let n = table.n_max();
    let steps = n_a.min(n);
    let mut basis: Vec<ProbVector> = vec![start_vector(n, start)];
    let mut h = DMatrix::<f64>::zeros(steps + 1, steps);
    let mut couplings = Vec::with_capacity(steps);
    let mut dimension = steps;
    let mut breakdown = false;

    for k in 0..steps {
        let mut w = op.apply(&basis[k])?;
        for _pass in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q.as_slice(), w.as_slice());
                axpy(-c, q.as_slice(), w.as_mut_slice());
                h[(i, k)] += c;
            }
        }
        let beta = dot(w.as_slice(), w.as_slice()).sqrt();
        h[(k + 1, k)] = beta;
        couplings.push(beta);
        if beta < BREAKDOWN {
            dimension = k + 1;
            breakdown = true;
            break;
        }
        if k + 1 < steps {
            w.scale(1.0 / beta);
            basis.push(w);
        }
    }
    drop(basis);

    let hm = h.view((0, 0), (dimension, dimension)).into_owned();
    let values = dense_eigenvalues(&hm)?;
    let tail = h[(dimension, dimension - 1)];
    let residuals = values
        .iter()
        .map(|&theta| tail * ritz_last_component(&hm, theta))
        .collect();
    let provenance = match start {
        StartVector::Uniform => Provenance::ArnoldiUniform,
        StartVector::Random(_) => Provenance::ArnoldiRandom,
    };
    Ok(ArnoldiResult {
        ritz: EigenvalueSet::new(values, provenance, residuals).sorted(),
        couplings,
        dimension,
        breakdown,
    })
}

/// `|y_m|` of the unit Ritz vector `y` of upper Hessenberg `hm` at `theta`,
/// by two steps of inverse iteration.
fn ritz_last_component(hm: &DMatrix<f64>, theta: Complex64) -> f64 {
    let m = hm.nrows();
    let shift = theta + Complex64::new(1e-13 * theta.norm().max(1e-3), 0.0);
    let mut y = vec![Complex64::new(1.0, 0.0); m];
    for _ in 0..2 {
        y = hessenberg_solve(hm, shift, &y);
        let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return 0.0;
        }
        y.iter_mut().for_each(|z| *z /= norm);
    }
    y[m - 1].norm()
}

/// Solves `(H − σ I) x = b` for upper Hessenberg `H` with partial pivoting.
fn hessenberg_solve(hm: &DMatrix<f64>, sigma: Complex64, b: &[Complex64]) -> Vec<Complex64> {
    let m = hm.nrows();
    let mut a: Vec<Vec<Complex64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let x = Complex64::new(hm[(i, j)], 0.0);
                    if i == j {
                        x - sigma
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let mut rhs = b.to_vec();
    let tiny = 1e-300;
    for k in 0..m.saturating_sub(1) {
        if a[k + 1][k].norm() > a[k][k].norm() {
            a.swap(k, k + 1);
            rhs.swap(k, k + 1);
        }
        if a[k][k].norm() < tiny {
            a[k][k] = Complex64::new(tiny, 0.0);
        }
        let f = a[k + 1][k] / a[k][k];
        if f.norm() != 0.0 {
            let (top, bottom) = a.split_at_mut(k + 1);
            for j in k..m {
                bottom[0][j] -= f * top[k][j];
            }
            rhs[k + 1] = rhs[k + 1] - f * rhs[k];
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for i in (0..m).rev() {
        let mut s = rhs[i];
        for j in i + 1..m {
            s -= a[i][j] * x[j];
        }
        let d = if a[i][i].norm() < tiny {
            Complex64::new(tiny, 0.0)
        } else {
            a[i][i]
        };
        x[i] = s / d;
    }
    x
}
