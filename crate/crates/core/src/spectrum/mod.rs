// SPDX-License-Identifier: Apache-2.0

//! Nonzero spectrum of the Google matrix at `α = 1`.
//!
//! With `S = S0 + v dᵀ` and `S0` nilpotent of index `l`, every nonzero
//! eigenvalue of `S` is a root of the degree-`l` reduced polynomial
//!
//! ```text
//! P_r(λ) = λ^l − Σ_{j<l} c_j λ^{l−1−j},    c_j = dᵀ S0^j v,
//! ```
//!
//! and conversely. The roots are found twice: by Newton iteration with
//! implicit deflation ([`reduced_poly_roots`]) and by a dense eigensolver
//! on the equilibrated companion matrix ([`companion_equilibrated_eigs`]).
//! Arnoldi iteration on the full operator ([`arnoldi`]) is provided for
//! comparison, along with the perturbed Jordan block that explains its
//! spurious eigenvalues near zero.

mod arnoldi;
mod dense;
mod eigvec;
mod poly;

use num_complex::Complex64;

pub use arnoldi::{arnoldi, ArnoldiResult, StartVector};
pub use dense::{
    balance, companion_equilibrated_eigs, companion_matrix, dense_eigenvalues,
    equilibrated_companion, jordan_block, jordan_perturbation_demo,
};
pub use eigvec::{eigen_residual, eigvec_from_lambda};
pub use poly::{reduced_poly_roots, ReducedPoly};

use crate::error::{Error, Result};
use crate::net::{DivisorCountTable, ModelVariant};
use crate::pagerank::for_each_krylov;
use crate::sieve::prime_count;
use crate::vector::compensated_sum;

/// Coefficients `c_j = dᵀ S0^j v` of the reduced polynomial.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReducedCoeffs {
    pub c: Vec<f64>,
}

impl ReducedCoeffs {
    pub fn l(&self) -> usize {
        self.c.len()
    }

    /// `Σ_j c_j`, which equals one exactly in exact arithmetic.
    pub fn sum(&self) -> f64 {
        self.c.iter().sum()
    }
}

/// Where a set of eigenvalues came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Provenance {
    PolynomialRoots,
    Companion,
    ArnoldiUniform,
    ArnoldiRandom,
    /// Closed form (prime-factor model, Jordan block demo).
    Analytic,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::PolynomialRoots => "roots",
            Provenance::Companion => "companion",
            Provenance::ArnoldiUniform => "arnoldi-uniform",
            Provenance::ArnoldiRandom => "arnoldi-random",
            Provenance::Analytic => "analytic",
        }
    }
}

/// Eigenvalues with per-value residuals.
///
/// For polynomial and companion provenance the residual is `|P_r(λ)|`; for
/// Arnoldi it is the Ritz residual `|h_{k+1,k} y_k|`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EigenvalueSet {
    pub values: Vec<Complex64>,
    pub provenance: Provenance,
    pub residuals: Vec<f64>,
    pub warnings: Vec<String>,
}

impl EigenvalueSet {
    pub fn new(values: Vec<Complex64>, provenance: Provenance, residuals: Vec<f64>) -> Self {
        Self {
            values,
            provenance,
            residuals,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Orders by descending modulus; ties (conjugates) put `im >= 0` first.
    pub fn sort_by_modulus(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| {
            let (x, y) = (self.values[a], self.values[b]);
            y.norm()
                .partial_cmp(&x.norm())
                .unwrap()
                .then(y.im.partial_cmp(&x.im).unwrap())
        });
        self.values = idx.iter().map(|&i| self.values[i]).collect();
        self.residuals = idx.iter().map(|&i| self.residuals[i]).collect();
    }

    pub fn sorted(mut self) -> Self {
        self.sort_by_modulus();
        self
    }

    /// Distance from `z` to the nearest member.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.values
            .iter()
            .map(|w| (w - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest distance between a member and the nearest conjugate member.
    pub fn conjugate_asymmetry(&self) -> f64 {
        self.values
            .iter()
            .map(|z| self.distance_to(z.conj()))
            .fold(0.0, f64::max)
    }
}

/// `c_j` for `j = 0..l` from one sweep over the Krylov vectors.
pub fn compute_cj(table: &DivisorCountTable) -> ReducedCoeffs {
    let n = table.n_max();
    let q = table.padded();
    let mut c = vec![0.0; table.nilpotency_index()];
    for_each_krylov(table, |j, v| {
        let top = n >> j;
        c[j] = compensated_sum(
            v.padded()[1..=top.max(1)]
                .iter()
                .zip(&q[1..=top.max(1)])
                .filter(|(_, &k)| k == 0)
                .map(|(x, _)| *x),
        );
    });
    ReducedCoeffs { c }
}

/// `γ = −2 ln|λ|`, with `γ = 0` when `|λ|` is within `1e-12` of one;
/// `None` for `λ = 0`.
pub fn gamma_of(z: Complex64) -> Option<f64> {
    let m = z.norm();
    if m == 0.0 {
        None
    } else if (m - 1.0).abs() < 1e-12 {
        Some(0.0)
    } else {
        Some(-2.0 * m.ln())
    }
}

/// [`gamma_of`] in descending order of modulus.
pub fn gamma_transform(eigs: &EigenvalueSet) -> Result<Vec<f64>> {
    let sorted = eigs.clone().sorted();
    sorted
        .values
        .iter()
        .map(|&z| gamma_of(z).ok_or_else(|| Error::InvalidArgument("zero eigenvalue has no gamma".into())))
        .collect()
}

/// Spectrum of the prime-factor model.
#[derive(Debug, Clone)]
pub struct PrimeModelSpectrum {
    /// `π(N)` from the sieve.
    pub prime_count: usize,
    /// `c_0 = (π(N) + 1) / N`.
    pub c0: f64,
    /// `{1, c_0 − 1}` (just `{1}` when `N < 4`).
    pub exact: EigenvalueSet,
    /// The same eigenvalues from `compute_cj` and the root finder.
    pub numeric: EigenvalueSet,
}

pub fn prime_model_spectrum(n_max: u64) -> Result<PrimeModelSpectrum> {
    let table = DivisorCountTable::build(n_max, ModelVariant::PrimeFactors)?;
    let n = table.n_max();
    let pi = prime_count(n);
    let c0 = (pi + 1) as f64 / n as f64;
    let mut values = vec![Complex64::new(1.0, 0.0)];
    if n >= 4 {
        values.push(Complex64::new((pi as f64 + 1.0 - n as f64) / n as f64, 0.0));
    }
    let exact_len = values.len();
    let exact = EigenvalueSet::new(values, Provenance::Analytic, vec![0.0; exact_len]);
    let numeric = reduced_poly_roots(&compute_cj(&table))?;
    Ok(PrimeModelSpectrum {
        prime_count: pi,
        c0,
        exact,
        numeric,
    })
}
