// SPDX-License-Identifier: Apache-2.0

//! Small dense eigenproblems: the companion matrix of the reduced
//! polynomial and the perturbed Jordan block.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::poly::ReducedPoly;
use super::{EigenvalueSet, Provenance, ReducedCoeffs};
use crate::error::{Error, Result};

/// Osborne balancing: a diagonal similarity that equalizes the off-diagonal
/// row and column 2-norms. Eigenvalues are unchanged.
pub fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for _sweep in 0..200 {
        let mut changed = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for k in 0..n {
                if k != i {
                    c += m[(k, i)] * m[(k, i)];
                    r += m[(i, k)] * m[(i, k)];
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let f = (r.sqrt() / c.sqrt()).sqrt();
            if (f - 1.0).abs() > 1e-3 {
                changed = true;
            }
            if f != 1.0 {
                for k in 0..n {
                    m[(k, i)] *= f;
                    m[(i, k)] /= f;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Eigenvalues of a real square matrix after balancing.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let mut b = m.clone();
    balance(&mut b);
    if let Some(schur) = Schur::try_new(b.clone(), f64::EPSILON, 10_000) {
        return Ok(schur.complex_eigenvalues().iter().copied().collect());
    }
    // QR can stall on permutation-like matrices; retry after a fixed
    // orthogonal similarity
    let n = b.nrows();
    let u = nalgebra::DVector::from_fn(n, |i, _| 1.0 + (i as f64 + 1.0).sqrt());
    let h = DMatrix::identity(n, n) - (&u * u.transpose()) * (2.0 / u.norm_squared());
    let rotated = &h * b * &h;
    let schur = Schur::try_new(rotated, f64::EPSILON, 10_000).ok_or(Error::EigenSolver)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// The `l × l` companion matrix: first row `c_0 … c_{l−1}`, ones below the
/// diagonal. It represents `S` on the span of the Krylov vectors.
pub fn companion_matrix(coeffs: &ReducedCoeffs) -> DMatrix<f64> {
    let l = coeffs.l();
    DMatrix::from_fn(l, l, |i, k| {
        if i == 0 {
            coeffs.c[k]
        } else if i == k + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// `ρ⁻¹ S̄ ρ` with `ρ_kk = 1 / c_k`: first row all `c_0`, subdiagonal
/// `c_{k+1} / c_k`. `None` if some `c_k` vanishes.
pub fn equilibrated_companion(coeffs: &ReducedCoeffs) -> Option<DMatrix<f64>> {
    if coeffs.c.contains(&0.0) {
        return None;
    }
    let l = coeffs.l();
    let c = &coeffs.c;
    Some(DMatrix::from_fn(l, l, |i, k| {
        if i == 0 {
            c[0]
        } else if i == k + 1 {
            c[k + 1] / c[k]
        } else {
            0.0
        }
    }))
}

/// Nonzero spectrum from the equilibrated companion matrix.
pub fn companion_equilibrated_eigs(coeffs: &ReducedCoeffs) -> Result<EigenvalueSet> {
    let mut warnings = Vec::new();
    let m = match equilibrated_companion(coeffs) {
        Some(m) => m,
        None => {
            warnings.push("zero coefficient: using the unequilibrated companion matrix".into());
            companion_matrix(coeffs)
        }
    };
    let values = dense_eigenvalues(&m)?;
    let poly = ReducedPoly::new(coeffs);
    let residuals = values.iter().map(|&z| poly.eval(z).norm()).collect();
    let mut set = EigenvalueSet::new(values, Provenance::Companion, residuals).sorted();
    set.warnings = warnings;
    Ok(set)
}

/// `D × D` shift matrix (ones above the diagonal) with `ε` in the
/// bottom-left corner.
pub fn jordan_block(d: usize, epsilon: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d.saturating_sub(1) {
        m[(i, i + 1)] = 1.0;
    }
    if d > 0 {
        m[(d - 1, 0)] += epsilon;
    }
    m
}

/// Eigenvalues of the perturbed Jordan block; all have modulus `ε^{1/D}`.
pub fn jordan_perturbation_demo(d: usize, epsilon: f64) -> Result<EigenvalueSet> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("block size {d} must be at least 2")));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be >= 0")));
    }
    let values = dense_eigenvalues(&jordan_block(d, epsilon))?;
    // characteristic polynomial λ^D − ε
    let residuals = values
        .iter()
        .map(|z| (z.powu(d as u32) - epsilon).norm())
        .collect();
    Ok(EigenvalueSet::new(values, Provenance::Analytic, residuals).sorted())
}
