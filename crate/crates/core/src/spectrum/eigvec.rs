// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::poly::ReducedPoly;
use super::ReducedCoeffs;
use crate::error::{Error, Result};
use crate::net::{dangling_mass, DivisorCountTable, GoogleOperator};
use crate::vector::{compensated_sum, ProbVector};

/// Right eigenvector `ψ = Σ_j λ^{−j−1} v⁽ʲ⁾` of `S` for a nonzero root `λ`
/// of the reduced polynomial, normalized to `Σ_n |ψ_n| = 1`.
///
/// `krylov` must hold `v⁽⁰⁾, v⁽¹⁾, …` of the same table.
pub fn eigvec_from_lambda(
    table: &DivisorCountTable,
    lambda: Complex64,
    krylov: &[ProbVector],
) -> Result<Vec<Complex64>> {
    if lambda.norm() < 1e-12 {
        return Err(Error::InvalidArgument("eigenvalue must be nonzero".into()));
    }
    if krylov.is_empty() || krylov.iter().any(|v| v.n_max() != table.n_max()) {
        return Err(Error::InvalidArgument("Krylov vectors do not match the table".into()));
    }
    let mut c: Vec<f64> = krylov.iter().map(|v| dangling_mass(v, table)).collect();
    c.resize(table.nilpotency_index().max(c.len()), 0.0);
    let poly = ReducedPoly::new(&ReducedCoeffs { c });
    let res = poly.relative_residual(lambda);
    if !(res < 1e-8) {
        return Err(Error::NotARoot(lambda, res));
    }

    let n = table.n_max();
    let inv = 1.0 / lambda;
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    let mut w = inv;
    for v in krylov {
        let top = v.support_max();
        for (p, x) in psi[..top].iter_mut().zip(&v.as_slice()[..top]) {
            *p += w * x;
        }
        w *= inv;
    }
    let norm = compensated_sum(psi.iter().map(|z| z.norm()));
    psi.iter_mut().for_each(|z| *z /= norm);
    Ok(psi)
}

/// `‖S ψ − λ ψ‖₁` at `α = 1`.
pub fn eigen_residual(table: &DivisorCountTable, lambda: Complex64, psi: &[Complex64]) -> Result<f64> {
    let op = GoogleOperator::new(table, 1.0)?;
    let re = ProbVector::from_values(&psi.iter().map(|z| z.re).collect::<Vec<_>>());
    let im = ProbVector::from_values(&psi.iter().map(|z| z.im).collect::<Vec<_>>());
    let s_re = op.apply(&re)?;
    let s_im = op.apply(&im)?;
    Ok(psi
        .iter()
        .zip(s_re.as_slice().iter().zip(s_im.as_slice()))
        .map(|(z, (a, b))| (Complex64::new(*a, *b) - lambda * z).norm())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{dense_matrix, ModelVariant};
    use crate::pagerank::{krylov_vectors, pagerank_semianalytic};

    #[test]
    fn lambda_one_is_pagerank() {
        let t = DivisorCountTable::build(3000, ModelVariant::Multiplicity).unwrap();
        let k = krylov_vectors(&t);
        let psi = eigvec_from_lambda(&t, Complex64::new(1.0, 0.0), &k).unwrap();
        let (p, _) = pagerank_semianalytic(&t);
        for (z, x) in psi.iter().zip(p.as_slice()) {
            assert!((z.re - x).abs() < 1e-15 && z.im == 0.0, "{z} {x}");
        }
    }

    #[test]
    fn four_node_second_eigenvector_against_dense() {
        let t = DivisorCountTable::build(4, ModelVariant::Multiplicity).unwrap();
        let k = krylov_vectors(&t);
        let lambda = Complex64::new(-0.25, 0.0);
        let psi = eigvec_from_lambda(&t, lambda, &k).unwrap();
        let g = dense_matrix(4, ModelVariant::Multiplicity, 1.0).unwrap();
        let re = nalgebra::DVector::from_iterator(4, psi.iter().map(|z| z.re));
        let gpsi = &g * &re;
        for i in 0..4 {
            assert!((gpsi[i] + 0.25 * re[i]).abs() < 1e-15);
        }
        assert!(eigen_residual(&t, lambda, &psi).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_non_roots() {
        let t = DivisorCountTable::build(100, ModelVariant::Multiplicity).unwrap();
        let k = krylov_vectors(&t);
        assert!(matches!(
            eigvec_from_lambda(&t, Complex64::new(0.3, 0.1), &k),
            Err(Error::NotARoot(..))
        ));
        assert!(eigvec_from_lambda(&t, Complex64::new(0.0, 0.0), &k).is_err());
    }
}
