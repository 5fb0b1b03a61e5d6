// SPDX-License-Identifier: Apache-2.0

//! Roots of the reduced polynomial by Newton iteration with Maehly's
//! implicit deflation.
//!
//! The coefficients span dozens of orders of magnitude, so the polynomial is
//! never divided by found factors. Instead the Newton correction subtracts
//! the poles of the already known roots:
//!
//! ```text
//! λ ← λ − P(λ) / (P'(λ) − P(λ) Σ_i 1 / (λ − r_i))
//! ```
//!
//! Evaluation runs Horner's scheme in double-double arithmetic.

use num_complex::Complex64;

use super::{EigenvalueSet, Provenance, ReducedCoeffs};
use crate::error::{Error, Result};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Double-double real: `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Horner step `p ← p·z + a` in double-double complex arithmetic.
#[inline]
fn horner_step(pr: Dd, pi: Dd, z: Complex64, a: f64) -> (Dd, Dd) {
    let re = pr.mul_f64(z.re).add(pi.mul_f64(z.im).neg()).add(Dd::from(a));
    let im = pr.mul_f64(z.im).add(pi.mul_f64(z.re));
    (re, im)
}

/// `P_r(λ) = λ^l − Σ_j c_j λ^{l−1−j}` in monic descending form.
#[derive(Debug, Clone)]
pub struct ReducedPoly {
    /// `a[0] = 1`, `a[j + 1] = −c_j`.
    a: Vec<f64>,
}

impl ReducedPoly {
    pub fn new(coeffs: &ReducedCoeffs) -> Self {
        let mut a = Vec::with_capacity(coeffs.l() + 1);
        a.push(1.0);
        a.extend(coeffs.c.iter().map(|c| -c));
        Self { a }
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// `(P(z), P'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let (mut pr, mut pi) = (Dd::from(self.a[0]), Dd::default());
        let (mut dr, mut di) = (Dd::default(), Dd::default());
        for &a in &self.a[1..] {
            let (nr, ni) = horner_step(dr, di, z, 0.0);
            dr = nr.add(pr);
            di = ni.add(pi);
            let (r, i) = horner_step(pr, pi, z, a);
            pr = r;
            pi = i;
        }
        (
            Complex64::new(pr.value(), pi.value()),
            Complex64::new(dr.value(), di.value()),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).0
    }

    /// `Σ_k |a_k| |z|^{l−k}`, the scale against which `|P(z)|` is small.
    pub fn magnitude(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.a.iter().fold(0.0, |acc, a| acc * r + a.abs())
    }

    /// `|P(z)| / Σ_k |a_k||z|^{l−k}`.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let m = self.magnitude(z);
        if m == 0.0 {
            0.0
        } else {
            self.eval(z).norm() / m
        }
    }

    /// Upper bound on the modulus of every root.
    pub fn root_radius(&self) -> f64 {
        self.a[1..]
            .iter()
            .enumerate()
            .map(|(j, a)| a.abs().powf(1.0 / (j + 1) as f64))
            .fold(1.0, f64::max)
    }
}

const MAX_STEPS: usize = 500;
const MAX_RESTARTS: usize = 24;

fn newton_maehly(poly: &ReducedPoly, start: Complex64, known: &[Complex64]) -> Option<Complex64> {
    let mut z = start;
    let mut last_step = f64::INFINITY;
    for _ in 0..MAX_STEPS {
        let (p, dp) = poly.eval_with_derivative(z);
        if p == Complex64::new(0.0, 0.0) {
            return Some(z);
        }
        let poles: Complex64 = known.iter().map(|r| 1.0 / (z - r)).sum();
        let denom = dp - p * poles;
        if denom.norm() == 0.0 || !denom.is_finite() {
            return None;
        }
        let step = p / denom;
        z -= step;
        if !z.is_finite() {
            return None;
        }
        let s = step.norm();
        // quadratic convergence has stalled at rounding level
        if s <= 4.0 * f64::EPSILON * z.norm() || (s >= last_step && s <= 1e-12 * z.norm()) {
            return Some(z);
        }
        last_step = s;
    }
    None
}

/// Plain Newton on the undeflated polynomial; keeps the better of the two.
fn polish(poly: &ReducedPoly, z0: Complex64) -> Complex64 {
    let mut best = z0;
    let mut best_res = poly.eval(z0).norm();
    let mut z = z0;
    for _ in 0..8 {
        let (p, dp) = poly.eval_with_derivative(z);
        if dp.norm() == 0.0 {
            break;
        }
        z -= p / dp;
        let r = poly.eval(z).norm();
        if r < best_res && (z - z0).norm() < 1e-6 * z0.norm().max(1e-300) {
            best = z;
            best_res = r;
        }
    }
    best
}

/// All `l` roots of the reduced polynomial.
pub fn reduced_poly_roots(coeffs: &ReducedCoeffs) -> Result<EigenvalueSet> {
    let poly = ReducedPoly::new(coeffs);
    let l = poly.degree();
    let radius = poly.root_radius() * 1.1;
    let mut roots: Vec<Complex64> = Vec::with_capacity(l);
    let mut attempt = 0usize;
    while roots.len() < l {
        // starts walk around the bounding circle, away from the real axis
        let k = roots.len() + attempt;
        let theta = 0.4 + 2.399_963_229_728_653 * k as f64;
        let start = Complex64::from_polar(radius, theta);
        match newton_maehly(&poly, start, &roots) {
            Some(z) => {
                roots.push(z);
                attempt = 0;
            }
            None => {
                attempt += 1;
                if attempt > MAX_RESTARTS {
                    return Err(Error::RootFinding {
                        found: roots.len(),
                        degree: l,
                        partial: roots,
                    });
                }
            }
        }
    }
    let values: Vec<Complex64> = roots
        .into_iter()
        .map(|z| {
            let mut z = polish(&poly, z);
            if z.im.abs() <= 1e-13 * z.norm() {
                let real = Complex64::new(z.re, 0.0);
                if poly.eval(real).norm() <= 2.0 * poly.eval(z).norm() {
                    z = real;
                }
            }
            z
        })
        .collect();
    let residuals = values.iter().map(|&z| poly.eval(z).norm()).collect();
    Ok(EigenvalueSet::new(values, Provenance::PolynomialRoots, residuals).sorted())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(c: &[f64]) -> ReducedCoeffs {
        ReducedCoeffs { c: c.to_vec() }
    }

    #[test]
    fn two_by_two_roots() {
        let r = reduced_poly_roots(&coeffs(&[0.75, 0.25])).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r.values[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((r.values[1] - Complex64::new(-0.25, 0.0)).norm() < 1e-15);
        assert!(r.residuals.iter().all(|&x| x < 1e-15));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = ReducedPoly::new(&coeffs(&[0.5, 0.3, 0.15, 0.05]));
        let z = Complex64::new(0.3, -0.7);
        let h = 1e-6;
        let fd = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
        let (_, d) = p.eval_with_derivative(z);
        assert!((fd - d).norm() < 1e-8);
    }

    #[test]
    fn recovers_prescribed_roots() {
        // (λ − 1)(λ − 0.5)(λ + 0.25)(λ² + 0.01) expanded; roots span a wide range
        let roots = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.25, 0.0),
            Complex64::new(0.0, 0.1),
            Complex64::new(0.0, -0.1),
        ];
        let mut a = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); a.len() + 1];
            for (i, c) in a.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            a = next;
        }
        let c: Vec<f64> = a[1..].iter().map(|z| -z.re).collect();
        let found = reduced_poly_roots(&coeffs(&c)).unwrap();
        for r in roots {
            assert!(found.distance_to(r) < 1e-13, "{r}");
        }
        assert!(found.conjugate_asymmetry() < 1e-13);
    }

    #[test]
    fn tiny_trailing_coefficients() {
        // roots 10^-k for k = 0..8: coefficients down to 1e-36
        let mut a = vec![1.0f64];
        for k in 0..9 {
            let r = 10f64.powi(-k);
            let mut next = vec![0.0; a.len() + 1];
            for (i, c) in a.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            a = next;
        }
        let c: Vec<f64> = a[1..].iter().map(|x| -x).collect();
        let found = reduced_poly_roots(&coeffs(&c)).unwrap();
        for k in 0..9 {
            let r = 10f64.powi(-k);
            let d = found.distance_to(Complex64::new(r, 0.0));
            assert!(d < 1e-12 * r, "root {r}: distance {d}");
        }
    }
}
