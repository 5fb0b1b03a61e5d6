// SPDX-License-Identifier: Apache-2.0

mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use divrank_core::analysis::{rank_order, stability};
use divrank_core::net::{apply_google, apply_s0, dangling_mass, GoogleOperator};
use divrank_core::pagerank::{krylov_vectors, pagerank_power, semianalytic};
use divrank_core::spectrum::{
    compute_cj, eigen_residual, eigvec_from_lambda, reduced_poly_roots, ReducedPoly,
};
use divrank_core::{DivisorCountTable, ModelVariant, ProbVector};

fn variant() -> impl Strategy<Value = ModelVariant> {
    prop::sample::select(ModelVariant::ALL.to_vec())
}

fn table(n: usize, v: ModelVariant) -> DivisorCountTable {
    DivisorCountTable::build(n as u64, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matrix_free_matches_dense(
        n in 1usize..=256,
        v in variant(),
        seed in prop::collection::vec(0.0f64..1.0, 256),
    ) {
        let t = table(n, v);
        let x = &seed[..n];
        let y = apply_s0(&ProbVector::from_values(x), &t, n).unwrap();
        let dense = common::matvec(&common::dense_s0(n, v), x);
        prop_assert!(common::linf(y.as_slice(), &dense) <= 1e-13);
    }

    #[test]
    fn nilpotent_after_l_steps(n in 1usize..=5000, v in variant()) {
        let t = table(n, v);
        let mut x = ProbVector::from_values(&(1..=n).map(|k| 1.0 + (k % 7) as f64).collect::<Vec<_>>());
        for j in 0..t.nilpotency_index() {
            x = apply_s0(&x, &t, n).unwrap();
            // support confined to n / 2^(j+1)
            prop_assert!(x.support_max() <= n >> (j + 1));
        }
        prop_assert!(x.as_slice().iter().all(|&e| e == 0.0));
    }

    #[test]
    fn active_limit_support(n in 2usize..=3000, limit_frac in 0.0f64..=1.0) {
        let t = table(n, ModelVariant::Multiplicity);
        let limit = (limit_frac * n as f64) as usize;
        let y = apply_s0(&ProbVector::uniform(n), &t, limit).unwrap();
        prop_assert!(y.support_max() <= limit / 2);
    }

    #[test]
    fn google_preserves_column_sums(n in 1usize..=2000, v in variant(), alpha in 0.05f64..=1.0) {
        let t = table(n, v);
        let x = ProbVector::from_values(&(1..=n).map(|k| ((k * 31) % 17) as f64 + 0.5).collect::<Vec<_>>());
        let op = GoogleOperator::new(&t, alpha).unwrap();
        let y = op.apply(&x).unwrap();
        prop_assert!((y.sum() - x.sum()).abs() <= 1e-13 * x.sum());
        let mut p = x.clone();
        p.normalize();
        let q = apply_google(&p, &t, alpha).unwrap();
        prop_assert!((q.sum() - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn rank_order_scale_invariant(vals in prop::collection::vec(0u8..20, 1..300), c in 1e-3f64..1e3) {
        let p = ProbVector::from_values(&vals.iter().map(|&v| v as f64 + 1.0).collect::<Vec<_>>());
        let mut q = p.clone();
        q.scale(c);
        let a = rank_order(&p);
        let b = rank_order(&q);
        prop_assert_eq!(&a.order, &b.order);
        let n = vals.len() as u64;
        prop_assert_eq!(a.order.iter().map(|&k| k as u64).sum::<u64>(), n * (n + 1) / 2);
        for (i, &m) in a.order.iter().enumerate() {
            prop_assert_eq!(a.k_of(m as usize), i + 1);
        }
        for w in a.order.windows(2) {
            let (x, y) = (p[w[0] as usize], p[w[1] as usize]);
            prop_assert!(x > y || (x == y && w[0] < w[1]));
        }
    }
}

#[test]
fn useful_identity() {
    // e^T (1 - S0) = d, column by column
    for v in ModelVariant::ALL {
        for n in [1usize, 2, 17, 300, 10_000] {
            let t = table(n, v);
            if n <= 300 {
                for col in 1..=n {
                    let mut e = ProbVector::zeros(n);
                    e[col] = 1.0;
                    let s = apply_s0(&e, &t, n).unwrap().sum();
                    let d = if t.is_dangling(col) { 1.0 } else { 0.0 };
                    assert!((1.0 - s - d).abs() < 1e-14, "{v} n={n} col={col}");
                }
            }
            // weak form for the larger sizes
            let x = ProbVector::from_values(&(1..=n).map(|k| 1.0 / k as f64).collect::<Vec<_>>());
            let lhs = x.sum() - apply_s0(&x, &t, n).unwrap().sum();
            assert!((lhs - dangling_mass(&x, &t)).abs() < 1e-12 * x.sum());
        }
    }
}

#[test]
fn power_and_semianalytic_agree() {
    for n in [1_000u64, 10_000, 100_000] {
        let t = DivisorCountTable::build(n, ModelVariant::Multiplicity).unwrap();
        let sa = semianalytic(&t).pagerank;
        let (p, _) = pagerank_power(&t, 1.0, 1e-12, 1000).unwrap();
        assert!(p.l1_distance(&sa) <= 1e-9, "N={n}");
        let gp = GoogleOperator::new(&t, 1.0).unwrap().apply(&sa).unwrap();
        assert!(gp.l1_distance(&sa) <= 1e-11, "N={n}");
    }
}

#[test]
fn top_twenty_robust_to_damping() {
    let t = DivisorCountTable::build(100_000, ModelVariant::Multiplicity).unwrap();
    let a = rank_order(&semianalytic(&t).pagerank);
    let (p, _) = pagerank_power(&t, 0.85, 1e-13, 1000).unwrap();
    let b = rank_order(&p);
    // same top twenty, adjacent swaps at most
    let mut sa = a.order[..20].to_vec();
    let mut sb = b.order[..20].to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    assert_eq!(sa, sb);
    for k in 1..=20 {
        assert!(b.k_of(a.n_at(k)).abs_diff(k) <= 1, "K={k}");
    }
    assert_eq!(a.order[..7], b.order[..7]);
}

#[test]
fn characteristic_polynomial_factors() {
    // det(λ - S) = λ^(N - l) P_r(λ) at small N
    for v in ModelVariant::ALL {
        for n in [4usize, 9, 16, 33, 64] {
            let t = table(n, v);
            let l = t.nilpotency_index();
            let poly = ReducedPoly::new(&compute_cj(&t));
            assert_eq!(poly.degree(), l);
            let s = common::dense_google(n, v, 1.0);
            for k in 0..20 {
                let r = 0.8 + 0.5 * (k as f64 / 19.0);
                let lam = Complex64::from_polar(r, 0.37 + 2.9 * k as f64);
                let m = DMatrix::from_fn(n, n, |i, j| {
                    let d = if i == j { lam } else { Complex64::new(0.0, 0.0) };
                    d - s[i][j]
                });
                let det = m.lu().determinant() / lam.powu((n - l) as u32);
                let p = poly.eval(lam);
                assert!((det - p).norm() <= 1e-6 * p.norm().max(1e-300), "{v} n={n} lam={lam}");
            }
        }
    }
}

#[test]
fn exact_spectrum_properties() {
    for n in [10_000u64, 100_000] {
        let t = DivisorCountTable::build(n, ModelVariant::Multiplicity).unwrap();
        let roots = reduced_poly_roots(&compute_cj(&t)).unwrap();
        assert_eq!(roots.len(), t.nilpotency_index());
        assert!(roots.distance_to(Complex64::new(1.0, 0.0)) <= 1e-12);
        assert!(roots.conjugate_asymmetry() <= 1e-10);
        assert!(roots.values[1].norm() < 0.6);
        let k = krylov_vectors(&t);
        for &z in &roots.values {
            let psi = eigvec_from_lambda(&t, z, &k).unwrap();
            let r = eigen_residual(&t, z, &psi).unwrap();
            assert!(r <= 1e-8, "N={n} lambda={z} residual={r:e}");
        }
    }
}

#[test]
fn stable_prefix_precedes_first_plateau() {
    let r6 = rank_order(&semianalytic(&table(1_000_000, ModelVariant::Multiplicity)).pagerank);
    let r7 = rank_order(&semianalytic(&table(10_000_000, ModelVariant::Multiplicity)).pagerank);
    let ks = stability(&r6, &r7).unwrap().k_s.unwrap();
    assert!(ks < r6.k_d && ks < r7.k_d);
}

#[test]
fn simplified_order_prefix() {
    let p = semianalytic(&table(10_000_000, ModelVariant::Simplified)).pagerank;
    let r = rank_order(&p);
    assert_eq!(r.order[..6], [2, 3, 5, 4, 7, 11]);
}
