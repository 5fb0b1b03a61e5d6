// SPDX-License-Identifier: Apache-2.0

//! Least-squares fits of rank, size and convergence data.

use nalgebra::{DMatrix, DVector};

use super::rank::RankTable;
use crate::error::{Error, Result};
use crate::sieve::prime_flags;
use crate::vector::ProbVector;

/// One fitted model.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitResult {
    pub model: String,
    pub param_names: Vec<String>,
    pub params: Vec<f64>,
    pub stderrs: Vec<f64>,
    /// Range of the independent variable actually covered.
    pub range: (f64, f64),
    pub n_points: usize,
    /// Euclidean norm of the residuals.
    pub residual: f64,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.param_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.params[i])
    }

    pub fn stderr(&self, name: &str) -> Option<f64> {
        self.param_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.stderrs[i])
    }
}

/// Ordinary least squares for `y ≈ Σ_k β_k x^k`, `k = 0..=degree`.
///
/// Returns `(β, standard errors, residual norm)`.
pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let p = degree + 1;
    if x.len() != y.len() {
        return Err(Error::DegenerateFit(format!(
            "length mismatch {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < p + 1 {
        return Err(Error::DegenerateFit(format!(
            "{} points for {p} parameters",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite data".into()));
    }
    // Center and scale x for conditioning, then map back.
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let spread = x.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if spread == 0.0 {
        return Err(Error::DegenerateFit("independent variable has zero variance".into()));
    }
    let a = DMatrix::from_fn(n, p, |i, k| ((x[i] - mean) / spread).powi(k as i32));
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let smin = svd.singular_values.min();
    if smin <= 1e-12 * svd.singular_values.max() {
        return Err(Error::DegenerateFit("rank-deficient design".into()));
    }
    let coef = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let resid = &b - &a * &coef;
    let rss = resid.norm_squared();
    let sigma2 = if n > p { rss / (n - p) as f64 } else { 0.0 };
    let cov = (a.transpose() * &a)
        .try_inverse()
        .ok_or_else(|| Error::DegenerateFit("singular normal matrix".into()))?
        * sigma2;

    // t = (x − mean)/spread; expand Σ coef_k t^k into powers of x.
    let mut map = DMatrix::<f64>::zeros(p, p); // map[(j, k)]: weight of coef_k on x^j
    for k in 0..p {
        for j in 0..=k {
            let binom = binomial(k, j) as f64;
            map[(j, k)] = binom * (-mean).powi((k - j) as i32) / spread.powi(k as i32);
        }
    }
    let beta = &map * &coef;
    let beta_cov = &map * cov * map.transpose();
    let stderrs = (0..p).map(|i| beta_cov[(i, i)].max(0.0).sqrt()).collect();
    Ok((beta.iter().copied().collect(), stderrs, rss.sqrt()))
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn range_of(x: &[f64]) -> (f64, f64) {
    x.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// `y = a + b x` with standard errors.
pub fn linfit(x: &[f64], y: &[f64]) -> Result<FitResult> {
    let (params, stderrs, residual) = polyfit(x, y, 1)?;
    Ok(FitResult {
        model: "linear".into(),
        param_names: vec!["a".into(), "b".into()],
        params,
        stderrs,
        range: range_of(x),
        n_points: x.len(),
        residual,
    })
}

fn named(model: &str, names: &[&str], mut fit: FitResult, range: (f64, f64)) -> FitResult {
    fit.model = model.into();
    fit.param_names = names.iter().map(|s| s.to_string()).collect();
    fit.range = range;
    fit
}

/// Which ranks inside a window enter a rank fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum KSampling {
    /// Every integer `K`.
    Every,
    /// About this many `K`, evenly spaced in `ln K`, so each decade carries
    /// equal weight.
    LogUniform(usize),
}

/// Windows over the rank index `K`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FitRanges {
    /// Open interval for `ln P = ln A − β ln K`.
    pub zipf: (f64, f64),
    pub zipf_sampling: KSampling,
    /// Open interval for `1/(P K) = a1 + b1 ln K`.
    pub inverse_log: (f64, f64),
    /// Closed interval for `n/K = a2 + b2 ln K` on the prime branch.
    pub prime_branch: (f64, f64),
}

impl Default for FitRanges {
    fn default() -> Self {
        Self {
            zipf: (10.0, 1e5),
            zipf_sampling: KSampling::LogUniform(400),
            inverse_log: (10.0, 1e3),
            prime_branch: (10.0, 1e4),
        }
    }
}

fn ks_open(rank: &RankTable, (lo, hi): (f64, f64), sampling: KSampling) -> Vec<usize> {
    let first = lo.floor() as usize + 1;
    let last = ((hi.ceil() as usize).saturating_sub(1)).min(rank.n_max());
    if first > last {
        return Vec::new();
    }
    match sampling {
        KSampling::Every => (first..=last).collect(),
        KSampling::LogUniform(m) => {
            let (a, b) = ((first as f64).ln(), (last as f64).ln());
            let m = m.max(2);
            let mut ks: Vec<usize> = (0..m)
                .map(|i| (a + (b - a) * i as f64 / (m - 1) as f64).exp().round() as usize)
                .map(|k| k.clamp(first, last))
                .collect();
            ks.dedup();
            ks
        }
    }
}

/// `ln P = ln A − β ln K`; parameters `lnA`, `beta`.
pub fn zipf_fit(
    p: &ProbVector,
    rank: &RankTable,
    window: (f64, f64),
    sampling: KSampling,
) -> Result<FitResult> {
    let (x, y): (Vec<f64>, Vec<f64>) = ks_open(rank, window, sampling)
        .into_iter()
        .map(|k| ((k as f64).ln(), p[rank.n_at(k)].ln()))
        .unzip();
    let mut fit = linfit(&x, &y)?;
    fit.params[1] = -fit.params[1];
    let r = (x[0].exp(), x[x.len() - 1].exp());
    Ok(named("zipf", &["lnA", "beta"], fit, r))
}

/// `1/(P K) = a1 + b1 ln K`.
pub fn inverse_log_fit(p: &ProbVector, rank: &RankTable, window: (f64, f64)) -> Result<FitResult> {
    let (x, y): (Vec<f64>, Vec<f64>) = ks_open(rank, window, KSampling::Every)
        .into_iter()
        .map(|k| ((k as f64).ln(), 1.0 / (p[rank.n_at(k)] * k as f64)))
        .unzip();
    let fit = linfit(&x, &y)?;
    let r = (x[0].exp(), x[x.len() - 1].exp());
    Ok(named("inverse_log", &["a1", "b1"], fit, r))
}

/// `n/K = a2 + b2 ln K` over the primes ranked in a closed `K` window.
pub fn prime_branch_fit(rank: &RankTable, window: (f64, f64)) -> Result<FitResult> {
    let last = (window.1 as usize).min(rank.n_max());
    let first = window.0.ceil() as usize;
    let n_hi = (first..=last).map(|k| rank.n_at(k)).max().unwrap_or(1);
    let flags = prime_flags(n_hi);
    let (x, y): (Vec<f64>, Vec<f64>) = (first..=last)
        .filter(|&k| flags[rank.n_at(k)])
        .map(|k| ((k as f64).ln(), rank.n_at(k) as f64 / k as f64))
        .unzip();
    let fit = linfit(&x, &y)?;
    Ok(named("prime_branch", &["a2", "b2"], fit, (first as f64, last as f64)))
}

/// `N_ℓ = N (a_ℓ + b_ℓ ln N)` over `(N, N_ℓ)` pairs.
pub fn link_growth_fit(points: &[(u64, u64)]) -> Result<FitResult> {
    let x: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|&(n, l)| l as f64 / n as f64).collect();
    let fit = linfit(&x, &y)?;
    let r = range_of(&points.iter().map(|p| p.0 as f64).collect::<Vec<_>>());
    Ok(named("link_growth", &["a_l", "b_l"], fit, r))
}

/// `K_d = a_d N^{b_d}` as a line in log-log over `(N, K_d)` pairs.
pub fn plateau_fit(points: &[(u64, usize)]) -> Result<FitResult> {
    let x: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|&(_, k)| (k as f64).ln()).collect();
    let mut fit = linfit(&x, &y)?;
    // report a_d itself, with the delta-method error
    let a = fit.params[0].exp();
    fit.stderrs[0] *= a;
    fit.params[0] = a;
    let r = range_of(&points.iter().map(|p| p.0 as f64).collect::<Vec<_>>());
    Ok(named("plateau", &["a_d", "b_d"], fit, r))
}

/// `γ1(N) = γ1(∞) + Δγ / ln N` over `(N, γ1)` pairs.
pub fn gamma1_fit(points: &[(u64, f64)]) -> Result<FitResult> {
    let x: Vec<f64> = points.iter().map(|&(n, _)| 1.0 / (n as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|&(_, g)| g).collect();
    let fit = linfit(&x, &y)?;
    let r = range_of(&points.iter().map(|p| p.0 as f64).collect::<Vec<_>>());
    Ok(named("gamma1", &["gamma_inf", "delta_gamma"], fit, r))
}

/// `ln δ_j = a3 − b3 j − c3 j²` over the positive entries of a
/// self-consistent trace (`deltas[j − 1] = δ_j`).
pub fn superconvergence_fit(deltas: &[f64]) -> Result<FitResult> {
    let (x, y): (Vec<f64>, Vec<f64>) = deltas
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0.0)
        .map(|(i, &d)| ((i + 1) as f64, d.ln()))
        .unzip();
    let (mut params, stderrs, residual) = polyfit(&x, &y, 2)?;
    params[1] = -params[1];
    params[2] = -params[2];
    Ok(FitResult {
        model: "superconvergence".into(),
        param_names: vec!["a3".into(), "b3".into(), "c3".into()],
        params,
        stderrs,
        range: range_of(&x),
        n_points: x.len(),
        residual,
    })
}

/// Cross-size data for the fits that need several network sizes.
#[derive(Debug, Clone, Default)]
pub struct SizeSeries {
    pub links: Vec<(u64, u64)>,
    pub plateaus: Vec<(u64, usize)>,
    pub gamma1: Vec<(u64, f64)>,
}

/// Every fit that the available data supports.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct NamedFits {
    pub fits: Vec<FitResult>,
    /// `(model, reason)` for fits that could not be made.
    pub skipped: Vec<(String, String)>,
}

impl NamedFits {
    pub fn get(&self, model: &str) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.model == model)
    }

    fn push(&mut self, model: &str, r: Result<FitResult>) {
        match r {
            Ok(f) => self.fits.push(f),
            Err(e) => self.skipped.push((model.into(), e.to_string())),
        }
    }
}

/// Runs the single-size fits on `p` and the cross-size fits on `series`.
pub fn named_fits(
    p: &ProbVector,
    rank: &RankTable,
    deltas: Option<&[f64]>,
    series: &SizeSeries,
    ranges: &FitRanges,
) -> NamedFits {
    let mut out = NamedFits::default();
    out.push("zipf", zipf_fit(p, rank, ranges.zipf, ranges.zipf_sampling));
    out.push("inverse_log", inverse_log_fit(p, rank, ranges.inverse_log));
    out.push("prime_branch", prime_branch_fit(rank, ranges.prime_branch));
    out.push("link_growth", link_growth_fit(&series.links));
    out.push("plateau", plateau_fit(&series.plateaus));
    out.push("gamma1", gamma1_fit(&series.gamma1));
    match deltas {
        Some(d) => out.push("superconvergence", superconvergence_fit(d)),
        None => out
            .skipped
            .push(("superconvergence".into(), "no self-consistent trace".into())),
    }
    out
}
