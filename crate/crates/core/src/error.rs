// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the divisor-network library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size N = {n} exceeds the supported maximum {max}")]
    Capacity { n: u64, max: u64 },
    #[error("invalid size N = {0}; N must be at least 1")]
    InvalidSize(u64),
    #[error("vector length {got} does not match network size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("damping factor {0} outside (0, 1]")]
    AlphaOutOfRange(f64),
    #[error("input vector is not normalized (sum = {0})")]
    NotNormalized(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("wrong model variant: expected {expected}, got {got}")]
    WrongVariant {
        expected: &'static str,
        got: &'static str,
    },
    #[error("no convergence after {iterations} iterations (last delta {last_delta:e})")]
    NoConvergence { iterations: usize, last_delta: f64 },
    #[error("root finder failed: {found} of {degree} roots converged")]
    RootFinding {
        found: usize,
        degree: usize,
        partial: Vec<num_complex::Complex64>,
    },
    #[error("dense eigensolver did not converge")]
    EigenSolver,
    #[error("{0} is not a root of the reduced polynomial (residual {1:e})")]
    NotARoot(num_complex::Complex64, f64),
    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),
    #[error("malformed binary file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
