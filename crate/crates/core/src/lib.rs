// SPDX-License-Identifier: Apache-2.0

//! PageRank and spectrum of the Google matrix of the integers.
//!
//! Every integer `n <= N` links to its divisors `1 < m < n`. The resulting
//! column-normalized matrix `S0` is nilpotent, which makes the PageRank a
//! finite sum of `⌊log2 N⌋` sparse products and the nonzero spectrum the
//! roots of a polynomial of the same degree. Nothing in this crate stores
//! the matrix: the operator is applied from a table of one 32-bit count per
//! integer.
//!
//! ```
//! use divrank_core::net::{DivisorCountTable, ModelVariant};
//! use divrank_core::pagerank::pagerank_semianalytic;
//!
//! let table = DivisorCountTable::build(1000, ModelVariant::Multiplicity).unwrap();
//! assert_eq!(table.stats().n_links, 6005);
//! let (p, _) = pagerank_semianalytic(&table);
//! assert!((p.sum() - 1.0).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod error;
pub mod net;
pub mod pagerank;
pub mod sieve;
pub mod spectrum;
pub mod vector;

pub use error::{Error, Result};
pub use net::{DivisorCountTable, ModelVariant, NetworkStats};
pub use vector::ProbVector;
