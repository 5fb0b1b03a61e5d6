// SPDX-License-Identifier: Apache-2.0

//! The divisor network: link counts, matrix-free operators and a dense
//! oracle for small sizes.

mod dense;
mod operator;
mod table;

pub use dense::{dense_adjacency, dense_matrix, dense_s0, DENSE_MAX_N};
pub use operator::{
    apply_google, apply_s0, apply_s0_with, dangling_mass, Formulation, GoogleOperator,
};
pub(crate) use operator::s0_gather;
pub use table::{
    link_count, multiplicity, nilpotency_index, DivisorCountTable, ModelVariant, NetworkStats,
    MAX_N,
};
