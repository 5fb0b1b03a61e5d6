// SPDX-License-Identifier: Apache-2.0

//! Rank order, degeneracy plateaus, fits and cross-size stability.

mod branch;
mod fit;
mod rank;
mod stability;

pub use branch::{branch_profile, top_branch_is_prime, BranchRecord, SPF_CAP};
pub use fit::{
    gamma1_fit, inverse_log_fit, link_growth_fit, linfit, named_fits, plateau_fit, polyfit,
    prime_branch_fit, superconvergence_fit, zipf_fit, FitRanges, FitResult, KSampling,
    NamedFits, SizeSeries,
};
pub use rank::{near_ties, plateau_kd, rank_order, RankTable};
pub use stability::{stability, StabilityReport};
