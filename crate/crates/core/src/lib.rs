//! Estimate how many participants of a two-arm randomized experiment with a
//! binary outcome would live regardless, be saved, be killed, or die
//! regardless, using only the four observed (arm, outcome) counts and the
//! assignment probability.
//!
//! - [`likelihood`]: exact `P(G = g | t, p)` as a convolution of binomials.
//! - [`lsq`]: the variance-weighted least-squares estimator.
//! - [`mle`]: maximum likelihood by exhaustive or seeded local search.
//! - [`resampling`]: bootstrap standard errors and Monte Carlo evaluation.
//! - [`cli`]: report generation behind the `outcome-types` binary.

pub mod cli;
pub mod error;
pub mod likelihood;
pub mod lsq;
pub mod mle;
pub mod model;
pub mod resampling;
pub mod rng;

pub use error::{Error, Result};
pub use likelihood::{log_binom_pmf, log_likelihood, LogProb};
pub use lsq::{LsqConfig, LsqMode};
pub use model::{
    cell_matrix_from_free_vars, reduced_form, structural_zero_mask, CellMatrix, Design,
    Diagnostics, EstimateResult, GroupCounts, Probability, Score, TypeCounts,
};

/// Observed counts from the PROWESS sepsis trial: 210 dead and 640 alive in
/// the intervention arm, 259 dead and 581 alive in the control arm.
pub const PROWESS_GROUPS: GroupCounts = GroupCounts::new([210, 640, 259, 581]);

/// Published least-squares estimate for the PROWESS data, as free coordinates
/// `(n(1,2), n(2,3), n(3,1), n(1,4))`. Its rows are `t = (964, 308, 205, 213)`.
pub const PROWESS_PUBLISHED_FREE_VARS: [u64; 4] = [485, 153, 103, 479];
