use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{resample_groups, sample_sd, Replicate, ReplicateFailure};
use crate::error::{Error, Result};
use crate::lsq::{self, LsqConfig};
use crate::model::{GroupCounts, Probability, TypeCounts};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    /// Requested iterations, including any that failed.
    pub iterations: u64,
    pub seed: u64,
    /// Standard deviation of each estimated type count across replicates.
    pub se: [f64; 4],
    /// Standard deviation of each estimated cell count.
    pub se_cells: [[f64; 4]; 4],
    pub replicates: Vec<Replicate>,
    pub failures: Vec<ReplicateFailure>,
}

impl BootstrapReport {
    /// Per-replicate estimates, one row per successful iteration.
    pub fn replicate_estimates(&self) -> Vec<TypeCounts> {
        self.replicates.iter().map(|r| r.t_hat).collect()
    }

    /// Largest over smallest standard error.
    pub fn se_ratio(&self) -> f64 {
        let max = self.se.iter().copied().fold(f64::MIN, f64::max);
        let min = self.se.iter().copied().fold(f64::MAX, f64::min);
        max / min
    }
}

/// Nonparametric bootstrap of the least-squares estimate.
///
/// Each iteration resamples `g.total()` participants with replacement from
/// the observed (arm, outcome) frequencies and re-solves at the design `p`.
pub fn bootstrap(
    g: &GroupCounts,
    p: Probability,
    iterations: u64,
    seed: u64,
    solver: &LsqConfig,
) -> Result<BootstrapReport> {
    if iterations == 0 {
        return Err(Error::InvalidConfig(
            "bootstrap needs at least one iteration".into(),
        ));
    }
    solver.validate()?;
    let outcomes: Vec<_> = (0..iterations)
        .into_par_iter()
        .map(|k| {
            let gk = resample_groups(g, &mut rng::stream(seed, k));
            match lsq::solve(&gk, p, solver) {
                Ok(est) => Ok((
                    Replicate {
                        index: k,
                        g: gk,
                        t_hat: est.t_hat,
                        objective: est.score.value(),
                    },
                    est.n_hat,
                )),
                Err(e) => Err(ReplicateFailure {
                    index: k,
                    g: gk,
                    error: e.to_string(),
                }),
            }
        })
        .collect();

    let mut replicates = Vec::with_capacity(outcomes.len());
    let mut cells = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok((r, n)) => {
                replicates.push(r);
                cells.push(n);
            }
            Err(f) => failures.push(f),
        }
    }

    let se = std::array::from_fn(|i| sample_sd(replicates.iter().map(move |r| r.t_hat[i] as f64)));
    let se_cells = std::array::from_fn(|i| {
        std::array::from_fn(|j| sample_sd(cells.iter().map(move |n| n.get(i, j) as f64)))
    });
    Ok(BootstrapReport {
        iterations,
        seed,
        se,
        se_cells,
        replicates,
        failures,
    })
}
