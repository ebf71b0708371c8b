use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_experiment, Replicate, ReplicateFailure};
use crate::error::{Error, Result};
use crate::lsq::{self, LsqConfig};
use crate::model::{Probability, TypeCounts};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    /// Requested simulated experiments, including any that failed.
    pub m: u64,
    pub seed: u64,
    pub true_t: TypeCounts,
    /// `(1/M) sum_m (t_hat_m(i) - t(i))`.
    pub mean_bias: [f64; 4],
    /// `((1/M) sum_m (t_hat_m(i) - t(i))^2)^(1/2)`.
    pub rmse: [f64; 4],
    /// `(1/M) sum_m |t_hat_m(i) - t(i)|`.
    pub mean_abs_error: [f64; 4],
    pub replicates: Vec<Replicate>,
    pub failures: Vec<ReplicateFailure>,
}

/// Simulates `m` experiments from `true_t` and scores the least-squares
/// estimator on each. `M` in the averages is the number of successful
/// replicates.
pub fn monte_carlo(
    true_t: &TypeCounts,
    p: Probability,
    m: u64,
    seed: u64,
    solver: &LsqConfig,
) -> Result<MonteCarloReport> {
    if m == 0 {
        return Err(Error::InvalidConfig(
            "monte carlo needs at least one simulation".into(),
        ));
    }
    solver.validate()?;
    let outcomes: Vec<_> = (0..m)
        .into_par_iter()
        .map(|k| {
            let g = simulate_experiment(true_t, p, &mut rng::stream(seed, k));
            lsq::solve(&g, p, solver)
                .map(|est| Replicate {
                    index: k,
                    g,
                    t_hat: est.t_hat,
                    objective: est.score.value(),
                })
                .map_err(|e| ReplicateFailure {
                    index: k,
                    g,
                    error: e.to_string(),
                })
        })
        .collect();
    let (replicates, failures): (Vec<_>, Vec<_>) = outcomes.into_iter().partition(|o| o.is_ok());
    let replicates: Vec<Replicate> = replicates.into_iter().map(|o| o.unwrap()).collect();
    let failures: Vec<ReplicateFailure> = failures.into_iter().map(|o| o.unwrap_err()).collect();

    let count = replicates.len() as f64;
    let mut mean_bias = [0.0; 4];
    let mut rmse = [0.0; 4];
    let mut mean_abs_error = [0.0; 4];
    if !replicates.is_empty() {
        for i in 0..4 {
            let errs = replicates
                .iter()
                .map(|r| r.t_hat[i] as f64 - true_t[i] as f64);
            mean_bias[i] = errs.clone().sum::<f64>() / count;
            rmse[i] = (errs.clone().map(|e| e * e).sum::<f64>() / count).sqrt();
            mean_abs_error[i] = errs.map(f64::abs).sum::<f64>() / count;
        }
    }
    Ok(MonteCarloReport {
        m,
        seed,
        true_t: *true_t,
        mean_bias,
        rmse,
        mean_abs_error,
        replicates,
        failures,
    })
}
