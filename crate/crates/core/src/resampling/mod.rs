//! Seeded, parallel resampling: bootstrap standard errors and Monte Carlo
//! evaluation of the least-squares estimator.
//!
//! Replicate `k` always draws from [`rng::stream`](crate::rng::stream)`(seed, k)`
//! and results are gathered in replicate order, so reports are identical
//! however rayon schedules the work.

mod bootstrap;
mod monte_carlo;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::model::{GroupCounts, Probability, TypeCounts};

pub use bootstrap::{bootstrap, BootstrapReport};
pub use monte_carlo::{monte_carlo, MonteCarloReport};

/// Draws `Binomial(n, q)`, treating the degenerate edges exactly.
fn binomial(n: u64, q: f64, rng: &mut impl Rng) -> u64 {
    if n == 0 || q <= 0.0 {
        0
    } else if q >= 1.0 {
        n
    } else {
        Binomial::new(n, q).expect("0 < q < 1").sample(rng)
    }
}

/// Runs one randomized experiment on a population with known types.
///
/// Each type sends `Binomial(t(i), p)` participants to the intervention arm.
/// Live-regardless participants are then observed alive in their arm,
/// saved ones alive if treated and dead otherwise, killed ones dead if
/// treated and alive otherwise, and die-regardless ones dead.
pub fn simulate_experiment(t: &TypeCounts, p: Probability, rng: &mut impl Rng) -> GroupCounts {
    let k = t.0.map(|n| binomial(n, p.get(), rng));
    let [t1, t2, t3, t4] = t.0;
    GroupCounts::new([
        k[2] + k[3],
        k[0] + k[1],
        (t2 - k[1]) + (t4 - k[3]),
        (t1 - k[0]) + (t3 - k[2]),
    ])
}

/// Resamples `g.total()` participants with replacement from the empirical
/// (arm, outcome) distribution of `g`.
pub fn resample_groups(g: &GroupCounts, rng: &mut impl Rng) -> GroupCounts {
    let mut remaining = g.total();
    let mut mass = g.total();
    let mut out = [0u64; 4];
    for j in 0..3 {
        if remaining == 0 || mass == 0 {
            break;
        }
        out[j] = binomial(remaining, g[j] as f64 / mass as f64, rng);
        remaining -= out[j];
        mass -= g[j];
    }
    out[3] = remaining;
    GroupCounts::new(out)
}

/// One replicate of a bootstrap or Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replicate {
    /// Replicate index, which is also its random stream index.
    pub index: u64,
    /// Group counts drawn for this replicate.
    pub g: GroupCounts,
    pub t_hat: TypeCounts,
    pub objective: f64,
}

/// A replicate whose estimator call failed; excluded from the aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateFailure {
    pub index: u64,
    pub g: GroupCounts,
    pub error: String,
}

/// Header of the replicate CSV stream.
pub const REPLICATE_CSV_HEADER: &str = "replicate,g1,g2,g3,g4,t1,t2,t3,t4,objective";

impl Replicate {
    /// One CSV row matching [`REPLICATE_CSV_HEADER`].
    pub fn csv_row(&self, fmt_float: impl Fn(f64) -> String) -> String {
        let [g1, g2, g3, g4] = self.g.0;
        let [t1, t2, t3, t4] = self.t_hat.0;
        format!(
            "{},{g1},{g2},{g3},{g4},{t1},{t2},{t3},{t4},{}",
            self.index,
            fmt_float(self.objective)
        )
    }
}

/// Sample standard deviation (denominator `n - 1`); zero for fewer than two
/// values.
pub(crate) fn sample_sd(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count();
    if n < 2 {
        return 0.0;
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn live_regardless_only_lands_alive() {
        let mut rng = stream(11, 0);
        for _ in 0..200 {
            let g =
                simulate_experiment(&TypeCounts::new([9, 0, 0, 0]), Probability::HALF, &mut rng);
            assert_eq!(g[0], 0);
            assert_eq!(g[2], 0);
            assert_eq!(g[1] + g[3], 9);
        }
    }

    #[test]
    fn simulated_totals_match_types() {
        let mut rng = stream(3, 1);
        let t = TypeCounts::new([12, 5, 7, 3]);
        for _ in 0..100 {
            let g = simulate_experiment(&t, Probability::new(0.3).unwrap(), &mut rng);
            assert_eq!(g.total(), t.total());
            // Saved and die-regardless controls are the only dead controls.
            assert!(g[2] <= 5 + 3);
        }
    }

    #[test]
    fn resampling_preserves_total_and_support() {
        let mut rng = stream(5, 9);
        let g = GroupCounts::new([0, 13, 4, 0]);
        for _ in 0..100 {
            let r = resample_groups(&g, &mut rng);
            assert_eq!(r.total(), 17);
            assert_eq!(r[0], 0);
            assert_eq!(r[3], 0);
        }
        assert_eq!(
            resample_groups(&GroupCounts::new([0; 4]), &mut rng),
            GroupCounts::new([0; 4])
        );
    }

    #[test]
    fn sd_of_small_samples() {
        assert_eq!(sample_sd([3.0].into_iter()), 0.0);
        assert!(
            (sample_sd([1.0, 2.0, 3.0, 4.0].into_iter()) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15
        );
    }

    #[test]
    fn csv_row_layout() {
        let r = Replicate {
            index: 4,
            g: GroupCounts::new([1, 2, 3, 4]),
            t_hat: TypeCounts::new([5, 2, 2, 1]),
            objective: 0.25,
        };
        assert_eq!(r.csv_row(|v| v.to_string()), "4,1,2,3,4,5,2,2,1,0.25");
        assert_eq!(REPLICATE_CSV_HEADER.split(',').count(), 10);
    }
}
