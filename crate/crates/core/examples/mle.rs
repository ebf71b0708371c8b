//! Maximum likelihood: exhaustive search on a small sample, seeded hill
//! climbing on a larger one.
//!
//! cargo run --release --example mle

use outcome_types::mle::{self, MleConfig};
use outcome_types::{log_likelihood, lsq, GroupCounts, LsqConfig, Probability};

fn main() -> outcome_types::Result<()> {
    let p = Probability::HALF;

    let small = GroupCounts::new([6, 9, 8, 7]);
    let exact = mle::mle_exact(&small, p)?;
    println!(
        "exact     g = {:?}: t_hat = {:?}, log-likelihood {:.6}, ties {}, evaluations {}",
        small.0,
        exact.t_hat.0,
        exact.score.value(),
        exact.ties,
        exact.diagnostics.evaluations
    );

    let large = GroupCounts::new([60, 140, 75, 125]);
    let heur = mle::estimate(&large, p, &MleConfig::heuristic(3))?;
    let lsq_est = lsq::solve(&large, p, &LsqConfig::default())?;
    println!(
        "heuristic g = {:?}: t_hat = {:?}, log-likelihood {:.6} ({} restarts)",
        large.0,
        heur.t_hat.0,
        heur.score.value(),
        heur.diagnostics.restarts
    );
    println!(
        "least squares t_hat = {:?} has log-likelihood {:.6}",
        lsq_est.t_hat.0,
        log_likelihood(&lsq_est.t_hat, &large, p).value()
    );
    Ok(())
}
