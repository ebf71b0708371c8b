//! Monte Carlo bias and RMSE of the least-squares estimator.
//!
//! cargo run --release --example monte_carlo -- 1000

use outcome_types::resampling::monte_carlo;
use outcome_types::{LsqConfig, Probability, TypeCounts};

fn main() -> outcome_types::Result<()> {
    let m = std::env::args()
        .nth(1)
        .map_or(200, |a| a.parse().expect("simulation count"));
    let t = TypeCounts::new([964, 308, 205, 213]);
    let report = monte_carlo(&t, Probability::HALF, m, 1, &LsqConfig::default())?;
    println!(
        "{} simulations from t = {:?} ({} failed)",
        report.m,
        t.0,
        report.failures.len()
    );
    println!(
        "{:<18}{:>12}{:>10}{:>12}",
        "type", "mean bias", "rmse", "mean |err|"
    );
    for (i, name) in ["live regardless", "saved", "killed", "die regardless"]
        .iter()
        .enumerate()
    {
        println!(
            "{name:<18}{:>12.2}{:>10.2}{:>12.2}",
            report.mean_bias[i], report.rmse[i], report.mean_abs_error[i]
        );
    }
    Ok(())
}
