//! Bootstrap standard errors of the least-squares estimate.
//!
//! cargo run --release --example bootstrap -- 200

use outcome_types::resampling::bootstrap;
use outcome_types::{GroupCounts, LsqConfig, Probability};

fn main() -> outcome_types::Result<()> {
    let iterations = std::env::args()
        .nth(1)
        .map_or(200, |a| a.parse().expect("iteration count"));
    let g = GroupCounts::new([42, 128, 52, 116]);
    let report = bootstrap(&g, Probability::HALF, iterations, 11, &LsqConfig::default())?;
    println!(
        "g = {:?}, {} iterations, {} failed",
        g.0,
        report.iterations,
        report.failures.len()
    );
    for (name, se) in ["live regardless", "saved", "killed", "die regardless"]
        .iter()
        .zip(report.se)
    {
        println!("  se({name}) = {se:.2}");
    }
    println!("  cell standard errors:");
    for row in report.se_cells {
        println!("    {:?}", row.map(|v| (v * 100.0).round() / 100.0));
    }
    println!("  max/min ratio {:.3}", report.se_ratio());
    Ok(())
}
