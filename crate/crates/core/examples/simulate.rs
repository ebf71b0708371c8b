//! Simulates an experiment from known types and recovers them.
//!
//! cargo run --release --example simulate -- 42

use outcome_types::resampling::simulate_experiment;
use outcome_types::{lsq, rng, LsqConfig, Probability, TypeCounts};

fn main() -> outcome_types::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .map_or(42, |a| a.parse().expect("seed"));
    let p = Probability::new(0.5)?;
    let t = TypeCounts::new([120, 40, 25, 30]);
    let g = simulate_experiment(&t, p, &mut rng::stream(seed, 0));
    let est = lsq::solve(&g, p, &LsqConfig::default())?;
    println!("true t    = {:?}", t.0);
    println!("observed g = {:?}", g.0);
    println!(
        "t_hat     = {:?} (objective {:.6})",
        est.t_hat.0,
        est.score.value()
    );
    println!("cells:");
    for row in est.n_hat.rows() {
        println!("  {row:?}");
    }
    Ok(())
}
