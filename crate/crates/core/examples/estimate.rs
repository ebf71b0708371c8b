//! Least-squares estimate under each solver mode.
//!
//! cargo run --release --example estimate -- 30 45 38 40 0.5

use outcome_types::lsq::{self, subset_errors};
use outcome_types::{GroupCounts, LsqConfig, LsqMode, Probability};

fn main() -> outcome_types::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let (g, p) = match args.as_slice() {
        [a, b, c, d, p] => ([*a as u64, *b as u64, *c as u64, *d as u64], *p),
        [] => ([30, 45, 38, 40], 0.5),
        _ => panic!("usage: estimate [g1 g2 g3 g4 p]"),
    };
    let g = GroupCounts::new(g);
    let p = Probability::new(p)?;

    for mode in [
        LsqMode::Exact,
        LsqMode::RelaxAndSearch,
        LsqMode::BranchAndBound,
    ] {
        let est = lsq::solve(&g, p, &LsqConfig::with_mode(mode))?;
        println!(
            "{:<17} t_hat = {:?}  objective = {:.9}  ties = {}  evaluations = {}",
            mode.to_string(),
            est.t_hat.0,
            est.score.value(),
            est.ties,
            est.diagnostics.evaluations
        );
    }

    let est = lsq::solve(&g, p, &LsqConfig::default())?;
    println!("\nper-subset errors at the estimate:");
    for e in subset_errors(&est.n_hat, p) {
        println!(
            "  types {:?}: eps = {:>8.3}, term = {:.6}",
            e.subset.members(),
            e.epsilon,
            e.term()
        );
    }
    Ok(())
}
