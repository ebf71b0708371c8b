//! Exact probability of observed counts under candidate type compositions.
//!
//! cargo run --release --example likelihood

use outcome_types::likelihood::Likelihood;
use outcome_types::{log_likelihood, GroupCounts, Probability, TypeCounts};

fn main() -> outcome_types::Result<()> {
    let p = Probability::HALF;
    let g = GroupCounts::new([3, 2, 1, 4]);
    for t in [
        [5, 0, 0, 5],
        [4, 2, 0, 4],
        [4, 0, 2, 4],
        [3, 1, 1, 5],
        [10, 0, 0, 0],
    ] {
        let t = TypeCounts::new(t);
        let ll = log_likelihood(&t, &g, p);
        println!("t = {:?}: log P = {}  P = {:.6}", t.0, ll, ll.prob());
    }

    // Summing over every group vector with the right total gives one.
    let t = TypeCounts::new([2, 1, 1, 2]);
    let mut lik = Likelihood::new(p, t.total());
    let n = t.total();
    let mut total = 0.0;
    for g1 in 0..=n {
        for g2 in 0..=n - g1 {
            for g3 in 0..=n - g1 - g2 {
                let g = GroupCounts::new([g1, g2, g3, n - g1 - g2 - g3]);
                total += lik.log_prob(&t, &g).prob();
            }
        }
    }
    println!("\nsum over all g for t = {:?}: {total:.15}", t.0);
    Ok(())
}
