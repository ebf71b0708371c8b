//! Two populations with the same reduced form but different type mixes.
//!
//! cargo run --example reduced_form

use outcome_types::{reduced_form, resampling, rng, GroupCounts, Probability, TypeCounts};

fn main() -> outcome_types::Result<()> {
    let g = GroupCounts::new([210, 640, 259, 581]);
    println!("g = {:?}: reduced form {:.4}", g.0, reduced_form(&g)?);
    println!("swapped arms: {:.4}", reduced_form(&g.swap_arms())?);

    let p = Probability::HALF;
    let quiet = TypeCounts::new([1200, 100, 0, 400]);
    let noisy = TypeCounts::new([900, 400, 300, 100]);
    for t in [quiet, noisy] {
        let mut mean = 0.0;
        let draws = 2000;
        for k in 0..draws {
            let g = resampling::simulate_experiment(&t, p, &mut rng::stream(5, k));
            mean += reduced_form(&g)?;
        }
        println!(
            "t = {:?}: mean simulated reduced form {:.4}",
            t.0,
            mean / draws as f64
        );
    }
    Ok(())
}
