use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lsq::{Incumbent, Program};

/// Evaluates every lattice point of the box.
pub(super) fn solve(program: &Program, cap: u128) -> Result<Incumbent> {
    let size = program.box_size();
    if size > cap {
        return Err(Error::EnumerationCap {
            what: "the free-coordinate box",
            size,
            cap,
            hint: "use branch_and_bound or relax_and_search mode",
        });
    }
    let [u1, u2, u3, u4] = program.upper();
    let best = (0..=u1)
        .into_par_iter()
        .map(|x1| {
            let mut inc = Incumbent::new();
            for x2 in 0..=u2 {
                for x3 in 0..=u3 {
                    for x4 in 0..=u4 {
                        let x = [x1, x2, x3, x4];
                        inc.offer(x, program.eval_int(x));
                    }
                }
            }
            inc.diagnostics.evaluations = (u2 + 1) * (u3 + 1) * (u4 + 1);
            inc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Incumbent::new(), |mut acc, inc| {
            acc.merge(inc);
            acc
        });
    Ok(best)
}
