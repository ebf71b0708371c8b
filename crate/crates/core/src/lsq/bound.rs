//! Depth-first branch and bound over the free-coordinate box.
//!
//! Boxes are pruned when their lower bound exceeds the incumbent
//! by more than the tie tolerance, so every tied optimum is still visited.

use crate::lsq::{relax, Incumbent, LsqConfig, Program};

/// Boxes with at most this many lattice points are enumerated directly.
const LEAF_SIZE: u64 = 16;

pub(super) fn solve(program: &Program, cfg: &LsqConfig) -> Incumbent {
    let upper = program.upper();
    // Relax-and-search usually lands on the optimum, leaving the tree to
    // certify it.
    let mut inc = relax::solve(program, cfg);

    let bound = |lo: &[u64; 4], hi: &[u64; 4]| {
        program.lower_bound(&lo.map(|v| v as f64), &hi.map(|v| v as f64))
    };
    let mut stack: Vec<([u64; 4], [u64; 4], f64)> = vec![([0; 4], upper, bound(&[0; 4], &upper))];
    let mut nodes = 0u64;
    let mut evals = 0u64;
    while let Some((lo, hi, lb)) = stack.pop() {
        nodes += 1;
        if lb > inc.threshold() {
            continue;
        }
        let size: u64 = (0..4).map(|k| hi[k] - lo[k] + 1).product();
        if size <= LEAF_SIZE {
            for x1 in lo[0]..=hi[0] {
                for x2 in lo[1]..=hi[1] {
                    for x3 in lo[2]..=hi[2] {
                        for x4 in lo[3]..=hi[3] {
                            let x = [x1, x2, x3, x4];
                            inc.offer(x, program.eval_int(x));
                        }
                    }
                }
            }
            evals += size;
            continue;
        }
        let j = (0..4)
            .max_by_key(|&k| (hi[k] - lo[k], std::cmp::Reverse(k)))
            .unwrap();
        let mid = lo[j] + (hi[j] - lo[j]) / 2;
        let mut left_hi = hi;
        left_hi[j] = mid;
        let mut right_lo = lo;
        right_lo[j] = mid + 1;
        let left = (lo, left_hi, bound(&lo, &left_hi));
        let right = (right_lo, hi, bound(&right_lo, &hi));
        // Explore the more promising child first.
        if left.2 <= right.2 {
            stack.push(right);
            stack.push(left);
        } else {
            stack.push(left);
            stack.push(right);
        }
    }
    inc.diagnostics.nodes += nodes;
    inc.diagnostics.evaluations += evals;
    inc
}
