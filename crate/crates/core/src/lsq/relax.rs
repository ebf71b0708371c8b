//! Relax-and-search: continuous coordinate descent on the relaxed box,
//! rounding to the surrounding lattice corners, then integer local search.
//!
//! The relaxed objective is convex (each term is a square over an affine
//! positive denominator), so one-dimensional golden-section search is exact
//! up to its tolerance along each coordinate.

use rand::Rng;
use rayon::prelude::*;

use crate::lsq::{tie_tol, Incumbent, LsqConfig, Program};
use crate::rng;

const SWEEP_TOL: f64 = 1e-10;
const GOLDEN: f64 = 0.618_033_988_749_894_8;

pub(super) fn solve(program: &Program, cfg: &LsqConfig) -> Incumbent {
    (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|k| {
            let start = starting_point(program, cfg.seed, k);
            run_from(program, start, cfg.max_iterations)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Incumbent::new(), |mut acc, inc| {
            acc.merge(inc);
            acc
        })
}

/// Start 0 is the box centre, starts 1..=16 its corners, the rest uniform
/// random points from stream `k`.
fn starting_point(program: &Program, seed: u64, k: u64) -> [f64; 4] {
    let upper = program.upper_f64();
    match k {
        0 => upper.map(|u| u / 2.0),
        1..=16 => {
            let bits = k - 1;
            let mut x = [0.0; 4];
            for j in 0..4 {
                if bits & (1 << j) != 0 {
                    x[j] = upper[j];
                }
            }
            x
        }
        _ => {
            let mut r = rng::stream(seed, k);
            upper.map(|u| r.random::<f64>() * u)
        }
    }
}

/// Descends from `start` and returns the integer local minimum reached.
pub(super) fn run_from(program: &Program, start: [f64; 4], max_sweeps: u32) -> Incumbent {
    let mut inc = Incumbent::new();
    inc.diagnostics.restarts = 1;
    let (relaxed, sweeps) = coordinate_descent(program, start, max_sweeps);
    inc.diagnostics.iterations += sweeps as u64;

    let (x, f, steps, evals) = polish(program, relaxed);
    inc.diagnostics.iterations += steps;
    inc.diagnostics.evaluations += evals;
    inc.offer(x, f);
    inc
}

fn coordinate_descent(program: &Program, mut x: [f64; 4], max_sweeps: u32) -> ([f64; 4], u32) {
    let upper = program.upper_f64();
    let mut f = program.eval(&x);
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let before = f;
        for j in 0..4 {
            if upper[j] == 0.0 {
                continue;
            }
            let (xj, fj) = golden_section(
                |v| {
                    let mut y = x;
                    y[j] = v;
                    program.eval(&y)
                },
                0.0,
                upper[j],
            );
            if fj < f {
                x[j] = xj;
                f = fj;
            }
        }
        if before - f < SWEEP_TOL {
            break;
        }
    }
    (x, sweeps)
}

/// Minimizes a unimodal function on `[a, b]`.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let tol = 1e-9 * b.abs().max(1.0);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    // The endpoints are often optimal when the minimum sits on the boundary.
    [(a, f(a)), (b, f(b)), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Largest per-coordinate offset tried once king moves stall.
const WIDE_RADIUS: u32 = 2;

/// Rounds a relaxed point to its best floor/ceil corner, then takes
/// steepest-descent steps over the 80 king-move neighbours (every
/// combination of -1, 0, +1 per coordinate). When none improves, the
/// 624 offsets in `{-2..=2}^4` are tried before stopping; integer local
/// minima two steps apart are common on small samples.
fn polish(program: &Program, relaxed: [f64; 4]) -> ([u64; 4], f64, u64, u64) {
    let upper = program.upper();
    let mut evals = 0u64;
    let mut best: Option<([u64; 4], f64)> = None;
    for corner in 0..16u32 {
        let mut x = [0u64; 4];
        for j in 0..4 {
            let v = if corner & (1 << j) != 0 {
                relaxed[j].ceil()
            } else {
                relaxed[j].floor()
            };
            x[j] = (v.max(0.0) as u64).min(upper[j]);
        }
        let f = program.eval_int(x);
        evals += 1;
        if better(f, x, best) {
            best = Some((x, f));
        }
    }
    let (mut x, mut f) = best.expect("sixteen corners evaluated");
    let mut steps = 0u64;
    let mut radius: u32 = 1;
    loop {
        let side = 2 * radius + 1;
        let centre = side.pow(4) / 2;
        let mut step: Option<([u64; 4], f64)> = None;
        for code in (0..side.pow(4)).filter(|&c| c != centre) {
            let Some(y) = neighbour(x, code, radius, &upper) else {
                continue;
            };
            let fy = program.eval_int(y);
            evals += 1;
            if fy < f - tie_tol(f) && better(fy, y, step) {
                step = Some((y, fy));
            }
        }
        match step {
            Some((y, fy)) => {
                x = y;
                f = fy;
                steps += 1;
                radius = 1;
            }
            None if radius < WIDE_RADIUS => radius += 1,
            None => break,
        }
    }
    (x, f, steps, evals)
}

/// `code` in base `2 radius + 1` gives the offset of each coordinate, from
/// `-radius` to `+radius`.
#[inline]
fn neighbour(x: [u64; 4], code: u32, radius: u32, upper: &[u64; 4]) -> Option<[u64; 4]> {
    let side = 2 * radius + 1;
    let mut y = x;
    let mut c = code;
    for j in 0..4 {
        let offset = (c % side) as i64 - radius as i64;
        let v = y[j] as i64 + offset;
        if v < 0 || v as u64 > upper[j] {
            return None;
        }
        y[j] = v as u64;
        c /= side;
    }
    Some(y)
}

/// Strictly lower value, or a tie with a lexicographically smaller point.
#[inline]
fn better(f: f64, x: [u64; 4], current: Option<([u64; 4], f64)>) -> bool {
    match current {
        None => true,
        Some((cx, cf)) => f < cf - tie_tol(cf) || (f <= cf + tie_tol(cf) && x < cx),
    }
}
