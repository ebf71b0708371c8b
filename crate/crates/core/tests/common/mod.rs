//! Independent oracles shared by the integration tests and the acceptance
//! suite. None of them call into the solvers they check.

#![allow(dead_code)]

use std::collections::HashMap;

/// Observed group of one participant of type `i` (0-based) given the arm.
pub fn group_of(i: usize, treated: bool) -> usize {
    match (i, treated) {
        (0, true) | (1, true) => 1,
        (0, false) | (2, false) => 3,
        (1, false) | (3, false) => 2,
        (2, true) | (3, true) => 0,
        _ => unreachable!(),
    }
}

/// Exact distribution of `g` by enumerating every arm assignment of the
/// `sum t` participants. Returns, per reachable `g`, how many assignments
/// with `k` treated participants produce it, so probabilities can be formed
/// without summing thousands of small floats.
pub fn assignment_counts(t: [u64; 4]) -> HashMap<[u64; 4], Vec<u64>> {
    let types: Vec<usize> = (0..4)
        .flat_map(|i| std::iter::repeat_n(i, t[i] as usize))
        .collect();
    let n = types.len();
    assert!(n <= 20, "2^{n} assignments is too many");
    let mut out: HashMap<[u64; 4], Vec<u64>> = HashMap::new();
    for mask in 0u32..(1 << n) {
        let mut g = [0u64; 4];
        for (pos, &i) in types.iter().enumerate() {
            g[group_of(i, mask >> pos & 1 == 1)] += 1;
        }
        let k = mask.count_ones() as usize;
        out.entry(g).or_insert_with(|| vec![0; n + 1])[k] += 1;
    }
    out
}

/// `P(G = g | t, p)` from [`assignment_counts`].
pub fn assignment_distribution(t: [u64; 4], p: f64) -> HashMap<[u64; 4], f64> {
    let n = t.iter().sum::<u64>() as i32;
    assignment_counts(t)
        .into_iter()
        .map(|(g, counts)| {
            let prob = counts
                .iter()
                .enumerate()
                .map(|(k, &c)| c as f64 * p.powi(k as i32) * (1.0 - p).powi(n - k as i32))
                .sum();
            (g, prob)
        })
        .collect()
}

/// All 4-vectors of nonnegative integers summing to `n`, lexicographically.
pub fn compositions(n: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                out.push([a, b, c, n - a - b - c]);
            }
        }
    }
    out
}

/// Cells that may be nonzero: `(type, group)`, 0-based.
pub const OPEN_CELLS: [(usize, usize); 8] = [
    (0, 1),
    (0, 3),
    (1, 1),
    (1, 2),
    (2, 0),
    (2, 3),
    (3, 0),
    (3, 2),
];

/// Every 4x4 count matrix with column sums `g` and zeros outside
/// [`OPEN_CELLS`], built column by column.
pub fn all_cell_matrices(g: [u64; 4]) -> Vec<[[u64; 4]; 4]> {
    let mut out = vec![[[0u64; 4]; 4]];
    for j in 0..4 {
        let rows: Vec<usize> = OPEN_CELLS
            .iter()
            .filter(|c| c.1 == j)
            .map(|c| c.0)
            .collect();
        assert_eq!(rows.len(), 2);
        let mut next = Vec::new();
        for m in &out {
            for a in 0..=g[j] {
                let mut m = *m;
                m[rows[0]][j] = a;
                m[rows[1]][j] = g[j] - a;
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// Least-squares objective straight from its definition.
pub fn objective_oracle(n: &[[u64; 4]; 4], p: f64) -> f64 {
    let mut s = 0.0;
    for subset in 1u32..16 {
        let mut treated = 0.0;
        let mut total = 0.0;
        for (i, row) in n.iter().enumerate() {
            if subset >> i & 1 == 1 {
                treated += (row[0] + row[1]) as f64;
                total += row.iter().sum::<u64>() as f64;
            }
        }
        if total > 0.0 {
            let e = treated - p * total;
            s += e * e / (p * (1.0 - p) * total);
        }
    }
    s
}

/// Minimum objective over all feasible matrices, by brute force.
pub fn lsq_minimum(g: [u64; 4], p: f64) -> f64 {
    all_cell_matrices(g)
        .iter()
        .map(|n| objective_oracle(n, p))
        .fold(f64::INFINITY, f64::min)
}

pub fn row_sums(n: &[[u64; 4]; 4]) -> [u64; 4] {
    n.map(|r| r.iter().sum())
}

/// Small deterministic generator for test instances.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    /// Uniform-ish random 4-vector with sum at most `max_total`.
    pub fn counts(&mut self, max_total: u64) -> [u64; 4] {
        let n = self.below(max_total + 1);
        let mut cuts = [self.below(n + 1), self.below(n + 1), self.below(n + 1)];
        cuts.sort_unstable();
        [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], n - cuts[2]]
    }
}
