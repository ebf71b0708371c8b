//! Exact probability of the observed group counts given the type counts.
//!
//! Within each type the number of participants assigned to the intervention
//! arm is binomial and independent across types, so `P(G = g | t, p)` is a
//! convolution of four binomials. It is indexed by `l`, the number of
//! live-regardless participants in the intervention arm:
//!
//! ```text
//! sum_l binom(l, t1) binom(g2 - l, t2) binom(t1 + t3 - g4 - l, t3) binom(g1 + g4 + l - t1 - t3, t4)
//! ```
//!
//! Everything is evaluated in log space. Once the column totals are fixed,
//! the `p^k (1-p)^(r-k)` factors multiply out to `p^(g1+g2) (1-p)^(g3+g4)`
//! for every `l`, so only the binomial coefficients vary inside the sum.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::model::{cell_matrix_unchecked, CellMatrix, GroupCounts, Probability, TypeCounts};

/// Natural-log probability, `-inf` for an impossible event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogProb(f64);

impl LogProb {
    pub const IMPOSSIBLE: LogProb = LogProb(f64::NEG_INFINITY);
    pub const CERTAIN: LogProb = LogProb(0.0);

    pub fn new(value: f64) -> Self {
        debug_assert!(
            value <= 1e-12 || value.is_nan(),
            "log probability {value} > 0"
        );
        Self(value.min(0.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Probability in linear space.
    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    pub fn is_impossible(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl PartialOrd for LogProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `log[C(r, k) p^k (1-p)^(r-k)]`, or `-inf` when `k` is outside `0..=r`.
pub fn log_binom_pmf(k: i64, r: i64, p: Probability) -> Result<LogProb> {
    if r < 0 {
        return Err(Error::NegativeTrials(r));
    }
    if k < 0 || k > r {
        return Ok(LogProb::IMPOSSIBLE);
    }
    let (k, r) = (k as u64, r as u64);
    let coef = ln_factorial(r) - ln_factorial(k) - ln_factorial(r - k);
    let ln_p = p.get().ln();
    let ln_q = (-p.get()).ln_1p();
    Ok(LogProb::new(coef + k as f64 * ln_p + (r - k) as f64 * ln_q))
}

/// Table of `ln(k!)` for `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct LogFactorials(Vec<f64>);

impl LogFactorials {
    pub fn new(n: u64) -> Self {
        Self((0..=n).map(ln_factorial).collect())
    }

    pub fn max(&self) -> u64 {
        self.0.len() as u64 - 1
    }

    #[inline]
    fn ln_choose(&self, r: i64, k: i64) -> f64 {
        self.0[r as usize] - self.0[k as usize] - self.0[(r - k) as usize]
    }
}

/// Range of `l` over which all four binomial factors are nonzero.
fn support(t: [i64; 4], g: [i64; 4]) -> (i64, i64) {
    let [t1, t2, t3, t4] = t;
    let [g1, g2, _, g4] = g;
    let s = t1 + t3 - g4;
    let lo = 0.max(g2 - t2).max(s - t3).max(s - g1);
    let hi = t1.min(g2).min(s).min(s - g1 + t4);
    (lo, hi)
}

/// Reusable likelihood evaluator for a fixed assignment probability.
///
/// Holds a log-factorial table that grows on demand, so repeated calls over
/// the same sample size do no transcendental work beyond one `exp` per term.
#[derive(Debug, Clone)]
pub struct Likelihood {
    p: Probability,
    ln_p: f64,
    ln_q: f64,
    table: LogFactorials,
}

impl Likelihood {
    pub fn new(p: Probability, n: u64) -> Self {
        Self {
            p,
            ln_p: p.get().ln(),
            ln_q: (-p.get()).ln_1p(),
            table: LogFactorials::new(n),
        }
    }

    pub fn p(&self) -> Probability {
        self.p
    }

    fn ensure(&mut self, n: u64) {
        if n > self.table.max() {
            self.table = LogFactorials::new(n);
        }
    }

    /// `log P(G = g | t, p)`.
    pub fn log_prob(&mut self, t: &TypeCounts, g: &GroupCounts) -> LogProb {
        self.ensure(t.total());
        self.eval(t, g)
    }

    /// Like [`Likelihood::log_prob`] but never grows the table.
    ///
    /// # Panics
    /// If `t.total()` exceeds the table size given at construction.
    pub fn eval(&self, t: &TypeCounts, g: &GroupCounts) -> LogProb {
        if t.total() != g.total() {
            return LogProb::IMPOSSIBLE;
        }
        let ti = t.0.map(|v| v as i64);
        let gi = g.0.map(|v| v as i64);
        let (lo, hi) = support(ti, gi);
        if lo > hi {
            return LogProb::IMPOSSIBLE;
        }
        let terms = (lo..=hi).map(|l| self.log_term(ti, gi, l));
        let sum = log_sum_exp(terms, (hi - lo + 1) as usize);
        let arm = (gi[0] + gi[1]) as f64 * self.ln_p + (gi[2] + gi[3]) as f64 * self.ln_q;
        LogProb::new(sum + arm)
    }

    #[inline]
    fn log_term(&self, t: [i64; 4], g: [i64; 4], l: i64) -> f64 {
        let [t1, t2, t3, t4] = t;
        let [g1, g2, _, g4] = g;
        let lf = &self.table;
        lf.ln_choose(t1, l)
            + lf.ln_choose(t2, g2 - l)
            + lf.ln_choose(t3, t1 + t3 - g4 - l)
            + lf.ln_choose(t4, g1 + g4 + l - t1 - t3)
    }

    /// The single cell matrix contributing most to `P(G = g | t, p)`;
    /// smallest `l` on ties. `None` when `t` cannot produce `g`.
    pub fn modal_cells(&mut self, t: &TypeCounts, g: &GroupCounts) -> Option<CellMatrix> {
        self.ensure(t.total());
        if t.total() != g.total() {
            return None;
        }
        let ti = t.0.map(|v| v as i64);
        let gi = g.0.map(|v| v as i64);
        let (lo, hi) = support(ti, gi);
        if lo > hi {
            return None;
        }
        let mut best = (lo, f64::NEG_INFINITY);
        for l in lo..=hi {
            let v = self.log_term(ti, gi, l);
            if v > best.1 {
                best = (l, v);
            }
        }
        let l = best.0;
        let [t1, t2, t3, _] = ti;
        let [_, g2, _, g4] = gi;
        let x = [l, t2 - g2 + l, t1 + t3 - g4 - l, t1 - l].map(|v| v as u64);
        Some(cell_matrix_unchecked(x, g))
    }
}

/// `log P(G = g | t, p)` for one-off evaluation.
pub fn log_likelihood(t: &TypeCounts, g: &GroupCounts, p: Probability) -> LogProb {
    Likelihood::new(p, t.total()).eval(t, g)
}

/// Max-shifted log-sum-exp. An empty or all `-inf` input yields `-inf`.
pub fn log_sum_exp<I>(terms: I, size_hint: usize) -> f64
where
    I: Iterator<Item = f64>,
{
    let mut buf = Vec::with_capacity(size_hint);
    buf.extend(terms);
    let max = buf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + buf.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn binom_pmf_examples() {
        assert!((log_binom_pmf(1, 1, p(0.5)).unwrap().value() - 0.5f64.ln()).abs() < 1e-15);
        assert!(log_binom_pmf(-1, 3, p(0.5)).unwrap().is_impossible());
        assert!(log_binom_pmf(4, 3, p(0.5)).unwrap().is_impossible());
        let v = log_binom_pmf(2, 4, p(0.3)).unwrap().value();
        assert!((v - 0.2646f64.ln()).abs() < 1e-14, "{v}");
        assert_eq!(log_binom_pmf(0, -1, p(0.5)), Err(Error::NegativeTrials(-1)));
        assert_eq!(log_binom_pmf(0, 0, p(0.2)).unwrap().value(), 0.0);
    }

    #[test]
    fn likelihood_examples() {
        let half = Probability::HALF;
        let single = TypeCounts::new([1, 0, 0, 0]);
        let ll = log_likelihood(&single, &GroupCounts::new([0, 1, 0, 0]), half);
        assert!((ll.value() - 0.5f64.ln()).abs() < 1e-15);
        assert!(log_likelihood(&single, &GroupCounts::new([1, 0, 0, 0]), half).is_impossible());
        assert!(log_likelihood(&single, &GroupCounts::new([0, 1, 0, 1]), half).is_impossible());
        let empty = log_likelihood(&TypeCounts::new([0; 4]), &GroupCounts::new([0; 4]), half);
        assert_eq!(empty, LogProb::CERTAIN);
    }

    #[test]
    fn likelihood_matches_two_participant_cases() {
        // g = (0,1,0,1): one alive per arm.
        let g = GroupCounts::new([0, 1, 0, 1]);
        let half = Probability::HALF;
        let cases = [
            ([2, 0, 0, 0], 0.5),
            ([1, 0, 0, 1], 0.0),
            ([1, 1, 0, 0], 0.25),
            ([0, 1, 1, 0], 0.25),
        ];
        for (t, expected) in cases {
            let got = log_likelihood(&TypeCounts::new(t), &g, half).prob();
            assert!((got - expected).abs() < 1e-15, "t={t:?}: {got}");
        }
    }

    #[test]
    fn log_sum_exp_handles_extremes() {
        assert_eq!(log_sum_exp(std::iter::empty(), 0), f64::NEG_INFINITY);
        let v = log_sum_exp([-1000.0, -1000.0].into_iter(), 2);
        assert!((v - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn large_sample_is_finite() {
        let t = TypeCounts::new([964, 308, 205, 213]);
        let g = GroupCounts::new([210, 640, 259, 581]);
        let ll = log_likelihood(&t, &g, Probability::HALF);
        assert!(ll.value().is_finite() && ll.value() < 0.0, "{ll}");
    }

    #[test]
    fn modal_cells_reproduce_margins() {
        let t = TypeCounts::new([5, 3, 2, 4]);
        let g = GroupCounts::new([3, 4, 4, 3]);
        let mut lik = Likelihood::new(Probability::HALF, 14);
        let n = lik.modal_cells(&t, &g).unwrap();
        assert_eq!(n.type_counts(), t);
        assert_eq!(n.group_counts(), g);
        assert!(lik
            .modal_cells(&TypeCounts::new([14, 0, 0, 0]), &g)
            .is_none());
    }
}
