//! Least-squares estimator of the type counts.
//!
//! For every nonempty subset `I` of types, the randomization error
//!
//! ```text
//! eps(I) = sum_{i in I} [n(i,1) + n(i,2)] - p * sum_{i in I} t(i)
//! ```
//!
//! has mean zero and variance `p(1-p) * sum_{i in I} t(i)`. The estimator picks
//! the feasible integer cell matrix minimizing the variance-weighted sum of
//! squared errors over all 15 subsets. Feasible matrices are the integer
//! points of the free-coordinate box (see
//! [`cell_matrix_from_free_vars`](crate::model::cell_matrix_from_free_vars)).

mod bound;
mod enumerate;
mod program;
mod relax;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CellMatrix, EstimateResult, GroupCounts, Probability};

pub(crate) use program::Program;

/// A nonempty subset of the four types, stored as a bit mask (bit `i` set
/// for zero-based type `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSubset(u8);

impl TypeSubset {
    pub fn new(mask: u8) -> Option<Self> {
        (1..=15).contains(&mask).then_some(Self(mask))
    }

    /// All 15 nonempty subsets in mask order.
    pub fn all() -> impl Iterator<Item = TypeSubset> {
        (1..=15u8).map(TypeSubset)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// One-based type indices in the subset.
    pub fn members(self) -> Vec<usize> {
        (0..4)
            .filter(|&i| self.contains(i))
            .map(|i| i + 1)
            .collect()
    }
}

impl Serialize for TypeSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

/// Randomization error of one subset of types.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsetError {
    pub subset: TypeSubset,
    /// Actual minus expected intervention-arm count.
    pub epsilon: f64,
    /// Variance of `epsilon`, `p(1-p) * sum_{i in I} t(i)`.
    pub weight_denom: f64,
}

impl SubsetError {
    /// Weighted squared error; zero when the subset is empty of participants.
    pub fn term(&self) -> f64 {
        if self.weight_denom > 0.0 {
            self.epsilon * self.epsilon / self.weight_denom
        } else {
            0.0
        }
    }
}

/// Randomization errors of all 15 subsets for a cell matrix.
pub fn subset_errors(n: &CellMatrix, p: Probability) -> Vec<SubsetError> {
    let treated = n.intervention_by_type();
    let totals = n.type_counts().0;
    TypeSubset::all()
        .map(|subset| {
            let (mut a, mut t) = (0u64, 0u64);
            for i in (0..4).filter(|&i| subset.contains(i)) {
                a += treated[i];
                t += totals[i];
            }
            SubsetError {
                subset,
                epsilon: a as f64 - p.get() * t as f64,
                weight_denom: p.variance() * t as f64,
            }
        })
        .collect()
}

/// The weighted sum of squared randomization errors over all subsets.
pub fn objective(n: &CellMatrix, p: Probability) -> f64 {
    subset_errors(n, p).iter().map(SubsetError::term).sum()
}

/// Search strategy for [`solve`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LsqMode {
    /// Evaluate every lattice point of the box. Refuses boxes above
    /// [`LsqConfig::exact_cap`].
    Exact,
    /// Continuous coordinate descent from several starts, then rounding and
    /// integer local search. Fast, not certified.
    RelaxAndSearch,
    /// Branch and bound with interval and tangent-plane lower bounds, seeded
    /// by relax-and-search. Certified global optimum at any size.
    #[default]
    BranchAndBound,
}

impl FromStr for LsqMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(LsqMode::Exact),
            "relax_and_search" | "relax-and-search" => Ok(LsqMode::RelaxAndSearch),
            "branch_and_bound" | "branch-and-bound" => Ok(LsqMode::BranchAndBound),
            other => Err(Error::InvalidConfig(format!(
                "unknown least-squares mode `{other}`"
            ))),
        }
    }
}

impl fmt::Display for LsqMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LsqMode::Exact => "exact",
            LsqMode::RelaxAndSearch => "relax_and_search",
            LsqMode::BranchAndBound => "branch_and_bound",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsqConfig {
    pub mode: LsqMode,
    /// Starting points for relax-and-search.
    pub restarts: u32,
    pub seed: u64,
    /// Coordinate-descent sweeps per start.
    pub max_iterations: u32,
    /// Largest box, in lattice points, that exact mode will enumerate.
    pub exact_cap: u128,
}

impl Default for LsqConfig {
    fn default() -> Self {
        Self {
            mode: LsqMode::default(),
            restarts: 16,
            seed: 1,
            max_iterations: 500,
            exact_cap: 200_000_000,
        }
    }
}

impl LsqConfig {
    pub fn with_mode(mode: LsqMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Minimizes the objective over all feasible integer cell matrices for `g`.
///
/// Ties are broken toward the lexicographically smallest free-coordinate
/// vector; the number of tied optima found is reported.
pub fn solve(g: &GroupCounts, p: Probability, cfg: &LsqConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let program = Program::new(*g, p);
    let found = match cfg.mode {
        LsqMode::Exact => enumerate::solve(&program, cfg.exact_cap)?,
        LsqMode::RelaxAndSearch => relax::solve(&program, cfg),
        LsqMode::BranchAndBound => bound::solve(&program, cfg),
    };
    Ok(found.into_estimate(&program))
}

/// Tolerance under which two objective values count as tied.
pub(crate) fn tie_tol(f: f64) -> f64 {
    1e-12 * f.abs().max(1.0)
}

/// Running set of best lattice points, kept so ties can be counted and
/// resolved deterministically whatever order points are visited in.
#[derive(Debug, Clone)]
pub(crate) struct Incumbent {
    best: f64,
    candidates: Vec<([u64; 4], f64)>,
    pub diagnostics: crate::model::Diagnostics,
}

impl Incumbent {
    pub fn new() -> Self {
        Self {
            best: f64::INFINITY,
            candidates: Vec::new(),
            diagnostics: Default::default(),
        }
    }

    /// Largest value still worth exploring.
    #[inline]
    pub fn threshold(&self) -> f64 {
        if self.best.is_finite() {
            self.best + tie_tol(self.best)
        } else {
            f64::INFINITY
        }
    }

    #[inline]
    pub fn offer(&mut self, x: [u64; 4], f: f64) {
        if f > self.threshold() {
            return;
        }
        if f < self.best {
            self.best = f;
            let limit = self.threshold();
            self.candidates.retain(|c| c.1 <= limit);
        }
        if !self.candidates.iter().any(|c| c.0 == x) {
            self.candidates.push((x, f));
        }
    }

    pub fn merge(&mut self, other: Incumbent) {
        for (x, f) in other.candidates {
            self.offer(x, f);
        }
        let d = other.diagnostics;
        self.diagnostics.restarts += d.restarts;
        self.diagnostics.iterations += d.iterations;
        self.diagnostics.evaluations += d.evaluations;
        self.diagnostics.nodes += d.nodes;
    }

    /// Lexicographically smallest optimal point, its value, and the tie count.
    pub fn finish(&self) -> ([u64; 4], f64, u64) {
        let limit = self.threshold();
        let tied: Vec<_> = self.candidates.iter().filter(|c| c.1 <= limit).collect();
        let &&(x, f) = tied
            .iter()
            .min_by_key(|c| c.0)
            .expect("incumbent holds at least one point");
        (x, f, tied.len() as u64)
    }

    fn into_estimate(self, program: &Program) -> EstimateResult {
        let (x, _, ties) = self.finish();
        let n = program.cells(x);
        let score = crate::model::Score::Objective(objective(&n, program.p()));
        EstimateResult::new(n, score, ties, self.diagnostics)
    }
}
