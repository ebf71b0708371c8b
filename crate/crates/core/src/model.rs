//! Domain types for a two-arm, binary-outcome randomized experiment.
//!
//! Participants belong to one of four latent potential-outcome types and are
//! observed in one of four (arm, outcome) groups. Rows index types and
//! columns index groups, always in this order:
//!
//! | index | type (row)       | group (column)          |
//! |-------|------------------|-------------------------|
//! | 1     | live regardless  | dead, intervention arm  |
//! | 2     | saved            | alive, intervention arm |
//! | 3     | killed           | dead, control arm       |
//! | 4     | die regardless   | alive, control arm      |
//!
//! Eight of the sixteen (type, group) cells are logically impossible and are
//! held at zero by every [`CellMatrix`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability that a participant is assigned to the intervention arm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidProbability(p))
        }
    }

    /// Balanced 1:1 assignment.
    pub const HALF: Probability = Probability(0.5);

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Assignment probability of the control arm, `1 - p`.
    #[inline]
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }

    /// `p (1 - p)`, the per-participant variance of the assignment indicator.
    #[inline]
    pub fn variance(self) -> f64 {
        self.0 * (1.0 - self.0)
    }
}

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = f64::deserialize(d)?;
        Probability::new(p).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Probability::new(p)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Experimental design: the assignment probability and the participant count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub p: Probability,
    pub n_total: u64,
}

impl Design {
    pub fn new(p: f64, n_total: u64) -> Result<Self> {
        Ok(Self {
            p: Probability::new(p)?,
            n_total,
        })
    }

    /// The design implied by observed data.
    pub fn for_groups(p: Probability, g: &GroupCounts) -> Self {
        Self {
            p,
            n_total: g.total(),
        }
    }
}

/// Observed counts per (arm, outcome) group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupCounts(pub [u64; 4]);

impl GroupCounts {
    pub const fn new(g: [u64; 4]) -> Self {
        Self(g)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Participants assigned to the intervention arm, `g(1) + g(2)`.
    pub fn intervention_arm(&self) -> u64 {
        self.0[0] + self.0[1]
    }

    /// Participants assigned to the control arm, `g(3) + g(4)`.
    pub fn control_arm(&self) -> u64 {
        self.0[2] + self.0[3]
    }

    /// Relabels the control arm as the intervention arm and vice versa.
    pub fn swap_arms(&self) -> Self {
        let [g1, g2, g3, g4] = self.0;
        Self([g3, g4, g1, g2])
    }

    /// Checks the counts against a design's participant total.
    pub fn validate(&self, design: &Design) -> Result<()> {
        if self.total() != design.n_total {
            return Err(Error::TotalMismatch {
                types: design.n_total,
                groups: self.total(),
            });
        }
        Ok(())
    }
}

impl From<[u64; 4]> for GroupCounts {
    fn from(g: [u64; 4]) -> Self {
        Self(g)
    }
}

impl std::ops::Index<usize> for GroupCounts {
    type Output = u64;
    fn index(&self, j: usize) -> &u64 {
        &self.0[j]
    }
}

/// Latent counts per potential-outcome type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeCounts(pub [u64; 4]);

impl TypeCounts {
    pub const fn new(t: [u64; 4]) -> Self {
        Self(t)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Exchanges the saved and killed types, which is what relabelling the
    /// arms does to the type vector.
    pub fn swap_saved_killed(&self) -> Self {
        let [t1, t2, t3, t4] = self.0;
        Self([t1, t3, t2, t4])
    }
}

impl From<[u64; 4]> for TypeCounts {
    fn from(t: [u64; 4]) -> Self {
        Self(t)
    }
}

impl std::ops::Index<usize> for TypeCounts {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

/// Returns the 4×4 mask of cells that must be empty, `true` where a
/// (type, group) combination is impossible.
pub const fn structural_zero_mask() -> [[bool; 4]; 4] {
    [
        [true, false, true, false],
        [true, false, false, true],
        [false, true, true, false],
        [false, true, false, true],
    ]
}

const MASK: [[bool; 4]; 4] = structural_zero_mask();

/// Participants per (type, group) cell. The structural zeros always hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CellMatrix([[u64; 4]; 4]);

impl CellMatrix {
    /// Builds a matrix from rows, rejecting any mass in a structural-zero cell.
    pub fn new(rows: [[u64; 4]; 4]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if MASK[i][j] && value != 0 {
                    return Err(Error::StructuralZero {
                        row: i + 1,
                        col: j + 1,
                        value,
                    });
                }
            }
        }
        Ok(Self(rows))
    }

    pub fn zero() -> Self {
        Self([[0; 4]; 4])
    }

    pub fn rows(&self) -> &[[u64; 4]; 4] {
        &self.0
    }

    /// `n(i, j)` with zero-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.0[i][j]
    }

    pub fn type_counts(&self) -> TypeCounts {
        TypeCounts(self.0.map(|row| row.iter().sum()))
    }

    pub fn group_counts(&self) -> GroupCounts {
        let mut g = [0; 4];
        for row in &self.0 {
            for (gj, n) in g.iter_mut().zip(row) {
                *gj += n;
            }
        }
        GroupCounts(g)
    }

    /// Participants of each type assigned to the intervention arm,
    /// `n(i,1) + n(i,2)`.
    pub fn intervention_by_type(&self) -> [u64; 4] {
        self.0.map(|row| row[0] + row[1])
    }

    /// Recovers the free coordinates `(n(1,2), n(2,3), n(3,1), n(1,4))`.
    pub fn free_vars(&self) -> [u64; 4] {
        [self.0[0][1], self.0[1][2], self.0[2][0], self.0[0][3]]
    }
}

impl<'de> Deserialize<'de> for CellMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[u64; 4]; 4]>::deserialize(d)?;
        CellMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}

/// Inclusive upper bounds of the free coordinates for data `g`:
/// `(g(2), g(3), g(1), g(4))`.
pub fn free_var_bounds(g: &GroupCounts) -> [u64; 4] {
    let [g1, g2, g3, g4] = g.0;
    [g2, g3, g1, g4]
}

/// Fills the eight admissible cells from four free coordinates so that the
/// column sums reproduce `g`.
///
/// `x = (n(1,2), n(2,3), n(3,1), n(1,4))`; the other four admissible cells
/// take whatever is left in their column.
pub fn cell_matrix_from_free_vars(x: [u64; 4], g: &GroupCounts) -> Result<CellMatrix> {
    let upper = free_var_bounds(g);
    for (index, (&value, &upper)) in x.iter().zip(&upper).enumerate() {
        if value > upper {
            return Err(Error::FreeVariableOutOfBounds {
                index: index + 1,
                value,
                upper,
            });
        }
    }
    Ok(cell_matrix_unchecked(x, g))
}

/// Same as [`cell_matrix_from_free_vars`] for coordinates already known to
/// lie in the box.
pub(crate) fn cell_matrix_unchecked(x: [u64; 4], g: &GroupCounts) -> CellMatrix {
    let [x1, x2, x3, x4] = x;
    let [g1, g2, g3, g4] = g.0;
    CellMatrix([
        [0, x1, 0, x4],
        [0, g2 - x1, x2, 0],
        [x3, 0, 0, g4 - x4],
        [g1 - x3, 0, g3 - x2, 0],
    ])
}

/// Difference in observed mortality between the intervention and control arms.
pub fn reduced_form(g: &GroupCounts) -> Result<f64> {
    let treated = g.intervention_arm();
    let control = g.control_arm();
    if treated == 0 {
        return Err(Error::EmptyArm("intervention"));
    }
    if control == 0 {
        return Err(Error::EmptyArm("control"));
    }
    Ok(g[0] as f64 / treated as f64 - g[2] as f64 / control as f64)
}

/// Score attained by an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Score {
    /// Weighted least-squares objective; lower is better.
    Objective(f64),
    /// Natural-log likelihood; higher is better.
    LogLikelihood(f64),
}

impl Score {
    pub fn value(&self) -> f64 {
        match *self {
            Score::Objective(v) | Score::LogLikelihood(v) => v,
        }
    }
}

/// Counters describing how much work a solver did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Starting points tried.
    pub restarts: u64,
    /// Continuous sweeps or hill-climbing steps, summed over restarts.
    pub iterations: u64,
    /// Objective or likelihood evaluations at lattice points.
    pub evaluations: u64,
    /// Boxes visited by branch and bound.
    pub nodes: u64,
}

/// Estimated type counts with the supporting cell matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub t_hat: TypeCounts,
    pub n_hat: CellMatrix,
    pub score: Score,
    /// Number of distinct optimal solutions found, including the one returned.
    pub ties: u64,
    pub diagnostics: Diagnostics,
}

impl EstimateResult {
    pub(crate) fn new(
        n_hat: CellMatrix,
        score: Score,
        ties: u64,
        diagnostics: Diagnostics,
    ) -> Self {
        Self {
            t_hat: n_hat.type_counts(),
            n_hat,
            score,
            ties,
            diagnostics,
        }
    }
}
