//! Maximum likelihood estimation of the type counts.
//!
//! The likelihood is maximized over the lattice simplex
//! `{t in N^4 : sum t = sum g}`. Small experiments are enumerated exactly.
//! Larger ones use multi-start hill climbing whose moves transfer mass
//! between two types, so every step stays on the simplex.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::likelihood::Likelihood;
use crate::lsq::{self, LsqConfig};
use crate::model::{
    cell_matrix_unchecked, free_var_bounds, Diagnostics, EstimateResult, GroupCounts, Probability,
    Score, TypeCounts,
};
use crate::rng;

/// Largest sample size enumerated exactly unless configured otherwise.
pub const DEFAULT_EXACT_CAP: u64 = 200;

/// Log-likelihoods closer than this count as tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MleMode {
    #[default]
    Exact,
    Heuristic,
}

impl FromStr for MleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(MleMode::Exact),
            "heuristic" => Ok(MleMode::Heuristic),
            other => Err(Error::InvalidConfig(format!(
                "unknown likelihood mode `{other}`"
            ))),
        }
    }
}

impl fmt::Display for MleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MleMode::Exact => "exact",
            MleMode::Heuristic => "heuristic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleConfig {
    pub mode: MleMode,
    pub restarts: u32,
    /// Largest single transfer, in participants, tried by a hill-climbing move.
    pub neighborhood_radius: u32,
    pub seed: u64,
    /// Exact mode refuses samples larger than this.
    pub exact_cap: u64,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self {
            mode: MleMode::Exact,
            restarts: 32,
            neighborhood_radius: 2,
            seed: 1,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

impl MleConfig {
    pub fn heuristic(seed: u64) -> Self {
        Self {
            mode: MleMode::Heuristic,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.neighborhood_radius == 0 {
            return Err(Error::InvalidConfig(
                "neighborhood_radius must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Dispatches on [`MleConfig::mode`].
pub fn estimate(g: &GroupCounts, p: Probability, cfg: &MleConfig) -> Result<EstimateResult> {
    match cfg.mode {
        MleMode::Exact => mle_exact_capped(g, p, cfg.exact_cap),
        MleMode::Heuristic => mle_heuristic(g, p, cfg),
    }
}

/// Exact maximum likelihood by enumerating the whole simplex, with the
/// default size cap.
pub fn mle_exact(g: &GroupCounts, p: Probability) -> Result<EstimateResult> {
    mle_exact_capped(g, p, DEFAULT_EXACT_CAP)
}

/// Running best over type vectors; keeps every tie so the winner does not
/// depend on visiting order.
#[derive(Debug, Clone, Default)]
struct Best {
    ll: f64,
    tied: Vec<[u64; 4]>,
    diagnostics: Diagnostics,
}

impl Best {
    fn new() -> Self {
        Self {
            ll: f64::NEG_INFINITY,
            tied: Vec::new(),
            diagnostics: Diagnostics::default(),
        }
    }

    fn offer(&mut self, t: [u64; 4], ll: f64) {
        if ll == f64::NEG_INFINITY {
            return;
        }
        if ll > self.ll + TIE_TOL {
            self.ll = ll;
            self.tied.clear();
            self.tied.push(t);
        } else if ll >= self.ll - TIE_TOL && !self.tied.contains(&t) {
            if ll > self.ll {
                self.ll = ll;
            }
            self.tied.push(t);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        let d = other.diagnostics;
        for t in other.tied {
            self.offer(t, other.ll);
        }
        self.diagnostics.restarts += d.restarts;
        self.diagnostics.iterations += d.iterations;
        self.diagnostics.evaluations += d.evaluations;
        self
    }

    fn finish(self, g: &GroupCounts, lik: &mut Likelihood) -> EstimateResult {
        let t = TypeCounts(
            *self
                .tied
                .iter()
                .min()
                .expect("some type vector is always feasible"),
        );
        let ll = lik.log_prob(&t, g).value();
        let n = lik
            .modal_cells(&t, g)
            .expect("feasible type vector has a cell matrix");
        EstimateResult::new(
            n,
            Score::LogLikelihood(ll),
            self.tied.len() as u64,
            self.diagnostics,
        )
    }
}

/// Number of lattice points `t in N^4` with `sum t = n`.
pub fn simplex_size(n: u64) -> u128 {
    let n = n as u128;
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// Exact maximum likelihood with an explicit sample-size cap.
pub fn mle_exact_capped(g: &GroupCounts, p: Probability, cap: u64) -> Result<EstimateResult> {
    let n = g.total();
    if n > cap {
        return Err(Error::EnumerationCap {
            what: "the type-count simplex",
            size: simplex_size(n),
            cap: simplex_size(cap),
            hint: "use heuristic mode for samples this large",
        });
    }
    let lik = Likelihood::new(p, n);
    let best = (0..=n)
        .into_par_iter()
        .map(|t1| {
            let mut best = Best::new();
            for t2 in 0..=n - t1 {
                for t3 in 0..=n - t1 - t2 {
                    let t = [t1, t2, t3, n - t1 - t2 - t3];
                    best.offer(t, lik.eval(&TypeCounts(t), g).value());
                    best.diagnostics.evaluations += 1;
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Best::new(), Best::merge);
    let mut lik = lik;
    Ok(best.finish(g, &mut lik))
}

/// Multi-start hill climbing on the simplex.
///
/// Starts, in order: the least-squares estimate; the no-effect composition
/// `(g2 + g4, 0, 0, g1 + g3)`; the row sums at the 16 corners of the
/// free-coordinate box; then row sums of uniformly drawn feasible cell
/// matrices. Every start has positive likelihood. Each climb moves to the
/// best neighbour (see [`neighbours`]) until none is strictly better.
pub fn mle_heuristic(g: &GroupCounts, p: Probability, cfg: &MleConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let n = g.total();
    let lsq_start = lsq::solve(g, p, &LsqConfig::default())?.t_hat;
    let lik = Likelihood::new(p, n);
    let upper = free_var_bounds(g);
    let best = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|k| {
            let start = match k {
                0 => lsq_start,
                1 => TypeCounts([g[1] + g[3], 0, 0, g[0] + g[2]]),
                2..=17 => {
                    let corner = k - 2;
                    let x: [u64; 4] =
                        std::array::from_fn(|i| if corner >> i & 1 == 1 { upper[i] } else { 0 });
                    cell_matrix_unchecked(x, g).type_counts()
                }
                _ => {
                    let mut r = rng::stream(cfg.seed, k);
                    let x = upper.map(|u| r.random_range(0..=u));
                    cell_matrix_unchecked(x, g).type_counts()
                }
            };
            climb(&lik, g, start, cfg.neighborhood_radius as u64)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Best::new(), Best::merge);
    let mut lik = lik;
    Ok(best.finish(g, &mut lik))
}

/// Transfers of `1..=radius` participants between two types, and shifts
/// of `1..=radius` along `(-1, +1, +1, -1)` in either direction. The shifts
/// keep every arm-outcome margin of the support fixed, so they can follow
/// the likelihood along its boundary where single transfers are blocked.
fn neighbours(t: [u64; 4], radius: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for from in 0..4 {
        for to in (0..4).filter(|&to| to != from) {
            for s in 1..=radius.min(t[from]) {
                let mut u = t;
                u[from] -= s;
                u[to] += s;
                out.push(u);
            }
        }
    }
    for s in 1..=radius.min(t[0]).min(t[3]) {
        out.push([t[0] - s, t[1] + s, t[2] + s, t[3] - s]);
    }
    for s in 1..=radius.min(t[1]).min(t[2]) {
        out.push([t[0] + s, t[1] - s, t[2] - s, t[3] + s]);
    }
    out
}

fn climb(lik: &Likelihood, g: &GroupCounts, start: TypeCounts, radius: u64) -> Best {
    let mut t = start.0;
    let mut ll = lik.eval(&start, g).value();
    let mut best = Best::new();
    best.diagnostics.restarts = 1;
    best.diagnostics.evaluations = 1;
    loop {
        let mut step: Option<([u64; 4], f64)> = None;
        for u in neighbours(t, radius) {
            let v = lik.eval(&TypeCounts(u), g).value();
            best.diagnostics.evaluations += 1;
            let improves = v > ll + TIE_TOL;
            let beats = match step {
                None => true,
                Some((su, sv)) => v > sv + TIE_TOL || (v >= sv - TIE_TOL && u < su),
            };
            if improves && beats {
                step = Some((u, v));
            }
        }
        match step {
            Some((u, v)) => {
                t = u;
                ll = v;
                best.diagnostics.iterations += 1;
            }
            None => break,
        }
    }
    best.offer(t, ll);
    best
}
