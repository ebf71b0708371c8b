use crate::lsq::TypeSubset;
use crate::model::{cell_matrix_unchecked, free_var_bounds, CellMatrix, GroupCounts, Probability};

/// Affine function `c0 + c . x` of the free coordinates.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Affine {
    pub c0: f64,
    pub c: [f64; 4],
}

impl Affine {
    const fn new(c0: f64, c: [f64; 4]) -> Self {
        Self { c0, c }
    }

    #[inline]
    pub fn at(&self, x: &[f64; 4]) -> f64 {
        self.c0 + self.c[0] * x[0] + self.c[1] * x[1] + self.c[2] * x[2] + self.c[3] * x[3]
    }

    /// Minimum and maximum over the box `[lo, hi]`.
    #[inline]
    pub fn range(&self, lo: &[f64; 4], hi: &[f64; 4]) -> (f64, f64) {
        let (mut min, mut max) = (self.c0, self.c0);
        for k in 0..4 {
            let c = self.c[k];
            if c >= 0.0 {
                min += c * lo[k];
                max += c * hi[k];
            } else {
                min += c * hi[k];
                max += c * lo[k];
            }
        }
        (min, max)
    }

    fn add(self, o: Affine) -> Affine {
        let mut c = self.c;
        for (ck, ok) in c.iter_mut().zip(o.c) {
            *ck += ok;
        }
        Affine::new(self.c0 + o.c0, c)
    }

    fn scale(self, s: f64) -> Affine {
        Affine::new(self.c0 * s, self.c.map(|v| v * s))
    }
}

/// One subset's error and participant total as functions of `x`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    pub eps: Affine,
    pub total: Affine,
}

/// The least-squares program for fixed data, written over the four free
/// coordinates `x = (n(1,2), n(2,3), n(3,1), n(1,4))`.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    g: GroupCounts,
    p: Probability,
    var: f64,
    upper: [u64; 4],
    pub terms: [Term; 15],
}

impl Program {
    pub fn new(g: GroupCounts, p: Probability) -> Self {
        let [g1, g2, g3, g4] = g.0.map(|v| v as f64);
        // Intervention-arm count and total of each type.
        let treated = [
            Affine::new(0.0, [1.0, 0.0, 0.0, 0.0]),
            Affine::new(g2, [-1.0, 0.0, 0.0, 0.0]),
            Affine::new(0.0, [0.0, 0.0, 1.0, 0.0]),
            Affine::new(g1, [0.0, 0.0, -1.0, 0.0]),
        ];
        let totals = [
            Affine::new(0.0, [1.0, 0.0, 0.0, 1.0]),
            Affine::new(g2, [-1.0, 1.0, 0.0, 0.0]),
            Affine::new(g4, [0.0, 0.0, 1.0, -1.0]),
            Affine::new(g1 + g3, [0.0, -1.0, -1.0, 0.0]),
        ];
        let mut terms = [Term {
            eps: Affine::default(),
            total: Affine::default(),
        }; 15];
        for (term, subset) in terms.iter_mut().zip(TypeSubset::all()) {
            for i in (0..4).filter(|&i| subset.contains(i)) {
                term.eps = term.eps.add(treated[i].add(totals[i].scale(-p.get())));
                term.total = term.total.add(totals[i]);
            }
        }
        Self {
            g,
            p,
            var: p.variance(),
            upper: free_var_bounds(&g),
            terms,
        }
    }

    pub fn p(&self) -> Probability {
        self.p
    }

    pub fn upper(&self) -> [u64; 4] {
        self.upper
    }

    pub fn upper_f64(&self) -> [f64; 4] {
        self.upper.map(|v| v as f64)
    }

    /// Number of lattice points in the box.
    pub fn box_size(&self) -> u128 {
        self.upper.iter().map(|&u| u as u128 + 1).product()
    }

    pub fn cells(&self, x: [u64; 4]) -> CellMatrix {
        cell_matrix_unchecked(x, &self.g)
    }

    /// Objective at a (possibly fractional) point of the box.
    #[inline]
    pub fn eval(&self, x: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for term in &self.terms {
            let t = term.total.at(x);
            if t > 0.0 {
                let e = term.eps.at(x);
                s += e * e / t;
            }
        }
        s / self.var
    }

    #[inline]
    pub fn eval_int(&self, x: [u64; 4]) -> f64 {
        self.eval(&x.map(|v| v as f64))
    }

    /// Lower bound of the objective over the box `[lo, hi]`: the larger of
    /// [`Program::interval_bound`] and [`Program::tangent_bound`].
    pub fn lower_bound(&self, lo: &[f64; 4], hi: &[f64; 4]) -> f64 {
        self.interval_bound(lo, hi).max(self.tangent_bound(lo, hi))
    }

    /// Minimum over the box of the tangent plane at its centre.
    ///
    /// Every term is convex on the relaxed box, so each one lies above its
    /// tangent plane; terms with no participants at the centre are bounded
    /// by zero.
    pub fn tangent_bound(&self, lo: &[f64; 4], hi: &[f64; 4]) -> f64 {
        let centre: [f64; 4] = std::array::from_fn(|k| 0.5 * (lo[k] + hi[k]));
        let mut value = 0.0;
        let mut grad = [0.0; 4];
        for term in &self.terms {
            let t = term.total.at(&centre);
            if t <= 0.0 {
                continue;
            }
            let e = term.eps.at(&centre);
            let r = e / t;
            value += e * r;
            for k in 0..4 {
                grad[k] += r * (2.0 * term.eps.c[k] - r * term.total.c[k]);
            }
        }
        let mut bound = value;
        for k in 0..4 {
            let half = 0.5 * (hi[k] - lo[k]);
            bound -= grad[k].abs() * half;
        }
        bound / self.var
    }

    /// Lower bound of the objective over the box `[lo, hi]`.
    ///
    /// Each term `eps^2 / (v T)` is at least `(min |eps|)^2 / (v max T)`.
    pub fn interval_bound(&self, lo: &[f64; 4], hi: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for term in &self.terms {
            let (_, t_max) = term.total.range(lo, hi);
            if t_max <= 0.0 {
                continue;
            }
            let (e_min, e_max) = term.eps.range(lo, hi);
            let m = if e_min > 0.0 {
                e_min
            } else if e_max < 0.0 {
                -e_max
            } else {
                continue;
            };
            s += m * m / t_max;
        }
        s / self.var
    }

    /// Exact enumeration of the box in lexicographic order. Test helper for
    /// checking the cheaper solvers.
    #[cfg(test)]
    pub fn for_each_point(&self, mut f: impl FnMut([u64; 4])) {
        let [u1, u2, u3, u4] = self.upper;
        for x1 in 0..=u1 {
            for x2 in 0..=u2 {
                for x3 in 0..=u3 {
                    for x4 in 0..=u4 {
                        f([x1, x2, x3, x4]);
                    }
                }
            }
        }
    }
}
