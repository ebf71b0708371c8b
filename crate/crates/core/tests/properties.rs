use outcome_types::lsq::{self, subset_errors, TypeSubset};
use outcome_types::mle::{self, MleConfig};
use outcome_types::model::free_var_bounds;
use outcome_types::resampling::{resample_groups, simulate_experiment};
use outcome_types::{
    cell_matrix_from_free_vars, log_likelihood, reduced_form, rng, structural_zero_mask,
    CellMatrix, GroupCounts, LsqConfig, LsqMode, Probability, TypeCounts,
};
use proptest::prelude::*;

fn counts(max: u64) -> impl Strategy<Value = [u64; 4]> {
    [0..=max, 0..=max, 0..=max, 0..=max]
}

fn probability() -> impl Strategy<Value = Probability> {
    (0.05f64..0.95).prop_map(|p| Probability::new(p).unwrap())
}

fn respects_mask(n: &CellMatrix) -> bool {
    let mask = structural_zero_mask();
    (0..4).all(|i| (0..4).all(|j| !mask[i][j] || n.get(i, j) == 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_form_is_antisymmetric(g in counts(500)) {
        let g = GroupCounts::new(g);
        prop_assume!(g.intervention_arm() > 0 && g.control_arm() > 0);
        let a = reduced_form(&g).unwrap();
        let b = reduced_form(&g.swap_arms()).unwrap();
        prop_assert_eq!(a, -b);
        prop_assert!(a.abs() <= 1.0);
    }

    #[test]
    fn likelihood_is_invariant_under_arm_swap(t in counts(6), seed in any::<u64>(), p in probability()) {
        let t = TypeCounts::new(t);
        let g = simulate_experiment(&t, p, &mut rng::stream(seed, 0));
        let a = log_likelihood(&t, &g, p);
        let b = log_likelihood(&t.swap_saved_killed(), &g.swap_arms(), p.complement());
        prop_assert!(!a.is_impossible());
        prop_assert!((a.value() - b.value()).abs() <= 1e-12 * a.value().abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn likelihood_is_impossible_when_totals_differ(t in counts(5), g in counts(5), p in probability()) {
        let t = TypeCounts::new(t);
        let g = GroupCounts::new(g);
        prop_assume!(t.total() != g.total());
        prop_assert!(log_likelihood(&t, &g, p).is_impossible());
    }

    #[test]
    fn full_subset_error_is_constant(g in counts(40), p in probability(), seed in any::<u64>()) {
        let gc = GroupCounts::new(g);
        let upper = free_var_bounds(&gc);
        let full = TypeSubset::new(0b1111).unwrap();
        let want = (g[0] + g[1]) as f64 - p.get() * gc.total() as f64;
        let mut r = Lcg(seed);
        for _ in 0..8 {
            let x = upper.map(|u| r.next() % (u + 1));
            let n = cell_matrix_from_free_vars(x, &gc).unwrap();
            let e = subset_errors(&n, p).into_iter().find(|e| e.subset == full).unwrap();
            prop_assert!((e.epsilon - want).abs() < 1e-9);
        }
    }

    #[test]
    fn lsq_estimates_are_feasible(g in counts(25), p in probability()) {
        let g = GroupCounts::new(g);
        for mode in [LsqMode::RelaxAndSearch, LsqMode::BranchAndBound] {
            let est = lsq::solve(&g, p, &LsqConfig::with_mode(mode)).unwrap();
            prop_assert!(respects_mask(&est.n_hat));
            prop_assert_eq!(est.n_hat.group_counts(), g);
            let rows: Vec<u64> = est.n_hat.rows().iter().map(|r| r.iter().sum()).collect();
            prop_assert_eq!(rows.as_slice(), est.t_hat.0.as_slice());
            prop_assert_eq!(est.t_hat.total(), g.total());
            prop_assert!(est.ties >= 1);
            prop_assert!((est.score.value() - lsq::objective(&est.n_hat, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn lsq_is_covariant_under_arm_swap(g in counts(25), p in probability()) {
        let g = GroupCounts::new(g);
        let cfg = LsqConfig::with_mode(LsqMode::BranchAndBound);
        let a = lsq::solve(&g, p, &cfg).unwrap();
        let b = lsq::solve(&g.swap_arms(), p.complement(), &cfg).unwrap();
        let (fa, fb) = (a.score.value(), b.score.value());
        prop_assert!((fa - fb).abs() <= 1e-9 * fa.max(1.0), "{} vs {}", fa, fb);
        prop_assert_eq!(a.ties, b.ties);
        if a.ties == 1 {
            prop_assert_eq!(b.t_hat, a.t_hat.swap_saved_killed());
        }
    }

    #[test]
    fn mle_heuristic_never_loses_to_its_start(g in counts(15), seed in any::<u64>()) {
        let g = GroupCounts::new(g);
        let p = Probability::HALF;
        let est = mle::estimate(&g, p, &MleConfig::heuristic(seed)).unwrap();
        let start = lsq::solve(&g, p, &LsqConfig::default()).unwrap().t_hat;
        prop_assert!(est.score.value() >= log_likelihood(&start, &g, p).value());
        prop_assert_eq!(est.t_hat.total(), g.total());
        prop_assert!(respects_mask(&est.n_hat));
        prop_assert_eq!(est.n_hat.group_counts(), g);
    }

    #[test]
    fn simulation_preserves_totals(t in counts(300), p in probability(), seed in any::<u64>()) {
        let t = TypeCounts::new(t);
        let g = simulate_experiment(&t, p, &mut rng::stream(seed, 1));
        prop_assert_eq!(g.total(), t.total());
        // Live-regardless and saved participants are the only ones alive in the intervention arm.
        prop_assert!(g[1] <= t[0] + t[1]);
        prop_assert!(g[0] <= t[2] + t[3]);
        prop_assert!(!log_likelihood(&t, &g, p).is_impossible());
    }

    #[test]
    fn resampling_keeps_support_and_total(g in counts(200), seed in any::<u64>()) {
        let g = GroupCounts::new(g);
        let r = resample_groups(&g, &mut rng::stream(seed, 0));
        prop_assert_eq!(r.total(), g.total());
        for j in 0..4 {
            prop_assert!(g[j] > 0 || r[j] == 0);
        }
    }
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }
}
