use cdt_topo::knapsack::*;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = KnapsackInstance> {
    (1usize..=12)
        .prop_flat_map(|n| (prop::collection::vec(0.0f64..1.0, n), 0.2f64..0.9))
        .prop_map(|(c, frac)| {
            let n = c.len();
            KnapsackInstance::new(c, vec![1.0; n], frac * n as f64).unwrap()
        })
}

fn weighted_instance() -> impl Strategy<Value = KnapsackInstance> {
    (1usize..=10)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.0f64..1.0, n),
                prop::collection::vec(0.5f64..2.0, n),
                0.2f64..0.9,
            )
        })
        .prop_map(|(c, a, frac)| {
            let total: f64 = a.iter().sum();
            KnapsackInstance::new(c, a, frac * total).unwrap()
        })
}

proptest! {
    #[test]
    fn converged_solutions_are_optimal(inst in instance()) {
        let s = solve_knapsack_cd_escalating(&inst, &CDInnerConfig::default(), 1).unwrap();
        if s.is_converged() {
            let (_, best) = brute_force_knapsack(&inst).unwrap();
            prop_assert_eq!(s.objective, best);
        }
    }

    #[test]
    fn weighted_converged_solutions_are_feasible(inst in weighted_instance()) {
        let s = solve_knapsack_cd_escalating(&inst, &CDInnerConfig::default(), 1).unwrap();
        if s.is_converged() {
            let (_, best) = brute_force_knapsack(&inst).unwrap();
            prop_assert!(inst.fits(inst.volume_of(&s.rho)));
            prop_assert!(s.objective >= best - 1e-12);
        }
    }

    #[test]
    fn dual_bounds_the_optimum_from_below(
        inst in instance(),
        sigma_scale in prop::collection::vec(1e-3f64..10.0, 12),
        varsigma in 0.0f64..3.0,
    ) {
        let (_, best) = brute_force_knapsack(&inst).unwrap();
        let dual = DualPoint { sigma: sigma_scale[..inst.len()].to_vec(), varsigma };
        prop_assert!(dual.is_feasible());
        prop_assert!(dual_value(&dual, &inst) <= best + 1e-9);
        // the perturbation only lowers the bound
        prop_assert!(perturbed_dual_value(&dual, &inst, 100.0) <= dual_value(&dual, &inst));
    }

    #[test]
    fn kkt_conditions_at_converged_points(inst in instance()) {
        let s = solve_knapsack_cd(&inst, &CDInnerConfig::default()).unwrap();
        if s.is_converged() {
            let complementarity: f64 = s.dual.sigma.iter().zip(&s.rho).map(|(sg, r)| sg * (r * r - r)).sum();
            prop_assert_eq!(complementarity, 0.0);
            prop_assert!(s.dual.varsigma >= 0.0);
            prop_assert!(inst.fits(inst.volume_of(&s.rho)));
        }
    }

    #[test]
    fn sigma_approaches_theta_for_huge_beta(theta in 1e-3f64..1e3, negative in any::<bool>()) {
        let theta = if negative { -theta } else { theta };
        let s = solve_sigma_cubic(1e12, theta).unwrap();
        prop_assert!((s - theta.abs()).abs() <= 1e-4);
    }

    #[test]
    fn varsigma_update_matches_independent_evaluation(
        c in prop::collection::vec(0.0f64..5.0, 1..10),
        seed in prop::collection::vec(0.1f64..4.0, 10),
    ) {
        let n = c.len();
        let a: Vec<f64> = seed[..n].iter().map(|s| 0.5 + s).collect();
        let sigma = seed[..n].to_vec();
        let inst = KnapsackInstance::new(c.clone(), a.clone(), 0.5 * a.iter().sum::<f64>()).unwrap();
        let num: f64 = (0..n).map(|e| a[e] + a[e] * c[e] / sigma[e]).sum::<f64>() - 2.0 * inst.budget();
        let den: f64 = (0..n).map(|e| a[e] * a[e] / sigma[e]).sum();
        let v = update_varsigma(&sigma, &inst);
        prop_assert!((v - num / den).abs() <= 1e-12 * (num / den).abs().max(1.0));
        let rho = primal_from_dual(&DualPoint { sigma: sigma.clone(), varsigma: v }, &inst);
        for e in 0..n {
            let expect = 0.5 * (1.0 - (v * a[e] - c[e]) / sigma[e]);
            prop_assert!((rho[e] - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }
}

#[test]
fn large_beta_gap_is_small() {
    let inst = KnapsackInstance::new(vec![0.9, 0.1, 0.5, 0.7, 0.3], vec![1.0; 5], 3.0).unwrap();
    let cfg = CDInnerConfig { beta: 1e6, ..Default::default() };
    let s = solve_knapsack_cd(&inst, &cfg).unwrap();
    assert!(s.is_converged());
    assert_eq!(s.rho, vec![1.0, 0.0, 1.0, 1.0, 0.0]);
    let gap = duality_gap(&s, &inst).unwrap();
    assert!(gap <= 1e-4 * s.objective.abs().max(1.0), "{gap}");
}

#[test]
fn fractional_budgets_match_their_integer_floor() {
    let inst = KnapsackInstance::new(vec![0.2, 0.8, 0.6, 0.4], vec![1.0; 4], 2.4).unwrap();
    let s = solve_knapsack_cd_escalating(&inst, &CDInnerConfig::default(), 1).unwrap();
    assert!(s.is_converged());
    assert_eq!(s.rho, vec![0.0, 1.0, 1.0, 0.0]);
}
