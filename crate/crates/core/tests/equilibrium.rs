use ncg::equilibrium::{
    check_epsilon_ne_of_so, check_wardrop, solve_so, solve_wardrop, solve_wardrop_from, Method, SolverConfig,
};
use ncg::game::{average_cost, total_cost, Demand, Game, Profile};
use ncg::harness::{pigou, random_game, RandomSizes};
use ncg::price::PriceFunction;

fn upper_only() -> Game {
    let mut b = Game::builder();
    let u1 = b.resource("u1", PriceFunction::poly(vec![1.0, 2.0]));
    let u2 = b.resource("u2", PriceFunction::poly(vec![1.0, 3.0]));
    let g = b.group("upper");
    b.strategy(g, "upper-1", &[(u1, 1.0)]);
    b.strategy(g, "upper-2", &[(u2, 1.0)]);
    b.build()
}

fn d(v: &[f64]) -> Demand {
    Demand::new(v.to_vec()).unwrap()
}

fn both_methods() -> [SolverConfig; 2] {
    [
        SolverConfig::default(),
        SolverConfig {
            method: Method::ConditionalGradient,
            max_iterations: 100_000,
            ..SolverConfig::default()
        },
    ]
}

#[test]
fn pigou_equilibrium() {
    let game = pigou(1.0);
    let r = solve_wardrop(&game, &d(&[1.0]), &SolverConfig::default()).unwrap();
    assert!(r.converged);
    assert!((r.profile[0] - 1.0).abs() < 1e-9);
    assert!((average_cost(&game, &d(&[1.0]), &r.profile).unwrap() - 1.0).abs() < 1e-9);
}

/// Grid search over the split for the equal-cost point.
#[test]
fn pigou_equilibrium_matches_grid() {
    let game = pigou(1.0);
    let t = 0.7;
    let best = (0..=70_000)
        .map(|i| i as f64 * 1e-5)
        .min_by(|a, b| {
            let excess = |f: f64| (f - 1.0).max(0.0) + if f < t { (1.0 - f).max(0.0) } else { 0.0 };
            excess(*a).total_cmp(&excess(*b))
        })
        .unwrap();
    let r = solve_wardrop(&game, &d(&[t]), &SolverConfig::default()).unwrap();
    assert!((r.profile[0] - best).abs() < 1e-4);
}

#[test]
fn upper_group_equilibrium_and_optimum() {
    let game = upper_only();
    for config in both_methods() {
        for r in [
            solve_wardrop(&game, &d(&[10.0]), &config).unwrap(),
            solve_so(&game, &d(&[10.0]), &config).unwrap(),
        ] {
            assert!(r.converged);
            assert!(
                (r.profile[0] - 6.0).abs() < 1e-6 && (r.profile[1] - 4.0).abs() < 1e-6,
                "{:?}",
                r.profile
            );
        }
    }
}

#[test]
fn zero_demand() {
    let r = solve_wardrop(&upper_only(), &d(&[0.0]), &SolverConfig::default()).unwrap();
    assert_eq!(r.profile.as_slice(), &[0.0, 0.0]);
    assert_eq!(r.gap, 0.0);
    assert!(r.converged);
}

#[test]
fn pigou_optima() {
    let so = solve_so(&pigou(1.0), &d(&[1.0]), &SolverConfig::default()).unwrap();
    assert!((so.profile[0] - 0.5).abs() < 1e-6);
    assert!((total_cost(&pigou(1.0), &so.profile).unwrap() - 0.75).abs() < 1e-9);

    let game = pigou(4.0);
    let so = solve_so(&game, &d(&[1.0]), &SolverConfig::default()).unwrap();
    let f1 = 5f64.powf(-0.25);
    assert!((so.profile[0] - f1).abs() < 1e-6);
    assert!((total_cost(&game, &so.profile).unwrap() - (f1.powi(5) + 1.0 - f1)).abs() < 1e-9);
    assert!((so.profile[0] - 0.66874).abs() < 1e-5);
}

#[test]
fn wardrop_gap_examples() {
    let game = pigou(1.0);
    let dem = d(&[1.0]);
    assert_eq!(
        check_wardrop(&game, &dem, &Profile::new(vec![1.0, 0.0]), 1e-9)
            .unwrap()
            .gap,
        0.0
    );
    let c = check_wardrop(&game, &dem, &Profile::new(vec![0.0, 1.0]), 1e-9).unwrap();
    assert!((c.gap - 1.0).abs() < 1e-12);
    assert!(!c.is_equilibrium);
    assert!(check_wardrop(&game, &dem, &Profile::new(vec![0.5, 0.2]), 1e-9).is_err());
}

#[test]
fn epsilon_of_optimum() {
    let game = pigou(1.0);
    let we = solve_wardrop(&game, &d(&[1.0]), &SolverConfig::default()).unwrap();
    assert!(check_epsilon_ne_of_so(&game, &d(&[1.0]), &we.profile).unwrap() < 1e-9);
    let eps = check_epsilon_ne_of_so(&game, &d(&[1.0]), &Profile::new(vec![0.5, 0.5])).unwrap();
    assert!((eps - 1.0).abs() < 1e-12);
    let eps = check_epsilon_ne_of_so(&game, &d(&[100.0]), &Profile::new(vec![0.5, 99.5])).unwrap();
    assert!((eps - 1.0).abs() < 1e-12);
}

#[test]
fn potential_never_increases() {
    for seed in 0..30 {
        let game = random_game(seed, RandomSizes::default(), 4);
        let demand = Demand::new((0..game.num_groups()).map(|k| 3.0 + k as f64).collect()).unwrap();
        for config in both_methods() {
            let config = SolverConfig {
                record_history: true,
                max_iterations: 500,
                ..config
            };
            for r in [
                solve_wardrop(&game, &demand, &config).unwrap(),
                solve_so(&game, &demand, &config).unwrap(),
            ] {
                let h = r.history.unwrap();
                for w in h.windows(2) {
                    assert!(
                        w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0),
                        "seed {seed}: {} -> {}",
                        w[0],
                        w[1]
                    );
                }
            }
        }
    }
}

// Plain conditional gradient converges sublinearly, so it is held to a looser gap.
#[test]
fn methods_agree() {
    let loose = SolverConfig {
        method: Method::ConditionalGradient,
        gap_tolerance: 1e-4,
        max_iterations: 100_000,
        ..SolverConfig::default()
    };
    for seed in 0..20 {
        let game = random_game(seed, RandomSizes::default(), 3);
        let demand = Demand::new(vec![2.0; game.num_groups()]).unwrap();
        let fast = solve_wardrop(&game, &demand, &SolverConfig::default()).unwrap();
        let slow = solve_wardrop(&game, &demand, &loose).unwrap();
        assert!(
            fast.converged && slow.converged,
            "seed {seed}: gaps {} {}",
            fast.gap,
            slow.gap
        );
        let (a, b) = (
            total_cost(&game, &fast.profile).unwrap(),
            total_cost(&game, &slow.profile).unwrap(),
        );
        assert!((a - b).abs() <= 1e-2 * a, "seed {seed}: {a} vs {b}");
    }
}

#[test]
fn warm_start_rejects_infeasible() {
    let game = upper_only();
    assert!(solve_wardrop_from(
        &game,
        &d(&[10.0]),
        &Profile::new(vec![1.0, 1.0]),
        &SolverConfig::default()
    )
    .is_err());
}

#[test]
fn invalid_config_rejected() {
    let bad = SolverConfig {
        gap_tolerance: 0.0,
        ..SolverConfig::default()
    };
    assert!(solve_wardrop(&upper_only(), &d(&[1.0]), &bad).is_err());
}

#[test]
fn result_serializes() {
    let r = solve_wardrop(&upper_only(), &d(&[10.0]), &SolverConfig::default()).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in ["profile", "gap", "iterations", "objective"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}
