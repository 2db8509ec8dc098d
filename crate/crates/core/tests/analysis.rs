use ncg::analysis::{
    asymptotic_decomposition, build_limit_game, build_limit_game_with_gauge, comparability_order, degrees, find_gauge,
    gauge_check, mdg_decompose, merge_profiles, pigou_poa, pigou_poa_closed_form, price_of_anarchy, regvar_diagnostics,
    DecompositionError, Gauge, LevelVerdict, LimitFailure, LimitPrice, LimitRatio, PigouForm, PoaError,
};
use ncg::equilibrium::{solve_so, solve_wardrop, SolverConfig};
use ncg::exponent;
use ncg::game::{total_cost, Demand, Game};
use ncg::harness::{
    all_degree_equal, alternating_path, double_limits, mdg_pair, pigou, power_law_path, random_game, RandomSizes,
};
use ncg::price::PriceFunction;

fn d(v: &[f64]) -> Demand {
    Demand::new(v.to_vec()).unwrap()
}

fn poa(game: &Game, v: &[f64]) -> f64 {
    price_of_anarchy(game, &d(v), &SolverConfig::default()).unwrap().poa
}

/// `min_f f^(beta+1) + (T - f)` over `[0, T]` by a fine grid then refinement.
fn pigou_so_oracle(beta: f64, t: f64) -> f64 {
    let h = |f: f64| f.powf(beta + 1.0) + (t - f);
    let (mut lo, mut hi) = (0.0, t);
    for _ in 0..100 {
        let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if h(a) <= h(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    h((lo + hi) / 2.0)
}

#[test]
fn pigou_examples() {
    assert!((poa(&pigou(1.0), &[1.0]) - 4.0 / 3.0).abs() < 1e-5);
    assert!((poa(&pigou(1.0), &[4.0]) - 16.0 / 15.0).abs() < 1e-5);
    assert!((pigou_poa_closed_form(4.0, 1.0).unwrap() - 2.1505).abs() < 1e-4);
    assert!(pigou_poa_closed_form(0.0, 1.0).is_err());
    for beta in [0.5, 1.0, 2.0, 3.5] {
        for t in [0.25f64, 0.5, 1.0, 3.0, 100.0] {
            let ne = if t <= 1.0 { t.powf(beta + 1.0) } else { t };
            let oracle = ne / pigou_so_oracle(beta, t);
            assert!(
                (pigou_poa_closed_form(beta, t).unwrap() - oracle).abs() < 1e-9,
                "beta {beta} T {t}"
            );
        }
    }
    let tail: Vec<f64> = [1.0, 10.0, 100.0, 1e4]
        .iter()
        .map(|&t| pigou_poa_closed_form(1.0, t).unwrap())
        .collect();
    assert!(tail.windows(2).all(|w| w[1] < w[0]) && tail[3] - 1.0 < 1e-4);
}

#[test]
fn printed_form_differs() {
    assert!((pigou_poa(1.0, 1.0, PigouForm::Printed).unwrap() - 1.0).abs() < 1e-12);
    assert!((pigou_poa(1.0, 1.0, PigouForm::Derived).unwrap() - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn upper_group_poa_is_one() {
    let game = double_limits();
    assert!((poa(&game, &[10.0, 0.0]) - 1.0).abs() < 1e-9);
}

#[test]
fn zero_demand_and_undefined() {
    assert!(matches!(
        price_of_anarchy(&pigou(1.0), &d(&[0.0]), &SolverConfig::default()),
        Err(PoaError::ZeroDemand)
    ));
}

#[test]
fn poa_at_least_one() {
    for seed in 0..40 {
        let game = random_game(seed, RandomSizes::default(), 4);
        let v: Vec<f64> = (0..game.num_groups())
            .map(|k| 0.5 + (seed + k as u64) as f64 % 7.0)
            .collect();
        assert!(poa(&game, &v) >= 1.0 - 1e-6, "seed {seed}");
    }
}

#[test]
fn degree_examples() {
    let mut b = Game::builder();
    let a = b.resource("a", PriceFunction::poly(vec![2.0, 0.0, 0.0, 0.0, 3.0]));
    let c = b.resource("c", PriceFunction::constant(1.0));
    let g = b.group("g");
    b.strategy(g, "both", &[(a, 1.0), (c, 1.0)]);
    b.strategy(g, "const", &[(c, 1.0)]);
    let deg = degrees(&b.build());
    assert_eq!(deg.resource[0], Some(exponent::int(4)));
    assert_eq!(deg.strategy[0], Some(exponent::int(4)));
    assert_eq!(deg.group[0], Some(exponent::int(0)));
}

#[test]
fn mdg_components() {
    assert_eq!(mdg_decompose(&double_limits()).len(), 2);
    assert_eq!(mdg_decompose(&pigou(1.0)).len(), 1);
    assert_eq!(mdg_decompose(&mdg_pair()).len(), 2);
    assert_eq!(mdg_decompose(&all_degree_equal()).len(), 1);
}

#[test]
fn mdg_marginal_consistency_and_mediant() {
    let config = SolverConfig::default();
    for (game, v) in [(mdg_pair(), vec![3.0, 2.0]), (double_limits(), vec![4.0, 7.0])] {
        let demand = d(&v);
        let comps = mdg_decompose(&game);
        let mut ne = Vec::new();
        let mut so = Vec::new();
        let mut poas = Vec::new();
        for c in &comps {
            let cd = c.demand(&demand);
            ne.push(solve_wardrop(&c.game, &cd, &config).unwrap().profile);
            so.push(solve_so(&c.game, &cd, &config).unwrap().profile);
            poas.push(price_of_anarchy(&c.game, &cd, &config).unwrap().poa);
        }
        let whole_ne = total_cost(&game, &solve_wardrop(&game, &demand, &config).unwrap().profile).unwrap();
        let whole_so = total_cost(&game, &solve_so(&game, &demand, &config).unwrap().profile).unwrap();
        let merged_ne = total_cost(&game, &merge_profiles(&game, &comps, &ne)).unwrap();
        let merged_so = total_cost(&game, &merge_profiles(&game, &comps, &so)).unwrap();
        assert!((whole_ne - merged_ne).abs() <= 1e-6 * whole_ne);
        assert!((whole_so - merged_so).abs() <= 1e-6 * whole_so);
        let p = whole_ne / whole_so;
        let lo = poas.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = poas.iter().copied().fold(0.0, f64::max);
        assert!(p >= lo - 1e-6 && p <= hi + 1e-6);
    }
}

#[test]
fn pigou_limit_game_at_constant_scaling() {
    let game = pigou(2.0);
    let path = power_law_path(&[(1.0, 1)]);
    let l = build_limit_game(&game, &path, 0, exponent::int(0)).unwrap();
    assert_eq!(l.prices[0], LimitPrice::Infinite);
    assert_eq!(
        l.prices[1],
        LimitPrice::Power {
            coef: 1.0,
            exponent: exponent::int(0)
        }
    );
    assert_eq!(l.tight_strategies, vec![1]);
    assert_eq!(l.surviving_groups, vec![0]);
    assert!((l.ne_cost - 1.0).abs() < 1e-9);
    assert!((l.poa.unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn even_phase_limit_game() {
    let game = double_limits();
    let path = alternating_path();
    let l = build_limit_game(&game, &path, 0, exponent::int(1)).unwrap();
    assert_eq!(
        l.prices[0],
        LimitPrice::Power {
            coef: 2.0,
            exponent: exponent::int(1)
        }
    );
    assert_eq!(
        l.prices[1],
        LimitPrice::Power {
            coef: 3.0,
            exponent: exponent::int(1)
        }
    );
    assert!(l.negligible[1]);
    assert_eq!(l.surviving_groups, vec![0]);
}

#[test]
fn oversized_scaling_fails() {
    let game = double_limits();
    let path = power_law_path(&[(1.0, 1), (1.0, 1)]);
    assert!(matches!(
        build_limit_game(&game, &path, 0, exponent::int(3)),
        Err(LimitFailure::ZeroLimitCost)
    ));
}

#[test]
fn limit_prices_are_homogeneous() {
    let game = double_limits();
    let path = alternating_path();
    for (phase, alpha) in [(0, 1), (1, 2)] {
        let l = build_limit_game(&game, &path, phase, exponent::int(alpha)).unwrap();
        for p in &l.prices {
            if let LimitPrice::Power { exponent: e, .. } = p {
                let (x, lambda) = (1.3, 2.7);
                let scaled = p.eval(lambda * x).unwrap();
                let expected = lambda.powf(exponent::to_f64(*e)) * p.eval(x).unwrap();
                assert!((scaled - expected).abs() <= 1e-12 * expected.abs().max(1.0));
            }
        }
    }
}

#[test]
fn decomposition_of_double_limits() {
    let game = double_limits();
    let report = asymptotic_decomposition(&game, &power_law_path(&[(1.0, 2), (1.0, 1)])).unwrap();
    let phase = &report.phases[0];
    assert_eq!(phase.levels[0].group_ids, ["upper"]);
    assert_eq!(phase.levels[0].alpha, Some(exponent::int(1)));
    assert_eq!(phase.levels[1].group_ids, ["lower"]);
    assert_eq!(phase.levels[1].alpha, Some(exponent::int(2)));
    assert_eq!(phase.levels[1].verdict, LevelVerdict::Negligible);
    assert_eq!(phase.predicted_cost_exponent, exponent::int(4));
    let table = report.render_table();
    assert!(table.contains("upper") && table.contains("negligible"));
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["phases"][0]["predicted_cost_exponent"], "4");
}

#[test]
fn equal_degrees_give_one_level() {
    let report = asymptotic_decomposition(&all_degree_equal(), &power_law_path(&[(1.0, 1), (2.0, 1)])).unwrap();
    assert_eq!(report.phases[0].levels.len(), 1);
    assert_eq!(report.phases[0].levels[0].groups, vec![0, 1]);
    let single = asymptotic_decomposition(&pigou(3.0), &power_law_path(&[(1.0, 1)])).unwrap();
    assert_eq!(single.phases[0].levels.len(), 1);
}

#[test]
fn decomposition_partitions_groups() {
    for seed in 0..30 {
        let game = random_game(
            seed,
            RandomSizes {
                groups: 4,
                ..RandomSizes::default()
            },
            4,
        );
        let path = ncg::harness::random_path(seed, game.num_groups(), 3);
        let report = asymptotic_decomposition(&game, &path).unwrap();
        for phase in &report.phases {
            let mut seen: Vec<usize> = phase.levels.iter().flat_map(|l| l.groups.clone()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..game.num_groups()).collect::<Vec<_>>(), "seed {seed}");
            let alphas: Vec<_> = phase.levels.iter().filter_map(|l| l.alpha).collect();
            assert!(alphas.windows(2).all(|w| w[0] < w[1]), "seed {seed}: {alphas:?}");
        }
    }
}

#[test]
fn decomposition_needs_polynomials() {
    let r = asymptotic_decomposition(&pigou(1.5), &power_law_path(&[(1.0, 1)]));
    assert!(matches!(r, Err(DecompositionError::NonPolynomial { .. })));
}

#[test]
fn pigou_gauges() {
    let game = pigou(4.0);
    let path = power_law_path(&[(1.0, 1)]);
    let flat = gauge_check(&game, &path, &Gauge::constant()).unwrap();
    assert_eq!(flat.q, vec![LimitRatio::Infinite, LimitRatio::Finite(1.0)]);
    assert!(flat.g2 && flat.g3 && flat.gaugeable);
    let quartic = gauge_check(&game, &path, &Gauge::power(exponent::int(4))).unwrap();
    assert_eq!(quartic.q, vec![LimitRatio::Finite(1.0), LimitRatio::Zero]);
    assert!(!quartic.groups[0].tight && !quartic.g3 && !quartic.gaugeable);
    assert_eq!(find_gauge(&game, &[0]), Some(Gauge::constant()));
}

#[test]
fn alternating_path_not_gaugeable() {
    let game = double_limits();
    let path = alternating_path();
    for gauge in ncg::analysis::gauge_candidates(&game) {
        assert!(!gauge_check(&game, &path, &gauge).unwrap().gaugeable, "{gauge}");
    }
    for phase in 0..2 {
        assert!(ncg::analysis::find_limit_game(&game, &path, phase).unwrap().is_some());
    }
}

#[test]
fn gauge_and_limit_game_agree() {
    let game = all_degree_equal();
    let path = power_law_path(&[(1.0, 1), (1.0, 1)]);
    let report = ncg::analysis::find_gauge_for_path(&game, &path).unwrap().unwrap();
    let limit = build_limit_game_with_gauge(&game, &path, 0, &report.gauge).unwrap();
    let tight: Vec<usize> = (0..game.num_groups()).filter(|&k| report.groups[k].tight).collect();
    let with_tight: Vec<usize> = limit
        .surviving_groups
        .iter()
        .copied()
        .filter(|&k| {
            game.groups()[k]
                .strategies
                .iter()
                .any(|s| limit.tight_strategies.contains(s))
        })
        .collect();
    assert_eq!(tight, with_tight);
}

#[test]
fn regvar_examples() {
    let r = regvar_diagnostics(&PriceFunction::power_log(1.0, exponent::int(2), 1.0));
    assert!((r.index_estimate - 2.0).abs() < 0.05);
    assert!((r.karamata_ratio_estimate - 2.0).abs() < 0.01);
    let r = regvar_diagnostics(&PriceFunction::constant(3.0));
    assert_eq!((r.index_estimate, r.karamata_ratio_estimate), (0.0, 0.0));
    let r = regvar_diagnostics(&PriceFunction::poly(vec![1.0, 0.0, 0.0, 0.0, 0.15]));
    assert!((r.index_estimate - 4.0).abs() < 0.05 && (r.karamata_ratio_estimate - 4.0).abs() < 0.05);
}

#[test]
fn comparability_examples() {
    let mut b = Game::builder();
    let x3 = b.resource("x3", PriceFunction::monomial(1.0, 3));
    let x2l = b.resource("x2l", PriceFunction::power_log(1.0, exponent::int(2), 1.0));
    let x2 = b.resource("x2", PriceFunction::monomial(1.0, 2));
    let two = b.resource("2x", PriceFunction::monomial(2.0, 1));
    let three = b.resource("3x", PriceFunction::monomial(3.0, 1));
    let one = b.resource("1", PriceFunction::constant(1.0));
    let x4 = b.resource("x4", PriceFunction::monomial(1.0, 4));
    let g = b.group("g");
    b.strategy(g, "slow", &[(x4, 1.0)]);
    b.strategy(g, "fast", &[(one, 1.0), (two, 1.0)]);
    for (i, a) in [x3, x2l, x2, three].into_iter().enumerate() {
        b.strategy(g, format!("s{i}"), &[(a, 1.0)]);
    }
    let report = comparability_order(&b.build());
    assert_eq!(
        report.classes,
        vec![vec![one], vec![two, three], vec![x2], vec![x2l], vec![x3], vec![x4]]
    );
    assert_eq!(report.cheapest, vec![Some(1)]);
}
