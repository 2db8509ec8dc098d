use ncg::exponent;
use ncg::game::{
    average_cost, marginal_price, resource_loads, strategy_cost, total_cost, total_cost_by_strategy, validate_game,
    Demand, Game, Profile, Violation,
};
use ncg::harness::{double_limits, pigou};
use ncg::price::PriceFunction;
use proptest::prelude::*;

fn upper_only() -> Game {
    let mut b = Game::builder();
    let u1 = b.resource("u1", PriceFunction::poly(vec![1.0, 2.0]));
    let u2 = b.resource("u2", PriceFunction::poly(vec![1.0, 3.0]));
    let g = b.group("upper");
    b.strategy(g, "upper-1", &[(u1, 1.0)]);
    b.strategy(g, "upper-2", &[(u2, 1.0)]);
    b.build()
}

#[test]
fn pigou_validates() {
    assert!(validate_game(&pigou(1.0)).is_valid());
    assert!(validate_game(&pigou(4.0)).is_valid());
    assert!(validate_game(&pigou(2.5)).is_valid());
}

#[test]
fn zero_priced_strategy_is_free() {
    let mut b = Game::builder();
    let z = b.resource("z", PriceFunction::poly(vec![0.0, 0.0]));
    let x = b.resource("x", PriceFunction::monomial(1.0, 1));
    let g = b.group("od");
    b.strategy(g, "ok", &[(x, 1.0)]);
    b.strategy(g, "free", &[(z, 1.0)]);
    let report = validate_game(&b.build());
    assert!(matches!(&report.violations[..], [Violation::FreeStrategy { strategy, .. }] if strategy == "free"));
    assert!(report.to_string().contains("free strategy"));
}

#[test]
fn shared_strategy_id_is_overlap() {
    let json = r#"{
      "groups": [
        {"id": "a", "strategies": [{"id": "s", "uses": [{"resource": "x", "r": 1.0}]}]},
        {"id": "b", "strategies": [{"id": "s", "uses": [{"resource": "x", "r": 1.0}]}]}
      ],
      "resources": [{"id": "x", "price": {"kind": "poly", "coeffs": [0.0, 1.0]}}]
    }"#;
    let report = validate_game(&Game::from_json(json).unwrap());
    assert!(report.to_string().contains("overlapping strategy sets"), "{report}");
}

#[test]
fn empty_group_and_negative_coefficient() {
    let mut b = Game::builder();
    let x = b.resource("x", PriceFunction::monomial(1.0, 1));
    b.group("empty");
    let g = b.group("od");
    b.strategy(g, "neg", &[(x, -1.0)]);
    let text = validate_game(&b.build()).to_string();
    assert!(text.contains("empty group"));
    assert!(text.contains("negative coefficient"));
}

#[test]
fn loads_examples() {
    let mut b = Game::builder();
    let a = b.resource("a", PriceFunction::monomial(1.0, 1));
    let g = b.group("g");
    b.strategy(g, "s", &[(a, 1.0)]);
    b.strategy(g, "t", &[(a, 1.0)]);
    let shared = b.build();
    assert_eq!(
        resource_loads(&shared, &Profile::new(vec![6.0, 4.0])).unwrap(),
        vec![10.0]
    );
    assert_eq!(
        resource_loads(&shared, &Profile::new(vec![2.0, 0.0])).unwrap(),
        vec![2.0]
    );
    assert_eq!(
        resource_loads(&upper_only(), &Profile::new(vec![6.0, 4.0])).unwrap(),
        vec![6.0, 4.0]
    );
    assert!(resource_loads(&shared, &Profile::new(vec![1.0])).is_err());
}

#[test]
fn strategy_cost_examples() {
    let p = pigou(1.0);
    assert_eq!(strategy_cost(&p, &Profile::new(vec![1.0, 0.0]), 0).unwrap(), 1.0);
    assert_eq!(
        strategy_cost(&upper_only(), &Profile::new(vec![6.0, 4.0]), 0).unwrap(),
        13.0
    );
    let bpr = PriceFunction::poly(vec![1.0, 0.0, 0.0, 0.0, 0.15]);
    assert!((bpr.eval(2.0) - 3.4).abs() < 1e-12);
    assert!(strategy_cost(&p, &Profile::new(vec![1.0, 0.0]), 7).is_err());
}

#[test]
fn average_cost_examples() {
    let p = pigou(1.0);
    let d = Demand::new(vec![1.0]).unwrap();
    assert_eq!(average_cost(&p, &d, &Profile::new(vec![0.0, 1.0])).unwrap(), 1.0);
    let u = upper_only();
    let f = Profile::new(vec![6.0, 4.0]);
    assert!((average_cost(&u, &Demand::new(vec![10.0]).unwrap(), &f).unwrap() - 13.0).abs() < 1e-12);
    assert_eq!(total_cost(&u, &Profile::new(vec![0.0, 0.0])).unwrap(), 0.0);
    assert!(average_cost(&u, &Demand::new(vec![0.0]).unwrap(), &Profile::new(vec![0.0, 0.0])).is_err());
}

#[test]
fn marginal_examples() {
    let lin = marginal_price(&PriceFunction::monomial(1.0, 1));
    assert_eq!(lin.eval(3.0), 6.0);
    let bpr = marginal_price(&PriceFunction::poly(vec![1.0, 0.0, 0.0, 0.0, 0.15]));
    assert!((bpr.eval(2.0) - (1.0 + 0.75 * 16.0)).abs() < 1e-12);

    // x tau(x) differentiated numerically.
    let p = PriceFunction::power_log(1.0, exponent::int(2), 1.0);
    let total = |x: f64| x * p.eval(x);
    let h = 1e-6;
    let fd = (total(2.0 + h) - total(2.0 - h)) / (2.0 * h);
    let c = marginal_price(&p).eval(2.0);
    assert!(((c - fd) / fd).abs() < 1e-6, "{c} vs {fd}");
}

#[test]
fn json_round_trip() {
    for game in [pigou(1.0), pigou(2.5), double_limits()] {
        let text = game.to_json();
        let back = Game::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back, game);
    }
}

fn price_strategy() -> impl Strategy<Value = PriceFunction> {
    prop_oneof![
        prop::collection::vec(0.0..5.0f64, 1..6).prop_map(PriceFunction::poly),
        (0.1..5.0f64, 0i64..5, 1i64..4, -1.0..2.0f64).prop_map(|(c, num, den, beta)| {
            let rho = exponent::parse(&format!("{}/{}", num + 1, den)).unwrap();
            PriceFunction::power_log(c, rho, beta.max(0.0))
        }),
    ]
}

fn random_profile(game: &Game, weights: &[f64], demand: &[f64]) -> Profile {
    let mut flows = vec![0.0; game.num_strategies()];
    for (k, g) in game.groups().iter().enumerate() {
        let sum: f64 = g.strategies.iter().map(|&s| weights[s]).sum();
        for &s in &g.strategies {
            flows[s] = demand[k] * weights[s] / sum;
        }
    }
    Profile::new(flows)
}

proptest! {
    #[test]
    fn monotone_prices(p in price_strategy(), x in 0.0..1e3f64, dx in 0.0..1e3f64) {
        prop_assert!(p.eval(x) <= p.eval(x + dx) * (1.0 + 1e-12));
        prop_assert!(p.eval(x) >= 0.0);
    }

    #[test]
    fn marginal_dominates(p in price_strategy(), x in 0.0..1e3f64) {
        prop_assert!(p.marginal_eval(x) >= p.eval(x) * (1.0 - 1e-12));
    }

    #[test]
    fn loads_are_linear_and_cost_forms_agree(
        seed in 0u64..1000,
        w1 in prop::collection::vec(0.01..1.0f64, 9),
        w2 in prop::collection::vec(0.01..1.0f64, 9),
        d in prop::collection::vec(0.0..10.0f64, 3),
        lambda in 0.0..1.0f64,
    ) {
        let game = ncg::harness::random_game(seed, ncg::harness::RandomSizes::default(), 3);
        let f = random_profile(&game, &w1, &d);
        let g = random_profile(&game, &w2, &d);
        let mix = Profile::new(f.as_slice().iter().zip(g.as_slice()).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect());
        let (lf, lg, lm) = (
            resource_loads(&game, &f).unwrap(),
            resource_loads(&game, &g).unwrap(),
            resource_loads(&game, &mix).unwrap(),
        );
        for a in 0..game.num_resources() {
            prop_assert!(lm[a] >= 0.0);
            prop_assert!((lm[a] - (lambda * lf[a] + (1.0 - lambda) * lg[a])).abs() <= 1e-9 * (1.0 + lm[a]));
        }
        let by_resource = total_cost(&game, &f).unwrap();
        let by_strategy = total_cost_by_strategy(&game, &f).unwrap();
        prop_assert!((by_resource - by_strategy).abs() <= 1e-10 * by_resource.abs().max(1e-300));
    }
}
