//! Built-in games and seeded random games.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{DemandPath, GroupTerm, Phase};
use crate::exponent::{self, Exponent};
use crate::game::Game;
use crate::price::PriceFunction;

/// One link priced `x^beta`, one priced `1`, a single group.
pub fn pigou(beta: f64) -> Game {
    let variable = if beta.fract() == 0.0 && (0.0..64.0).contains(&beta) {
        PriceFunction::monomial(1.0, beta as usize)
    } else {
        PriceFunction::power_log(1.0, exponent::from_f64(beta).expect("finite beta"), 0.0)
    };
    let mut b = Game::builder();
    let x = b.resource("x", variable);
    let c = b.resource("const", PriceFunction::constant(1.0));
    let g = b.group("od");
    b.strategy(g, "variable", &[(x, 1.0)]);
    b.strategy(g, "constant", &[(c, 1.0)]);
    b.build()
}

/// Two groups on disjoint parallel links: the upper group on `2x+1` and
/// `3x+1`, the lower group on `4x^2` and `5x^2`.
pub fn double_limits() -> Game {
    let mut b = Game::builder();
    let u1 = b.resource("u1", PriceFunction::poly(vec![1.0, 2.0]));
    let u2 = b.resource("u2", PriceFunction::poly(vec![1.0, 3.0]));
    let l1 = b.resource("l1", PriceFunction::monomial(4.0, 2));
    let l2 = b.resource("l2", PriceFunction::monomial(5.0, 2));
    let upper = b.group("upper");
    b.strategy(upper, "upper-1", &[(u1, 1.0)]);
    b.strategy(upper, "upper-2", &[(u2, 1.0)]);
    let lower = b.group("lower");
    b.strategy(lower, "lower-1", &[(l1, 1.0)]);
    b.strategy(lower, "lower-2", &[(l2, 1.0)]);
    b.build()
}

/// Two groups sharing a resource; every price is quadratic.
pub fn all_degree_equal() -> Game {
    let mut b = Game::builder();
    let r1 = b.resource("r1", PriceFunction::poly(vec![1.0, 0.0, 1.0]));
    let r2 = b.resource("r2", PriceFunction::monomial(2.0, 2));
    let shared = b.resource("shared", PriceFunction::poly(vec![3.0, 0.0, 1.0]));
    let r4 = b.resource("r4", PriceFunction::monomial(0.5, 2));
    let g0 = b.group("a");
    b.strategy(g0, "a-own", &[(r1, 1.0)]);
    b.strategy(g0, "a-shared", &[(shared, 1.0)]);
    let g1 = b.group("b");
    b.strategy(g1, "b-own", &[(r2, 1.0)]);
    b.strategy(g1, "b-shared", &[(shared, 1.0), (r4, 1.0)]);
    b.build()
}

/// Two Pigou-like games on disjoint resources.
pub fn mdg_pair() -> Game {
    let mut b = Game::builder();
    let x = b.resource("x", PriceFunction::monomial(1.0, 1));
    let c = b.resource("c", PriceFunction::constant(1.0));
    let y = b.resource("y", PriceFunction::monomial(2.0, 2));
    let d = b.resource("d", PriceFunction::constant(3.0));
    let g0 = b.group("first");
    b.strategy(g0, "first-x", &[(x, 1.0)]);
    b.strategy(g0, "first-c", &[(c, 1.0)]);
    let g1 = b.group("second");
    b.strategy(g1, "second-y", &[(y, 1.0)]);
    b.strategy(g1, "second-d", &[(d, 1.0)]);
    b.build()
}

/// Two parallel links `1 + x^4` and `2 + x^4 / 2`.
pub fn two_link_degree4() -> Game {
    let mut b = Game::builder();
    let a = b.resource("a", PriceFunction::poly(vec![1.0, 0.0, 0.0, 0.0, 1.0]));
    let c = b.resource("b", PriceFunction::poly(vec![2.0, 0.0, 0.0, 0.0, 0.5]));
    let g = b.group("od");
    b.strategy(g, "a", &[(a, 1.0)]);
    b.strategy(g, "b", &[(c, 1.0)]);
    b.build()
}

/// Named corpus: `pigou(1)`, `pigou(4)`, `double_limits`, `all_degree_equal`, `mdg_pair`.
pub fn builtin_games() -> Vec<(String, Game)> {
    vec![
        ("pigou(1)".into(), pigou(1.0)),
        ("pigou(4)".into(), pigou(4.0)),
        ("double_limits".into(), double_limits()),
        ("all_degree_equal".into(), all_degree_equal()),
        ("mdg_pair".into(), mdg_pair()),
        ("two_link_degree4".into(), two_link_degree4()),
    ]
}

/// Looks up a built-in by name; `pigou(beta)` accepts any positive beta.
pub fn builtin(name: &str) -> Option<Game> {
    let name = name.trim();
    if let Some(arg) = name.strip_prefix("pigou(").and_then(|r| r.strip_suffix(')')) {
        let beta: f64 = arg.trim().parse().ok()?;
        return (beta > 0.0 && beta.is_finite()).then(|| pigou(beta));
    }
    builtin_games().into_iter().find(|(n, _)| n == name).map(|(_, g)| g)
}

/// `d(n) = (theta_k n^(p_k))` with the given terms.
pub fn power_law_path(terms: &[(f64, i64)]) -> DemandPath {
    let t: Vec<(f64, Exponent)> = terms.iter().map(|&(th, p)| (th, exponent::int(p))).collect();
    DemandPath::power_law(&t)
}

/// `d(n) = (n, 0)` for even `n` and `(0, n)` for odd `n`.
pub fn alternating_path() -> DemandPath {
    let term = |theta: f64| GroupTerm {
        theta,
        exponent: exponent::int(1),
    };
    DemandPath {
        phases: vec![
            Phase {
                modulus: 2,
                residue: 0,
                groups: vec![term(1.0), term(0.0)],
            },
            Phase {
                modulus: 2,
                residue: 1,
                groups: vec![term(0.0), term(1.0)],
            },
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSizes {
    pub groups: usize,
    /// Strategies per group are drawn from `1..=max_strategies_per_group`.
    pub max_strategies_per_group: usize,
    pub resources: usize,
    /// Resources per strategy are drawn from `1..=max_resources_per_strategy`.
    pub max_resources_per_strategy: usize,
}

impl Default for RandomSizes {
    fn default() -> Self {
        RandomSizes {
            groups: 3,
            max_strategies_per_group: 3,
            resources: 6,
            max_resources_per_strategy: 2,
        }
    }
}

/// A random game with polynomial prices of degree at most `max_degree`,
/// deterministic in `seed`. Every price has a positive leading coefficient,
/// so the result always validates.
pub fn random_game(seed: u64, sizes: RandomSizes, max_degree: usize) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = sizes.groups.max(1);
    let resources = sizes.resources.max(1);
    let mut b = Game::builder();
    for a in 0..resources {
        let degree = rng.gen_range(0..=max_degree);
        let mut coeffs: Vec<f64> = (0..=degree)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    rng.gen_range(0.0..3.0)
                } else {
                    0.0
                }
            })
            .collect();
        coeffs[degree] = rng.gen_range(0.1..3.0);
        b.resource(format!("r{a}"), PriceFunction::poly(coeffs));
    }
    let ids: Vec<usize> = (0..resources).collect();
    for k in 0..groups {
        let g = b.group(format!("g{k}"));
        let count = rng.gen_range(1..=sizes.max_strategies_per_group.max(1));
        for s in 0..count {
            let len = rng.gen_range(1..=sizes.max_resources_per_strategy.clamp(1, resources));
            let uses: Vec<(usize, f64)> = ids
                .choose_multiple(&mut rng, len)
                .map(|&a| {
                    (
                        a,
                        if rng.gen_bool(0.8) {
                            1.0
                        } else {
                            rng.gen_range(0.5..2.0)
                        },
                    )
                })
                .collect();
            b.strategy(g, format!("g{k}s{s}"), &uses);
        }
    }
    b.build()
}

/// A random single-phase path `theta_k n^(p_k)` with `p_k` in `0..=max_exponent`
/// and at least one growing group.
pub fn random_path(seed: u64, groups: usize, max_exponent: i64) -> DemandPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut terms: Vec<(f64, i64)> = (0..groups)
        .map(|_| (rng.gen_range(0.2..2.0), rng.gen_range(0..=max_exponent.max(1))))
        .collect();
    if !terms.iter().any(|t| t.1 > 0) {
        terms[0].1 = 1;
    }
    power_law_path(&terms)
}
