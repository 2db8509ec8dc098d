//! Limit games along one phase of a demand path.
//!
//! With scaling factors `g_n = g(T(d^(n)))`, each resource's rescaled price
//! `tau_a(T x) / g_n` tends to zero, to a homogeneous power `b x^rho`, or to
//! infinity, depending only on how the growth class of `tau_a` compares with
//! that of `g`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::gauge::Gauge;
use super::path::{DemandPath, PathError};
use crate::equilibrium::{solve_so, solve_wardrop, SolverConfig};
use crate::exponent::{self, Exponent};
use crate::game::{total_cost, Demand, Game};
use crate::price::{Growth, PriceFunction};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LimitPrice {
    Zero,
    /// `coef * x^exponent`.
    Power {
        coef: f64,
        #[serde(with = "crate::exponent")]
        exponent: Exponent,
    },
    Infinite,
}

impl LimitPrice {
    /// `None` for an infinite limit.
    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            LimitPrice::Zero => Some(0.0),
            LimitPrice::Power { coef, exponent } => Some(coef * PriceFunction::power_log(1.0, *exponent, 0.0).eval(x)),
            LimitPrice::Infinite => None,
        }
    }

    fn to_price(self) -> Option<PriceFunction> {
        match self {
            LimitPrice::Zero => Some(PriceFunction::poly(vec![])),
            LimitPrice::Power { coef, exponent } => Some(match exponent.is_integer() {
                true => PriceFunction::monomial(coef, exponent.to_integer().to_usize().expect("non-negative")),
                false => PriceFunction::power_log(coef, exponent, 0.0),
            }),
            LimitPrice::Infinite => None,
        }
    }
}

impl fmt::Display for LimitPrice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitPrice::Zero => f.write_str("0"),
            LimitPrice::Power { coef, exponent: e } => write!(f, "{coef}*x^{}", exponent::format(*e)),
            LimitPrice::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LimitFailure {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("group {group} is neither negligible nor has a tight strategy")]
    NoTightStrategy { group: usize },
    #[error(
        "limit equilibrium cost is zero: every group with positive limit share has a tight strategy of zero limit cost"
    )]
    ZeroLimitCost,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitGame {
    pub phase: usize,
    pub gauge: Gauge,
    pub prices: Vec<LimitPrice>,
    /// Limit shares `delta_k`.
    pub delta: Vec<f64>,
    pub tight_strategies: Vec<usize>,
    pub negligible: Vec<bool>,
    pub surviving_groups: Vec<usize>,
    /// Total equilibrium and optimum costs of the limit instance at demand `delta`.
    pub ne_cost: f64,
    pub so_cost: f64,
    pub poa: Option<f64>,
}

impl LimitGame {
    /// The limit game as a concrete instance: surviving groups, tight
    /// strategies and non-infinite resources, with demand `delta`.
    pub fn instance(&self, game: &Game) -> (Game, Demand) {
        let mut b = Game::builder();
        let mut local = vec![None; game.num_resources()];
        for (a, r) in game.resources().iter().enumerate() {
            if let Some(p) = self.prices[a].to_price() {
                local[a] = Some(b.resource(r.id.clone(), p));
            }
        }
        let mut volumes = Vec::new();
        for &k in &self.surviving_groups {
            let g = &game.groups()[k];
            let gi = b.group(g.id.clone());
            for &s in &g.strategies {
                if !self.tight_strategies.contains(&s) {
                    continue;
                }
                let st = &game.strategies()[s];
                let uses: Vec<(usize, f64)> = st
                    .uses
                    .iter()
                    .map(|u| {
                        (
                            local[u.resource].expect("tight strategies avoid infinite limits"),
                            u.amount,
                        )
                    })
                    .collect();
                b.strategy(gi, st.id.clone(), &uses);
            }
            volumes.push(self.delta[k]);
        }
        (b.build(), Demand::new(volumes).expect("shares are non-negative"))
    }
}

/// Limit game under the power scaling `g_n = T(d^(n))^alpha`.
pub fn build_limit_game(
    game: &Game,
    path: &DemandPath,
    phase: usize,
    alpha: Exponent,
) -> Result<LimitGame, LimitFailure> {
    build_limit_game_with_gauge(game, path, phase, &Gauge::power(alpha))
}

pub fn build_limit_game_with_gauge(
    game: &Game,
    path: &DemandPath,
    phase: usize,
    gauge: &Gauge,
) -> Result<LimitGame, LimitFailure> {
    path.validate(game.num_groups())?;
    let ph = path.phases.get(phase).ok_or(PathError::UnknownPhase(phase))?;
    let delta = ph.limit_shares();
    let total = ph.total_exponent().expect("validated paths grow");

    let prices: Vec<LimitPrice> = game
        .resources()
        .iter()
        .map(|r| match r.price.growth() {
            Growth::Zero => LimitPrice::Zero,
            g => match g.cmp(&gauge.growth()) {
                Ordering::Less => LimitPrice::Zero,
                Ordering::Greater => LimitPrice::Infinite,
                Ordering::Equal => LimitPrice::Power {
                    coef: r.price.leading_coefficient() / gauge.c,
                    exponent: gauge.rho,
                },
            },
        })
        .collect();

    let tight_strategies: Vec<usize> = (0..game.num_strategies())
        .filter(|&s| {
            game.strategies()[s]
                .uses
                .iter()
                .all(|u| u.amount <= 0.0 || prices[u.resource] != LimitPrice::Infinite)
        })
        .collect();

    // Load exponent of each resource: the fastest-growing group that can use it.
    let mut load_exp: Vec<Option<Exponent>> = vec![None; game.num_resources()];
    for st in game.strategies() {
        let term = &ph.groups[st.group];
        if term.theta <= 0.0 {
            continue;
        }
        for u in &st.uses {
            let e = &mut load_exp[u.resource];
            *e = Some(e.map_or(term.exponent, |x: Exponent| x.max(term.exponent)));
        }
    }
    // Magnitude of T * g(T) as (exponent of n, power of ln n).
    let budget = (total + gauge.rho * total, gauge.beta);
    let negligible: Vec<bool> = game
        .groups()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let term = &ph.groups[k];
            if term.theta <= 0.0 {
                return true;
            }
            g.strategies.iter().all(|&s| {
                game.strategies()[s].uses.iter().all(|u| {
                    let Growth::Rate { index, log } = game.price(u.resource).growth() else {
                        return true;
                    };
                    let e = load_exp[u.resource].unwrap_or(Exponent::zero());
                    let (growth, log) = if e.is_zero() {
                        (Exponent::zero(), 0.0)
                    } else {
                        (index * e, log)
                    };
                    let cost = (term.exponent + growth, log);
                    cost.0.cmp(&budget.0).then(cost.1.total_cmp(&budget.1)) == Ordering::Less
                })
            })
        })
        .collect();

    let has_tight = |k: usize| game.groups()[k].strategies.iter().any(|s| tight_strategies.contains(s));
    if let Some(group) = (0..game.num_groups()).find(|&k| !negligible[k] && !has_tight(k)) {
        return Err(LimitFailure::NoTightStrategy { group });
    }
    let surviving_groups: Vec<usize> = (0..game.num_groups())
        .filter(|&k| !negligible[k] || has_tight(k))
        .collect();

    let positive = surviving_groups.iter().any(|&k| {
        delta[k] > 0.0
            && game.groups()[k]
                .strategies
                .iter()
                .filter(|s| tight_strategies.contains(s))
                .all(|&s| {
                    game.strategies()[s]
                        .uses
                        .iter()
                        .any(|u| u.amount > 0.0 && matches!(prices[u.resource], LimitPrice::Power { .. }))
                })
    });
    if !positive {
        return Err(LimitFailure::ZeroLimitCost);
    }

    let mut limit = LimitGame {
        phase,
        gauge: *gauge,
        prices,
        delta,
        tight_strategies,
        negligible,
        surviving_groups,
        ne_cost: 0.0,
        so_cost: 0.0,
        poa: None,
    };
    let (instance, demand) = limit.instance(game);
    let config = SolverConfig::default();
    if let (Ok(ne), Ok(so)) = (
        solve_wardrop(&instance, &demand, &config),
        solve_so(&instance, &demand, &config),
    ) {
        limit.ne_cost = total_cost(&instance, &ne.profile).unwrap_or(f64::NAN);
        limit.so_cost = total_cost(&instance, &so.profile).unwrap_or(f64::NAN);
        if limit.so_cost > 0.0 {
            limit.poa = Some(limit.ne_cost / limit.so_cost);
        }
    }
    Ok(limit)
}

/// Smallest power scaling, drawn from the resource degrees, that yields a valid limit game.
pub fn find_limit_game(game: &Game, path: &DemandPath, phase: usize) -> Result<Option<LimitGame>, PathError> {
    let mut alphas: Vec<Exponent> = vec![exponent::int(0)];
    alphas.extend(game.resources().iter().filter_map(|r| r.price.index()));
    alphas.sort();
    alphas.dedup();
    for alpha in alphas {
        match build_limit_game(game, path, phase, alpha) {
            Ok(l) => return Ok(Some(l)),
            Err(LimitFailure::Path(e)) => return Err(e),
            Err(_) => continue,
        }
    }
    Ok(None)
}
