use serde::{Deserialize, Serialize};

use crate::game::{check_feasible, costs_from_prices, loads_unchecked, Demand, Game, GameError, Profile};

use super::CostModel;

/// A strategy counts as used when it carries more than this fraction of its group's demand.
pub const USED_FLOW_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WardropCheck {
    /// `(sum_s f_s tau_s - sum_k d_k min_{S_k} tau_s) / sum_s f_s tau_s`.
    pub gap: f64,
    pub is_equilibrium: bool,
    /// Group with the largest absolute contribution to the gap.
    pub worst_group: Option<usize>,
}

pub fn check_wardrop(game: &Game, demand: &Demand, profile: &Profile, eps: f64) -> Result<WardropCheck, GameError> {
    check_wardrop_under(CostModel::Latency, game, demand, profile, eps)
}

/// Same as [`check_wardrop`] under the chosen prices; `Marginal` checks SO optimality.
pub fn check_wardrop_under(
    model: CostModel,
    game: &Game,
    demand: &Demand,
    profile: &Profile,
    eps: f64,
) -> Result<WardropCheck, GameError> {
    check_feasible(game, demand, profile)?;
    let costs = costs_under(model, game, profile.as_slice());
    let (gap, worst_group) = relative_gap(game, demand.as_slice(), profile.as_slice(), &costs);
    Ok(WardropCheck {
        gap,
        is_equilibrium: gap <= eps,
        worst_group,
    })
}

/// Smallest `eps` such that every used strategy costs at most `(1 + eps)` times its group minimum.
pub fn check_epsilon_ne_of_so(game: &Game, demand: &Demand, profile: &Profile) -> Result<f64, GameError> {
    check_feasible(game, demand, profile)?;
    let costs = costs_under(CostModel::Latency, game, profile.as_slice());
    let mut eps: f64 = 0.0;
    for (k, g) in game.groups().iter().enumerate() {
        let d = demand[k];
        if d <= 0.0 || g.strategies.is_empty() {
            continue;
        }
        let min = g.strategies.iter().map(|&s| costs[s]).fold(f64::INFINITY, f64::min);
        for &s in &g.strategies {
            if profile[s] <= USED_FLOW_TOL * d {
                continue;
            }
            let ratio = if min > 0.0 {
                costs[s] / min - 1.0
            } else if costs[s] > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            eps = eps.max(ratio);
        }
    }
    Ok(eps)
}

fn costs_under(model: CostModel, game: &Game, flows: &[f64]) -> Vec<f64> {
    let prices: Vec<f64> = loads_unchecked(game, flows)
        .iter()
        .enumerate()
        .map(|(a, &x)| model.price(game.price(a), x))
        .collect();
    costs_from_prices(game, &prices)
}

pub(crate) fn relative_gap(game: &Game, demand: &[f64], flows: &[f64], costs: &[f64]) -> (f64, Option<usize>) {
    let mut used = 0.0;
    let mut best = 0.0;
    let mut worst: Option<(usize, f64)> = None;
    for (k, g) in game.groups().iter().enumerate() {
        if demand[k] <= 0.0 || g.strategies.is_empty() {
            continue;
        }
        let u: f64 = g.strategies.iter().map(|&s| flows[s] * costs[s]).sum();
        let m = g.strategies.iter().map(|&s| costs[s]).fold(f64::INFINITY, f64::min);
        let contribution = u - demand[k] * m;
        used += u;
        best += demand[k] * m;
        if worst.is_none_or(|(_, w)| contribution > w) {
            worst = Some((k, contribution));
        }
    }
    let gap = if used > 0.0 { (used - best) / used } else { 0.0 };
    (gap, worst.map(|(k, _)| k))
}
