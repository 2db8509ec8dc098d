//! Non-atomic congestion games: structure, validation and cost evaluation.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::price::{Marginal, PriceFunction, PriceIssue};

/// Relative tolerance used when checking `sum_{s in S_k} f_s = d_k`.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("dimension mismatch: expected {expected} {what}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("unknown strategy index {0}")]
    UnknownStrategy(usize),
    #[error("strategy `{strategy}` references unknown resource `{resource}`")]
    UnknownResource { strategy: String, resource: String },
    #[error("duplicate resource id `{0}`")]
    DuplicateResource(String),
    #[error("total demand is zero")]
    ZeroTotalDemand,
    #[error("infeasible profile: {0}")]
    Infeasible(String),
    #[error("invalid demand: {0}")]
    InvalidDemand(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Resource {
    pub id: String,
    pub price: PriceFunction,
}

/// One entry `r(a, s) > 0` of the sparse consumption matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Usage {
    pub resource: usize,
    pub amount: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    pub id: String,
    pub group: usize,
    pub uses: Vec<Usage>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub id: String,
    /// Indices into [`Game::strategies`], contiguous and in declaration order.
    pub strategies: Vec<usize>,
}

/// A congestion game `(K, A, S, r, tau)` without its demand vector.
///
/// Strategies are numbered globally in group order, so a [`Profile`] is a
/// flat vector. Construction only checks that references resolve; the
/// modelling assumptions are checked by [`validate_game`].
#[derive(Clone, Debug, PartialEq)]
pub struct Game {
    groups: Vec<Group>,
    strategies: Vec<Strategy>,
    resources: Vec<Resource>,
}

impl Game {
    pub fn builder() -> GameBuilder {
        GameBuilder::default()
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn num_strategies(&self) -> usize {
        self.strategies.len()
    }

    pub fn num_resources(&self) -> usize {
        self.resources.len()
    }

    pub fn group_of(&self, strategy: usize) -> usize {
        self.strategies[strategy].group
    }

    pub fn price(&self, resource: usize) -> &PriceFunction {
        &self.resources[resource].price
    }

    pub fn group_index(&self, id: &str) -> Option<usize> {
        self.groups.iter().position(|g| g.id == id)
    }

    pub fn strategy_index(&self, id: &str) -> Option<usize> {
        self.strategies.iter().position(|s| s.id == id)
    }

    pub fn resource_index(&self, id: &str) -> Option<usize> {
        self.resources.iter().position(|r| r.id == id)
    }

    /// Replaces every price function, keeping the structure.
    pub fn with_prices<F>(&self, mut f: F) -> Game
    where
        F: FnMut(usize, &PriceFunction) -> PriceFunction,
    {
        let mut g = self.clone();
        for (i, r) in g.resources.iter_mut().enumerate() {
            r.price = f(i, &self.resources[i].price);
        }
        g
    }

    pub fn from_json(text: &str) -> Result<Game, GameError> {
        let doc: GameDoc = serde_json::from_str(text)?;
        Game::from_doc(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("game serializes")
    }

    pub fn to_doc(&self) -> GameDoc {
        GameDoc {
            groups: self
                .groups
                .iter()
                .map(|g| GroupDoc {
                    id: g.id.clone(),
                    strategies: g
                        .strategies
                        .iter()
                        .map(|&s| {
                            let st = &self.strategies[s];
                            StrategyDoc {
                                id: st.id.clone(),
                                uses: st
                                    .uses
                                    .iter()
                                    .map(|u| UseDoc {
                                        resource: self.resources[u.resource].id.clone(),
                                        r: u.amount,
                                    })
                                    .collect(),
                            }
                        })
                        .collect(),
                })
                .collect(),
            resources: self
                .resources
                .iter()
                .map(|r| ResourceDoc {
                    id: r.id.clone(),
                    price: r.price.clone(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: GameDoc) -> Result<Game, GameError> {
        let mut b = GameBuilder::default();
        let mut ids = HashMap::new();
        for r in doc.resources {
            if ids.contains_key(&r.id) {
                return Err(GameError::DuplicateResource(r.id));
            }
            let idx = b.resource(r.id.clone(), r.price);
            ids.insert(r.id, idx);
        }
        for g in doc.groups {
            let gi = b.group(g.id);
            for s in g.strategies {
                let mut uses = Vec::with_capacity(s.uses.len());
                for u in s.uses {
                    let Some(&a) = ids.get(&u.resource) else {
                        return Err(GameError::UnknownResource {
                            strategy: s.id,
                            resource: u.resource,
                        });
                    };
                    uses.push((a, u.r));
                }
                b.strategy(gi, s.id, &uses);
            }
        }
        Ok(b.build())
    }
}

/// Strategy id and usages, before global numbering.
type PendingStrategy = (String, Vec<Usage>);

/// Incremental construction of a [`Game`].
#[derive(Default, Debug)]
pub struct GameBuilder {
    groups: Vec<(String, Vec<PendingStrategy>)>,
    resources: Vec<Resource>,
}

impl GameBuilder {
    pub fn resource(&mut self, id: impl Into<String>, price: PriceFunction) -> usize {
        self.resources.push(Resource { id: id.into(), price });
        self.resources.len() - 1
    }

    pub fn group(&mut self, id: impl Into<String>) -> usize {
        self.groups.push((id.into(), Vec::new()));
        self.groups.len() - 1
    }

    /// Adds a strategy to `group`. Entries with the same resource are summed.
    pub fn strategy(&mut self, group: usize, id: impl Into<String>, uses: &[(usize, f64)]) {
        let mut merged: Vec<Usage> = Vec::with_capacity(uses.len());
        for &(resource, amount) in uses {
            match merged.iter_mut().find(|u| u.resource == resource) {
                Some(u) => u.amount += amount,
                None => merged.push(Usage { resource, amount }),
            }
        }
        self.groups[group].1.push((id.into(), merged));
    }

    /// # Panics
    /// If a strategy references a resource index that was never added.
    pub fn build(self) -> Game {
        let mut groups = Vec::with_capacity(self.groups.len());
        let mut strategies = Vec::new();
        for (gi, (gid, strats)) in self.groups.into_iter().enumerate() {
            let mut members = Vec::with_capacity(strats.len());
            for (sid, uses) in strats {
                for u in &uses {
                    assert!(u.resource < self.resources.len(), "unknown resource {}", u.resource);
                }
                members.push(strategies.len());
                strategies.push(Strategy {
                    id: sid,
                    group: gi,
                    uses,
                });
            }
            groups.push(Group {
                id: gid,
                strategies: members,
            });
        }
        Game {
            groups,
            strategies,
            resources: self.resources,
        }
    }
}

/// JSON mirror of a [`Game`]:
/// `{"groups": [{"id", "strategies": [{"id", "uses": [{"resource", "r"}]}]}],
///   "resources": [{"id", "price": {"kind": "poly", "coeffs": [..]}
///                  | {"kind": "powerlog", "c", "rho", "beta"}}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameDoc {
    pub groups: Vec<GroupDoc>,
    pub resources: Vec<ResourceDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub id: String,
    pub strategies: Vec<StrategyDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyDoc {
    pub id: String,
    pub uses: Vec<UseDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UseDoc {
    pub resource: String,
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceDoc {
    pub id: String,
    pub price: PriceFunction,
}

/// Per-group user volumes `d_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Demand(Vec<f64>);

impl Demand {
    pub fn new(volumes: Vec<f64>) -> Result<Self, GameError> {
        if let Some(v) = volumes.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(GameError::InvalidDemand(format!(
                "volume {v} is not a non-negative number"
            )));
        }
        Ok(Demand(volumes))
    }

    pub fn zeros(groups: usize) -> Self {
        Demand(vec![0.0; groups])
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Demand {
        Demand(self.0.iter().map(|v| v * factor).collect())
    }
}

impl std::ops::Index<usize> for Demand {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Per-strategy flows `f_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(Vec<f64>);

impl Profile {
    pub fn new(flows: Vec<f64>) -> Self {
        Profile(flows)
    }

    pub fn zeros(strategies: usize) -> Self {
        Profile(vec![0.0; strategies])
    }

    /// Every group's demand on its lowest-index strategy.
    pub fn lowest_index(game: &Game, demand: &Demand) -> Self {
        let mut f = vec![0.0; game.num_strategies()];
        for (k, g) in game.groups().iter().enumerate() {
            if let Some(&s) = g.strategies.first() {
                f[s] = demand[k];
            }
        }
        Profile(f)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for Profile {
    type Output = f64;

    fn index(&self, s: usize) -> &f64 {
        &self.0[s]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptyGroup {
        group: String,
    },
    /// The same strategy id appears in more than one group.
    OverlappingStrategySets {
        strategy: String,
        groups: Vec<String>,
    },
    FreeStrategy {
        strategy: String,
        group: String,
    },
    NegativeConsumption {
        strategy: String,
        resource: String,
        amount: f64,
    },
    InvalidPrice {
        resource: String,
        issue: PriceIssue,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyGroup { group } => write!(f, "empty group `{group}`"),
            Violation::OverlappingStrategySets { strategy, groups } => write!(
                f,
                "overlapping strategy sets: `{strategy}` belongs to groups {}",
                groups.join(", ")
            ),
            Violation::FreeStrategy { strategy, group } => {
                write!(f, "free strategy `{strategy}` in group `{group}`")
            }
            Violation::NegativeConsumption {
                strategy,
                resource,
                amount,
            } => write!(f, "negative coefficient r({resource}, {strategy}) = {amount}"),
            Violation::InvalidPrice { resource, issue } => {
                write!(f, "resource `{resource}`: {issue}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the modelling assumptions: non-empty groups, disjoint strategy
/// sets, non-negative consumption, supported prices, and no free strategies.
///
/// A strategy is free when every resource it consumes is priced by the zero
/// polynomial; a power-log price is never identically zero.
pub fn validate_game(game: &Game) -> ValidationReport {
    let mut violations = Vec::new();
    for g in game.groups() {
        if g.strategies.is_empty() {
            violations.push(Violation::EmptyGroup { group: g.id.clone() });
        }
    }

    let mut owners: HashMap<&str, Vec<usize>> = HashMap::new();
    for s in game.strategies() {
        let entry = owners.entry(s.id.as_str()).or_default();
        if !entry.contains(&s.group) {
            entry.push(s.group);
        }
    }
    let mut shared: Vec<_> = owners.into_iter().filter(|(_, g)| g.len() > 1).collect();
    shared.sort_by_key(|(_, g)| g[0]);
    for (sid, gs) in shared {
        violations.push(Violation::OverlappingStrategySets {
            strategy: sid.to_string(),
            groups: gs.iter().map(|&k| game.groups()[k].id.clone()).collect(),
        });
    }

    for r in game.resources() {
        for issue in r.price.issues() {
            violations.push(Violation::InvalidPrice {
                resource: r.id.clone(),
                issue,
            });
        }
    }

    for s in game.strategies() {
        for u in &s.uses {
            if !(u.amount >= 0.0) {
                violations.push(Violation::NegativeConsumption {
                    strategy: s.id.clone(),
                    resource: game.resources()[u.resource].id.clone(),
                    amount: u.amount,
                });
            }
        }
        let priced = s
            .uses
            .iter()
            .any(|u| u.amount > 0.0 && !game.price(u.resource).is_zero());
        if !priced {
            violations.push(Violation::FreeStrategy {
                strategy: s.id.clone(),
                group: game.groups()[s.group].id.clone(),
            });
        }
    }
    ValidationReport { violations }
}

fn check_profile_len(game: &Game, profile: &Profile) -> Result<(), GameError> {
    if profile.len() != game.num_strategies() {
        return Err(GameError::DimensionMismatch {
            what: "strategy flows",
            expected: game.num_strategies(),
            found: profile.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_demand_len(game: &Game, demand: &Demand) -> Result<(), GameError> {
    if demand.len() != game.num_groups() {
        return Err(GameError::DimensionMismatch {
            what: "group volumes",
            expected: game.num_groups(),
            found: demand.len(),
        });
    }
    Ok(())
}

/// Checks p1 (`f_s >= 0`) and p2 (`sum_{S_k} f_s = d_k`) up to [`FEASIBILITY_TOL`].
pub fn check_feasible(game: &Game, demand: &Demand, profile: &Profile) -> Result<(), GameError> {
    check_profile_len(game, profile)?;
    check_demand_len(game, demand)?;
    for (k, g) in game.groups().iter().enumerate() {
        let scale = demand[k].max(1.0);
        let mut sum = 0.0;
        for &s in &g.strategies {
            let v = profile[s];
            if !(v >= -FEASIBILITY_TOL * scale) {
                return Err(GameError::Infeasible(format!(
                    "negative flow {v} on strategy `{}`",
                    game.strategies()[s].id
                )));
            }
            sum += v;
        }
        if (sum - demand[k]).abs() > FEASIBILITY_TOL * scale {
            return Err(GameError::Infeasible(format!(
                "group `{}` routes {sum} but demands {}",
                g.id, demand[k]
            )));
        }
    }
    Ok(())
}

/// `f_a = sum_s r(a, s) f_s`.
pub fn resource_loads(game: &Game, profile: &Profile) -> Result<Vec<f64>, GameError> {
    check_profile_len(game, profile)?;
    Ok(loads_unchecked(game, profile.as_slice()))
}

pub(crate) fn loads_unchecked(game: &Game, flows: &[f64]) -> Vec<f64> {
    let mut loads = vec![0.0; game.num_resources()];
    for (s, st) in game.strategies().iter().enumerate() {
        let f = flows[s];
        if f != 0.0 {
            for u in &st.uses {
                loads[u.resource] += u.amount * f;
            }
        }
    }
    loads
}

/// `tau_s(f) = sum_a r(a, s) tau_a(f_a)`.
pub fn strategy_cost(game: &Game, profile: &Profile, strategy: usize) -> Result<f64, GameError> {
    if strategy >= game.num_strategies() {
        return Err(GameError::UnknownStrategy(strategy));
    }
    let loads = resource_loads(game, profile)?;
    Ok(cost_at_loads(game, &loads, strategy, |a, x| game.price(a).eval(x)))
}

/// All strategy costs under the given resource loads.
pub fn strategy_costs(game: &Game, loads: &[f64]) -> Vec<f64> {
    let prices: Vec<f64> = loads.iter().enumerate().map(|(a, &x)| game.price(a).eval(x)).collect();
    costs_from_prices(game, &prices)
}

pub(crate) fn costs_from_prices(game: &Game, prices: &[f64]) -> Vec<f64> {
    game.strategies()
        .iter()
        .map(|st| st.uses.iter().map(|u| u.amount * prices[u.resource]).sum())
        .collect()
}

pub(crate) fn cost_at_loads<F>(game: &Game, loads: &[f64], strategy: usize, price: F) -> f64
where
    F: Fn(usize, f64) -> f64,
{
    game.strategies()[strategy]
        .uses
        .iter()
        .map(|u| u.amount * price(u.resource, loads[u.resource]))
        .sum()
}

/// Total cost `sum_a f_a tau_a(f_a)`.
pub fn total_cost(game: &Game, profile: &Profile) -> Result<f64, GameError> {
    let loads = resource_loads(game, profile)?;
    Ok(total_cost_at_loads(game, &loads))
}

pub(crate) fn total_cost_at_loads(game: &Game, loads: &[f64]) -> f64 {
    loads
        .iter()
        .enumerate()
        .map(|(a, &x)| if x == 0.0 { 0.0 } else { game.price(a).total_cost(x) })
        .sum()
}

/// Strategy form of the total cost, `sum_s f_s tau_s(f)`.
pub fn total_cost_by_strategy(game: &Game, profile: &Profile) -> Result<f64, GameError> {
    let loads = resource_loads(game, profile)?;
    let costs = strategy_costs(game, &loads);
    Ok(profile.as_slice().iter().zip(&costs).map(|(f, c)| f * c).sum())
}

/// Average cost `C(f) = (1 / T(d)) sum_a f_a tau_a(f_a)`.
pub fn average_cost(game: &Game, demand: &Demand, profile: &Profile) -> Result<f64, GameError> {
    check_demand_len(game, demand)?;
    let t = demand.total();
    if t <= 0.0 {
        return Err(GameError::ZeroTotalDemand);
    }
    Ok(total_cost(game, profile)? / t)
}

/// Marginal price `c_a(x) = x tau_a'(x) + tau_a(x)` of `price`.
pub fn marginal_price(price: &PriceFunction) -> Marginal {
    price.marginal()
}
