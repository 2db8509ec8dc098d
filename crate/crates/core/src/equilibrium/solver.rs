use crate::game::{check_demand_len, check_feasible, Demand, Game, GameError, Profile};

use super::{CostModel, Method, SolveError, SolveResult, SolverConfig};

/// Upper bound on bisection steps; the bracket reaches `f64` resolution well before.
const MAX_BISECTIONS: usize = 200;
/// Largest reduced system for which the pairwise method adds a Newton step.
const NEWTON_MAX_DIM: usize = 200;

pub fn solve_wardrop(game: &Game, demand: &Demand, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    check_demand_len(game, demand)?;
    solve(
        game,
        demand,
        Profile::lowest_index(game, demand),
        config,
        CostModel::Latency,
    )
}

pub fn solve_wardrop_from(
    game: &Game,
    demand: &Demand,
    start: &Profile,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    check_feasible(game, demand, start)?;
    solve(game, demand, start.clone(), config, CostModel::Latency)
}

/// System optimum, computed as the Wardrop equilibrium under marginal prices.
pub fn solve_so(game: &Game, demand: &Demand, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    check_demand_len(game, demand)?;
    solve(
        game,
        demand,
        Profile::lowest_index(game, demand),
        config,
        CostModel::Marginal,
    )
}

pub fn solve_so_from(
    game: &Game,
    demand: &Demand,
    start: &Profile,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    check_feasible(game, demand, start)?;
    solve(game, demand, start.clone(), config, CostModel::Marginal)
}

fn solve(
    game: &Game,
    demand: &Demand,
    start: Profile,
    config: &SolverConfig,
    model: CostModel,
) -> Result<SolveResult, SolveError> {
    config.validate()?;
    if game
        .groups()
        .iter()
        .zip(demand.as_slice())
        .any(|(g, d)| g.strategies.is_empty() && *d > 0.0)
    {
        return Err(GameError::Infeasible("a group with positive demand has no strategies".into()).into());
    }
    let mut state = State::new(game, demand, start.into_vec(), model);
    let mut history = config.record_history.then(|| vec![state.potential()]);

    let mut iterations = 0;
    let mut gap = state.relative_gap();
    while gap > config.gap_tolerance && iterations < config.max_iterations {
        match config.method {
            Method::ConditionalGradient => state.frank_wolfe_step(config.line_search_tolerance),
            Method::PairwiseConditionalGradient => {
                let before = state.flows.clone();
                state.pairwise_sweep(config.line_search_tolerance);
                if !state.newton_step() {
                    state.extrapolate(&before, config.line_search_tolerance);
                }
            }
        }
        iterations += 1;
        if let Some(h) = history.as_mut() {
            h.push(state.potential());
        }
        gap = state.relative_gap();
    }

    let objective = state.potential();
    Ok(SolveResult {
        converged: gap <= config.gap_tolerance,
        profile: Profile::new(state.flows),
        iterations,
        gap,
        objective,
        history,
    })
}

struct State<'g> {
    game: &'g Game,
    model: CostModel,
    demand: &'g [f64],
    flows: Vec<f64>,
    loads: Vec<f64>,
}

impl<'g> State<'g> {
    fn new(game: &'g Game, demand: &'g Demand, flows: Vec<f64>, model: CostModel) -> Self {
        let loads = crate::game::loads_unchecked(game, &flows);
        State {
            game,
            model,
            demand: demand.as_slice(),
            flows,
            loads,
        }
    }

    #[inline]
    fn price(&self, a: usize, x: f64) -> f64 {
        self.model.price(self.game.price(a), x)
    }

    fn potential(&self) -> f64 {
        self.loads
            .iter()
            .enumerate()
            .map(|(a, &x)| self.model.potential(self.game.price(a), x))
            .sum()
    }

    fn strategy_costs(&self) -> Vec<f64> {
        let prices: Vec<f64> = self.loads.iter().enumerate().map(|(a, &x)| self.price(a, x)).collect();
        crate::game::costs_from_prices(self.game, &prices)
    }

    fn strategy_cost(&self, s: usize) -> f64 {
        self.game.strategies()[s]
            .uses
            .iter()
            .map(|u| u.amount * self.price(u.resource, self.loads[u.resource]))
            .sum()
    }

    fn relative_gap(&self) -> f64 {
        let costs = self.strategy_costs();
        super::check::relative_gap(self.game, self.demand, &self.flows, &costs).0
    }

    /// Cheapest strategy per group, lowest index on ties.
    fn cheapest(&self, group: usize, costs: &[f64]) -> usize {
        let members = &self.game.groups()[group].strategies;
        let mut best = members[0];
        for &s in &members[1..] {
            if costs[s] < costs[best] {
                best = s;
            }
        }
        best
    }

    fn frank_wolfe_step(&mut self, tol: f64) {
        let costs = self.strategy_costs();
        let mut target = vec![0.0; self.flows.len()];
        for (k, g) in self.game.groups().iter().enumerate() {
            if self.demand[k] > 0.0 && !g.strategies.is_empty() {
                target[self.cheapest(k, &costs)] = self.demand[k];
            }
        }
        let target_loads = crate::game::loads_unchecked(self.game, &target);
        let dir: Vec<(usize, f64)> = target_loads
            .iter()
            .zip(&self.loads)
            .enumerate()
            .filter_map(|(a, (y, x))| {
                let d = y - x;
                (d != 0.0).then_some((a, d))
            })
            .collect();
        let slope = |lambda: f64| -> f64 {
            dir.iter()
                .map(|&(a, d)| d * self.price(a, self.loads[a] + lambda * d))
                .sum()
        };
        let lambda = line_search(slope, 1.0, tol);
        if lambda <= 0.0 {
            return;
        }
        for (f, y) in self.flows.iter_mut().zip(&target) {
            *f += lambda * (y - *f);
        }
        self.loads = crate::game::loads_unchecked(self.game, &self.flows);
    }

    fn pairwise_sweep(&mut self, tol: f64) {
        for k in 0..self.game.num_groups() {
            if self.demand[k] <= 0.0 {
                continue;
            }
            let members = &self.game.groups()[k].strategies;
            if members.len() < 2 {
                continue;
            }
            let costs: Vec<(usize, f64)> = members.iter().map(|&s| (s, self.strategy_cost(s))).collect();
            let mut cheap = costs[0];
            for &c in &costs[1..] {
                if c.1 < cheap.1 {
                    cheap = c;
                }
            }
            let mut away: Option<(usize, f64)> = None;
            for &c in &costs {
                if self.flows[c.0] > 0.0 && away.is_none_or(|a| c.1 > a.1) {
                    away = Some(c);
                }
            }
            let Some(away) = away else { continue };
            if away.0 == cheap.0 || away.1 <= cheap.1 {
                continue;
            }
            self.shift(cheap.0, away.0, tol);
        }
    }

    /// Projected Newton step on the used strategies of every group, each
    /// group's cheapest strategy serving as the pivot that absorbs the demand
    /// constraint. Skipped (returns `false`) when the reduced system is large.
    fn newton_step(&mut self) -> bool {
        let costs = self.strategy_costs();
        // (strategy, pivot) per free variable.
        let mut vars: Vec<(usize, usize)> = Vec::new();
        for (k, g) in self.game.groups().iter().enumerate() {
            if self.demand[k] <= 0.0 || g.strategies.len() < 2 {
                continue;
            }
            let pivot = self.cheapest(k, &costs);
            vars.extend(
                g.strategies
                    .iter()
                    .filter(|&&s| s != pivot && self.flows[s] > 0.0)
                    .map(|&s| (s, pivot)),
            );
        }
        let n = vars.len();
        if n == 0 || n > NEWTON_MAX_DIM {
            return n == 0;
        }

        let strategies = self.game.strategies();
        let mut column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.game.num_resources()];
        for (i, &(s, pivot)) in vars.iter().enumerate() {
            let mut u: Vec<(usize, f64)> = strategies[s].uses.iter().map(|u| (u.resource, u.amount)).collect();
            for p in &strategies[pivot].uses {
                match u.iter_mut().find(|(a, _)| *a == p.resource) {
                    Some(e) => e.1 -= p.amount,
                    None => u.push((p.resource, -p.amount)),
                }
            }
            for (a, amt) in u {
                if amt != 0.0 {
                    column[a].push((i, amt));
                }
            }
        }
        let mut hessian = vec![0.0; n * n];
        for (a, entries) in column.iter().enumerate() {
            if entries.is_empty() {
                continue;
            }
            let h = self.model.slope(self.game.price(a), self.loads[a]);
            for &(i, ui) in entries {
                for &(j, uj) in entries {
                    hessian[i * n + j] += ui * uj * h;
                }
            }
        }
        let mut step: Vec<f64> = vars.iter().map(|&(s, pivot)| costs[pivot] - costs[s]).collect();
        if !solve_spd(&mut hessian, n, &mut step) {
            return false;
        }

        let mut dir = vec![0.0; self.flows.len()];
        for (&(s, pivot), z) in vars.iter().zip(&step) {
            dir[s] += z;
            dir[pivot] -= z;
        }
        let mut upper: f64 = 1.0;
        let mut binding = None;
        for (s, d) in dir.iter().enumerate() {
            if *d < 0.0 && self.flows[s] / -d < upper {
                upper = self.flows[s] / -d;
                binding = Some(s);
            }
        }
        let load_dir = crate::game::loads_unchecked(self.game, &dir);
        let moves: Vec<(usize, f64)> = load_dir.into_iter().enumerate().filter(|(_, d)| *d != 0.0).collect();
        let slope = |t: f64| -> f64 {
            moves
                .iter()
                .map(|&(a, d)| d * self.price(a, self.loads[a] + t * d))
                .sum()
        };
        if upper <= 0.0 || slope(0.0) >= 0.0 {
            return false;
        }
        let t = line_search(slope, upper, 1e-12);
        for (x, d) in self.flows.iter_mut().zip(&dir) {
            *x = (*x + t * d).max(0.0);
        }
        if let Some(s) = binding.filter(|_| t >= upper) {
            self.flows[s] = 0.0;
        }
        self.loads = crate::game::loads_unchecked(self.game, &self.flows);
        true
    }

    /// Exact line search along the displacement of the last sweep, continued
    /// as far as feasibility allows. Undoes the zigzag of group-by-group moves
    /// when groups share resources.
    fn extrapolate(&mut self, before: &[f64], tol: f64) {
        let dir: Vec<f64> = self.flows.iter().zip(before).map(|(x, b)| x - b).collect();
        let mut upper = f64::INFINITY;
        for (x, d) in self.flows.iter().zip(&dir) {
            if *d < 0.0 {
                upper = upper.min(x / -d);
            }
        }
        if !(upper > 0.0 && upper.is_finite()) {
            return;
        }
        let load_dir = crate::game::loads_unchecked(self.game, &dir);
        let moves: Vec<(usize, f64)> = load_dir.into_iter().enumerate().filter(|(_, d)| *d != 0.0).collect();
        let slope = |t: f64| -> f64 {
            moves
                .iter()
                .map(|&(a, d)| d * self.price(a, self.loads[a] + t * d))
                .sum()
        };
        let t = line_search(slope, upper, tol);
        if t <= 0.0 {
            return;
        }
        for (x, d) in self.flows.iter_mut().zip(&dir) {
            *x = (*x + t * d).max(0.0);
        }
        self.loads = crate::game::loads_unchecked(self.game, &self.flows);
    }

    /// Moves flow from `from` to `to` with an exact line search on the potential.
    fn shift(&mut self, to: usize, from: usize, tol: f64) {
        let strategies = self.game.strategies();
        let mut dir: Vec<(usize, f64)> = strategies[to].uses.iter().map(|u| (u.resource, u.amount)).collect();
        for u in &strategies[from].uses {
            match dir.iter_mut().find(|(a, _)| *a == u.resource) {
                Some(e) => e.1 -= u.amount,
                None => dir.push((u.resource, -u.amount)),
            }
        }
        dir.retain(|(_, d)| *d != 0.0);
        let available = self.flows[from];
        let slope = |delta: f64| -> f64 {
            dir.iter()
                .map(|&(a, d)| d * self.price(a, self.loads[a] + delta * d))
                .sum()
        };
        let step = line_search(|t| slope(t * available), 1.0, tol);
        if step <= 0.0 {
            return;
        }
        let delta = if step >= 1.0 { available } else { step * available };
        self.flows[to] += delta;
        if step >= 1.0 {
            self.flows[from] = 0.0;
        } else {
            self.flows[from] -= delta;
        }
        for (a, d) in dir {
            self.loads[a] += delta * d;
        }
    }
}

/// Solves `a x = b` in place for symmetric positive semi-definite `a` (row
/// major, `n x n`) by Cholesky with a small diagonal shift. Returns `false`
/// if the factorization breaks down.
fn solve_spd(a: &mut [f64], n: usize, b: &mut [f64]) -> bool {
    let scale = (0..n).map(|i| a[i * n + i]).fold(0.0, f64::max);
    if !(scale > 0.0 && scale.is_finite()) {
        return false;
    }
    for i in 0..n {
        a[i * n + i] += 1e-12 * scale;
    }
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = v / d;
        }
    }
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= a[i * n + k] * b[k];
        }
        b[i] = v / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in i + 1..n {
            v -= a[k * n + i] * b[k];
        }
        b[i] = v / a[i * n + i];
    }
    true
}

/// Minimizes a convex function on `[0, upper]` given its (monotone) derivative.
fn line_search<F: Fn(f64) -> f64>(slope: F, upper: f64, tol: f64) -> f64 {
    if slope(0.0) >= 0.0 {
        return 0.0;
    }
    if slope(upper) <= 0.0 {
        return upper;
    }
    let (mut lo, mut hi) = (0.0, upper);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol * upper {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
