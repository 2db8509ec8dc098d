use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::{solve_so, solve_wardrop, SolveError, SolveResult, SolverConfig};
use crate::game::{average_cost, check_demand_len, Demand, Game, GameError};

#[derive(Debug, Error)]
pub enum PoaError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("total demand is zero")]
    ZeroDemand,
    #[error("price of anarchy undefined: optimal cost is zero")]
    Undefined,
}

impl From<GameError> for PoaError {
    fn from(e: GameError) -> Self {
        PoaError::Solve(e.into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoaReport {
    pub poa: f64,
    /// Average cost of the equilibrium.
    pub c_ne: f64,
    /// Average cost of the optimum.
    pub c_so: f64,
    pub ne: SolveResult,
    pub so: SolveResult,
}

impl PoaReport {
    pub fn converged(&self) -> bool {
        self.ne.converged && self.so.converged
    }
}

/// `PoA = C(f_ne) / C(f_so)`.
pub fn price_of_anarchy(game: &Game, demand: &Demand, config: &SolverConfig) -> Result<PoaReport, PoaError> {
    check_demand_len(game, demand)?;
    if demand.total() <= 0.0 {
        return Err(PoaError::ZeroDemand);
    }
    let ne = solve_wardrop(game, demand, config)?;
    let so = solve_so(game, demand, config)?;
    let c_ne = average_cost(game, demand, &ne.profile)?;
    let c_so = average_cost(game, demand, &so.profile)?;
    if c_so <= 0.0 {
        return Err(PoaError::Undefined);
    }
    Ok(PoaReport {
        poa: c_ne / c_so,
        c_ne,
        c_so,
        ne,
        so,
    })
}
