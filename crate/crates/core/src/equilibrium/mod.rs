//! Wardrop equilibria and system optima by conditional gradient descent.
//!
//! Both problems minimize a separable convex potential over the product of
//! per-group simplices: the Beckmann potential `sum_a int_0^{f_a} tau_a` for
//! the equilibrium, and `sum_a f_a tau_a(f_a)` for the optimum, whose
//! gradient is the marginal price `c_a(x) = x tau_a'(x) + tau_a(x)`.

mod check;
mod solver;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{check_epsilon_ne_of_so, check_wardrop, check_wardrop_under, WardropCheck};
pub use solver::{solve_so, solve_so_from, solve_wardrop, solve_wardrop_from};

use crate::game::GameError;
use crate::price::PriceFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Classic Frank-Wolfe: all-or-nothing target per group, one joint
    /// exact line search per iteration.
    ConditionalGradient,
    /// Per-group pairwise steps: shift flow from the costliest used strategy
    /// to the cheapest one with an exact line search, sweeping all groups
    /// once per iteration.
    PairwiseConditionalGradient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub gap_tolerance: f64,
    pub max_iterations: usize,
    /// Bisection stops once the bracket is below this fraction of the step range.
    pub line_search_tolerance: f64,
    pub method: Method,
    /// Keep the potential after every iteration in [`SolveResult::history`].
    pub record_history: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            gap_tolerance: 1e-9,
            max_iterations: 10_000,
            line_search_tolerance: 1e-12,
            method: Method::PairwiseConditionalGradient,
            record_history: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.gap_tolerance > 0.0) {
            return Err(SolveError::Config("gap tolerance must be positive".into()));
        }
        if !(self.line_search_tolerance > 0.0) {
            return Err(SolveError::Config("line-search tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(SolveError::Config("max iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("invalid solver configuration: {0}")]
    Config(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub profile: crate::game::Profile,
    pub iterations: usize,
    /// Relative gap, measured under the prices the problem was solved for.
    pub gap: f64,
    /// Final potential value.
    pub objective: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub history: Option<Vec<f64>>,
}

/// Which prices a solve equilibrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostModel {
    /// `tau_a`, giving Wardrop equilibria.
    Latency,
    /// `c_a`, giving system optima.
    Marginal,
}

impl CostModel {
    #[inline]
    pub fn price(self, p: &PriceFunction, x: f64) -> f64 {
        match self {
            CostModel::Latency => p.eval(x),
            CostModel::Marginal => p.marginal_eval(x),
        }
    }

    /// Derivative of [`CostModel::price`] in the load.
    #[inline]
    pub fn slope(self, p: &PriceFunction, x: f64) -> f64 {
        match self {
            CostModel::Latency => p.derivative(x),
            CostModel::Marginal => p.marginal_derivative(x),
        }
    }

    pub fn potential(self, p: &PriceFunction, x: f64) -> f64 {
        match self {
            CostModel::Latency => p.antiderivative(x),
            CostModel::Marginal => p.total_cost(x),
        }
    }
}
