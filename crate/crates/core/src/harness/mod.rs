//! Demand-scaling experiments: solve along a demand path, then fit how fast
//! the price of anarchy approaches 1 and how fast total cost grows.

mod corpus;
mod report;
mod scale;

pub use corpus::{
    all_degree_equal, alternating_path, builtin, builtin_games, double_limits, mdg_pair, pigou, power_law_path,
    random_game, random_path, two_link_degree4, RandomSizes,
};
pub use report::{
    convergence_report, decay_exponent, fit_line, growth_exponent, ConvergenceReport, Fit, PhaseConvergence,
    ReportError, Verdict, GROWTH_TOLERANCE, MIN_POINTS, OPTIMAL_EXCESS, TREND_SLACK, TREND_WINDOW,
};
pub use scale::{geometric_grid, parse_grid, phase_grid, scale_poa, ScaleConfig, ScaleError, ScaleRecord, ScaleRun};
