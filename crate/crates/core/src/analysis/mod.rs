//! Price of anarchy and analyzers for its behaviour under growing demand.
//!
//! Demand sequences are phased power-law paths ([`DemandPath`]), which make
//! every limit in the asymptotic definitions exactly computable: limit
//! shares, scaling exponents and negligibility verdicts are all decided by
//! rational exponent arithmetic.

mod comparability;
mod decomposition;
mod degrees;
mod gauge;
mod limit;
mod mdg;
mod path;
mod pigou;
mod poa;
mod regvar;

pub use comparability::{comparability_order, ComparabilityReport};
pub use decomposition::{
    asymptotic_decomposition, DecompositionError, DecompositionReport, Level, LevelVerdict, PhaseDecomposition,
};
pub use degrees::{degrees, Degrees};
pub use gauge::{
    find_gauge, find_gauge_for_path, gauge_candidates, gauge_check, Gauge, GaugeReport, GroupGauge, LimitRatio,
};
pub use limit::{build_limit_game, build_limit_game_with_gauge, find_limit_game, LimitFailure, LimitGame, LimitPrice};
pub use mdg::{mdg_decompose, merge_profiles, Component};
pub use path::{DemandPath, GroupTerm, PathError, Phase};
pub use pigou::{pigou_poa, pigou_poa_closed_form, pigou_poa_printed, PigouError, PigouForm};
pub use poa::{price_of_anarchy, PoaError, PoaReport};
pub use regvar::{regvar_diagnostics, RegvarReport};
