//! Level-by-level asymptotic decomposition of a polynomial game along a demand path.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::degrees::degrees;
use super::path::{DemandPath, PathError};
use crate::exponent::{self, Exponent};
use crate::game::{validate_game, Game, ValidationReport};

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("resource `{0}` is not priced by a polynomial")]
    NonPolynomial(String),
    #[error("invalid game:\n{0}")]
    InvalidGame(ValidationReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelVerdict {
    /// The first level.
    Base,
    /// Its scaling factor outgrows every earlier one.
    Independent,
    /// Its cost vanishes relative to an earlier level.
    Negligible,
    /// Remaining groups with identically zero demand in this phase.
    ZeroDemand,
}

impl fmt::Display for LevelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelVerdict::Base => "base",
            LevelVerdict::Independent => "independent",
            LevelVerdict::Negligible => "negligible",
            LevelVerdict::ZeroDemand => "zero demand",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub groups: Vec<usize>,
    pub group_ids: Vec<String>,
    /// `alpha_l = max { rho_k : delta_k > 0 }`; absent for a zero-demand level.
    #[serde(with = "crate::exponent::option")]
    pub alpha: Option<Exponent>,
    /// Exponent of `T_l(d^(n))` in `n`.
    #[serde(with = "crate::exponent::option")]
    pub t_exponent: Option<Exponent>,
    /// Exponent of `g_n^(l) = T_l^(alpha_l)` in `n`.
    #[serde(with = "crate::exponent::option")]
    pub scaling_exponent: Option<Exponent>,
    pub verdict: LevelVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseDecomposition {
    pub phase: usize,
    pub modulus: u64,
    pub residue: u64,
    pub levels: Vec<Level>,
    /// Exponent of the total cost in `n`: `max_u (alpha_u + 1) * exp(T_u)`.
    #[serde(with = "crate::exponent")]
    pub predicted_cost_exponent: Exponent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub phases: Vec<PhaseDecomposition>,
}

pub fn asymptotic_decomposition(game: &Game, path: &DemandPath) -> Result<DecompositionReport, DecompositionError> {
    if let Some(r) = game.resources().iter().find(|r| !r.price.is_polynomial()) {
        return Err(DecompositionError::NonPolynomial(r.id.clone()));
    }
    let report = validate_game(game);
    if !report.is_valid() {
        return Err(DecompositionError::InvalidGame(report));
    }
    path.validate(game.num_groups())?;
    let rho: Vec<Exponent> = degrees(game)
        .group
        .into_iter()
        .map(|d| d.expect("valid games have no free strategies"))
        .collect();

    let phases = path
        .phases
        .iter()
        .enumerate()
        .map(|(i, ph)| {
            let mut remaining: Vec<usize> = (0..game.num_groups()).collect();
            let mut levels: Vec<Level> = Vec::new();
            let mut max_scaling: Option<Exponent> = None;
            let mut predicted = exponent::int(0);
            while !remaining.is_empty() {
                let live: Vec<usize> = remaining
                    .iter()
                    .copied()
                    .filter(|&k| ph.groups[k].theta > 0.0)
                    .collect();
                if live.is_empty() {
                    levels.push(level(
                        game,
                        std::mem::take(&mut remaining),
                        None,
                        None,
                        None,
                        LevelVerdict::ZeroDemand,
                    ));
                    break;
                }
                let t_exp = live.iter().map(|&k| ph.groups[k].exponent).max().expect("non-empty");
                let alpha = live
                    .iter()
                    .filter(|&&k| ph.groups[k].exponent == t_exp)
                    .map(|&k| rho[k])
                    .max()
                    .expect("non-empty");
                let (members, rest): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&k| rho[k] <= alpha);
                let scaling = alpha * t_exp;
                let verdict = match max_scaling {
                    None => LevelVerdict::Base,
                    Some(m) if scaling > m => LevelVerdict::Independent,
                    Some(_) => LevelVerdict::Negligible,
                };
                max_scaling = Some(max_scaling.map_or(scaling, |m| m.max(scaling)));
                predicted = predicted.max((alpha + 1) * t_exp);
                levels.push(level(game, members, Some(alpha), Some(t_exp), Some(scaling), verdict));
                remaining = rest;
            }
            PhaseDecomposition {
                phase: i,
                modulus: ph.modulus,
                residue: ph.residue,
                levels,
                predicted_cost_exponent: predicted,
            }
        })
        .collect();
    Ok(DecompositionReport { phases })
}

fn level(
    game: &Game,
    groups: Vec<usize>,
    alpha: Option<Exponent>,
    t_exponent: Option<Exponent>,
    scaling_exponent: Option<Exponent>,
    verdict: LevelVerdict,
) -> Level {
    Level {
        group_ids: groups.iter().map(|&k| game.groups()[k].id.clone()).collect(),
        groups,
        alpha,
        t_exponent,
        scaling_exponent,
        verdict,
    }
}

impl DecompositionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table, one block per phase.
    pub fn render_table(&self) -> String {
        let fmt_opt = |e: Option<Exponent>| e.map_or_else(|| "-".to_string(), exponent::format);
        let mut out = String::new();
        for ph in &self.phases {
            let _ = writeln!(
                out,
                "phase {} (n = {} mod {}), predicted cost exponent {}",
                ph.phase,
                ph.residue,
                ph.modulus,
                exponent::format(ph.predicted_cost_exponent)
            );
            let _ = writeln!(
                out,
                "{:<6} {:<24} {:>6} {:>6} {:>8}  verdict",
                "level", "groups", "alpha", "T exp", "g exp"
            );
            for (l, lv) in ph.levels.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{:<6} {:<24} {:>6} {:>6} {:>8}  {}",
                    l,
                    lv.group_ids.join(","),
                    fmt_opt(lv.alpha),
                    fmt_opt(lv.t_exponent),
                    fmt_opt(lv.scaling_exponent),
                    lv.verdict
                );
            }
        }
        out
    }
}
