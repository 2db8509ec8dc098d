//! Gauge functions `g(x) = c x^rho ln(e+x)^beta` and the conditions under
//! which a single gauge captures the growth of a game along a demand path.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::path::{DemandPath, PathError};
use crate::exponent::{self, Exponent};
use crate::game::Game;
use crate::price::{Growth, PriceFunction};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    pub c: f64,
    #[serde(with = "crate::exponent")]
    pub rho: Exponent,
    pub beta: f64,
}

impl Gauge {
    pub fn new(c: f64, rho: Exponent, beta: f64) -> Self {
        Gauge { c, rho, beta }
    }

    /// `g(x) = x^alpha`.
    pub fn power(alpha: Exponent) -> Self {
        Gauge::new(1.0, alpha, 0.0)
    }

    pub fn constant() -> Self {
        Gauge::power(exponent::int(0))
    }

    pub fn growth(&self) -> Growth {
        Growth::rate(self.rho, self.beta)
    }

    pub fn eval(&self, x: f64) -> f64 {
        PriceFunction::power_log(self.c, self.rho, self.beta).eval(x)
    }

    /// `lim tau(x) / g(x)` as `x -> inf`.
    pub fn ratio(&self, price: &PriceFunction) -> LimitRatio {
        match price.growth() {
            Growth::Zero => LimitRatio::Zero,
            g => match g.cmp(&self.growth()) {
                Ordering::Less => LimitRatio::Zero,
                Ordering::Greater => LimitRatio::Infinite,
                Ordering::Equal => LimitRatio::Finite(price.leading_coefficient() / self.c),
            },
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c)?;
        if self.rho != exponent::int(0) {
            write!(f, "*x^{}", exponent::format(self.rho))?;
        }
        if self.beta != 0.0 {
            write!(f, "*ln(e+x)^{}", self.beta)?;
        }
        Ok(())
    }
}

/// A limit in `[0, inf]`; `Finite` values are strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitRatio {
    Zero,
    Finite(f64),
    Infinite,
}

impl LimitRatio {
    pub fn is_finite(self) -> bool {
        !matches!(self, LimitRatio::Infinite)
    }

    pub fn is_positive_finite(self) -> bool {
        matches!(self, LimitRatio::Finite(_))
    }

    fn key(self) -> (u8, f64) {
        match self {
            LimitRatio::Zero => (0, 0.0),
            LimitRatio::Finite(v) => (1, v),
            LimitRatio::Infinite => (2, 0.0),
        }
    }

    fn cmp(self, other: Self) -> Ordering {
        let (a, x) = self.key();
        let (b, y) = other.key();
        a.cmp(&b).then(x.total_cmp(&y))
    }

    fn max(self, other: Self) -> Self {
        if self.cmp(other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if self.cmp(other) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for LimitRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitRatio::Zero => f.write_str("0"),
            LimitRatio::Finite(v) => write!(f, "{v}"),
            LimitRatio::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupGauge {
    /// `min_s max { q_a : r(a, s) > 0 }`.
    pub min_max: LimitRatio,
    /// Some strategy has every `q_a` finite.
    pub has_finite_strategy: bool,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeReport {
    pub gauge: Gauge,
    pub q: Vec<LimitRatio>,
    pub groups: Vec<GroupGauge>,
    /// Always true within the supported price families.
    pub g1: bool,
    pub g2: bool,
    /// `lim sum_{k tight} d_k / T` in each phase; G3 takes the minimum.
    pub tight_share: Vec<f64>,
    pub g3: bool,
    pub gaugeable: bool,
}

fn group_gauges(game: &Game, q: &[LimitRatio]) -> Vec<GroupGauge> {
    game.groups()
        .iter()
        .map(|g| {
            let per_strategy: Vec<LimitRatio> = g
                .strategies
                .iter()
                .map(|&s| {
                    game.strategies()[s]
                        .uses
                        .iter()
                        .filter(|u| u.amount > 0.0)
                        .fold(LimitRatio::Zero, |m, u| m.max(q[u.resource]))
                })
                .collect();
            let min_max = per_strategy
                .iter()
                .copied()
                .reduce(LimitRatio::min)
                .unwrap_or(LimitRatio::Infinite);
            GroupGauge {
                min_max,
                has_finite_strategy: per_strategy.iter().any(|m| m.is_finite()),
                tight: min_max.is_positive_finite(),
            }
        })
        .collect()
}

fn ratios(game: &Game, gauge: &Gauge) -> Vec<LimitRatio> {
    game.resources().iter().map(|r| gauge.ratio(&r.price)).collect()
}

/// Checks G1-G3 for `gauge` along `path`.
pub fn gauge_check(game: &Game, path: &DemandPath, gauge: &Gauge) -> Result<GaugeReport, PathError> {
    path.validate(game.num_groups())?;
    let q = ratios(game, gauge);
    let groups = group_gauges(game, &q);
    let g2 = groups.iter().all(|g| g.has_finite_strategy);
    let tight_share: Vec<f64> = path
        .phases
        .iter()
        .map(|p| {
            p.limit_shares()
                .iter()
                .zip(&groups)
                .filter(|(_, g)| g.tight)
                .map(|(d, _)| d)
                .sum()
        })
        .collect();
    let g3 = tight_share.iter().all(|&s| s > 0.0);
    Ok(GaugeReport {
        gauge: *gauge,
        q,
        groups,
        g1: true,
        g2,
        tight_share,
        g3,
        gaugeable: g2 && g3,
    })
}

/// Gauges built from the game's own parameters, in increasing growth order.
pub fn gauge_candidates(game: &Game) -> Vec<Gauge> {
    let mut growths: Vec<Growth> = vec![Gauge::constant().growth()];
    growths.extend(game.resources().iter().map(|r| r.price.growth()));
    growths.retain(|g| *g != Growth::Zero);
    growths.sort();
    growths.dedup();
    growths
        .into_iter()
        .map(|g| match g {
            Growth::Rate { index, log } => Gauge::new(1.0, index, log),
            Growth::Zero => unreachable!(),
        })
        .collect()
}

/// A gauge satisfying G1'-G3' for the groups in `subset`.
pub fn find_gauge(game: &Game, subset: &[usize]) -> Option<Gauge> {
    if subset.is_empty() {
        return None;
    }
    gauge_candidates(game).into_iter().find(|gauge| {
        let groups = group_gauges(game, &ratios(game, gauge));
        subset.iter().all(|&k| groups[k].has_finite_strategy) && subset.iter().any(|&k| groups[k].tight)
    })
}

/// The first candidate gauge satisfying G1-G3 along the whole path.
pub fn find_gauge_for_path(game: &Game, path: &DemandPath) -> Result<Option<GaugeReport>, PathError> {
    for gauge in gauge_candidates(game) {
        let report = gauge_check(game, path, &gauge)?;
        if report.gaugeable {
            return Ok(Some(report));
        }
    }
    Ok(None)
}
