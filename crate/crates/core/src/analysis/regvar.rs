//! Numerical regular-variation diagnostics.
//!
//! For `c x^rho ln(e+x)^beta` both single-point estimators carry a bias of
//! order `beta / ln t`, far above 0.05 at any representable `t` once
//! `beta != 0`. The limits are therefore estimated by a least-squares fit of
//! `v(t) = L + b / ln t` over the sample points, which removes that term.

use serde::{Deserialize, Serialize};

use crate::price::PriceFunction;

/// Base point and ratio of the index estimator `ln(tau(t x) / tau(t)) / ln x`.
pub const INDEX_POINT: f64 = 1e6;
pub const INDEX_RATIO: f64 = 2.0;
/// Points at which `x tau'(x) / tau(x)` is sampled.
pub const ELASTICITY_POINTS: [f64; 3] = [1e4, 1e6, 1e8];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegvarReport {
    /// Symbolic index, `None` for the zero polynomial.
    pub index: Option<f64>,
    /// `ln(tau(2t) / tau(t)) / ln 2` at `t = INDEX_POINT`.
    pub index_at_point: f64,
    /// Index estimator extrapolated in `1 / ln t` over `ELASTICITY_POINTS`.
    pub index_estimate: f64,
    /// `x tau'(x) / tau(x)` at each of `ELASTICITY_POINTS`.
    pub karamata_ratios: Vec<f64>,
    /// Those ratios extrapolated in `1 / ln x`.
    pub karamata_ratio_estimate: f64,
}

fn index_at(price: &PriceFunction, t: f64) -> f64 {
    let (a, b) = (price.eval(t * INDEX_RATIO), price.eval(t));
    if a == 0.0 && b == 0.0 {
        0.0
    } else {
        (a / b).ln() / INDEX_RATIO.ln()
    }
}

fn elasticity(price: &PriceFunction, x: f64) -> f64 {
    let v = price.eval(x);
    if v == 0.0 {
        0.0
    } else {
        x * price.derivative(x) / v
    }
}

/// Intercept of the least-squares line of `values` against `1 / ln t`.
fn extrapolate(points: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|t| 1.0 / t.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = values.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| (x - mx) * (y - my)).sum();
    my - (sxy / sxx) * mx
}

pub fn regvar_diagnostics(price: &PriceFunction) -> RegvarReport {
    let index_samples: Vec<f64> = ELASTICITY_POINTS.iter().map(|&t| index_at(price, t)).collect();
    let karamata_ratios: Vec<f64> = ELASTICITY_POINTS.iter().map(|&x| elasticity(price, x)).collect();
    RegvarReport {
        index: price.index().map(crate::exponent::to_f64),
        index_at_point: index_at(price, INDEX_POINT),
        index_estimate: extrapolate(&ELASTICITY_POINTS, &index_samples),
        karamata_ratio_estimate: extrapolate(&ELASTICITY_POINTS, &karamata_ratios),
        karamata_ratios,
    }
}
