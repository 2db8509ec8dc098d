//! Resource price functions.
//!
//! Two symbolic families are supported: polynomials with non-negative
//! coefficients and the power-log family `c * x^rho * ln(e + x)^beta`. Both
//! expose their regular-variation index exactly, which the asymptotic
//! analyzers rely on.

use std::cmp::Ordering;
use std::f64::consts::E;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exponent::{self, Exponent};
use crate::quadrature::adaptive_simpson;

/// Absolute tolerance of the power-log antiderivative quadrature.
pub const ANTIDERIVATIVE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PriceFunction {
    /// `sum_i coeffs[i] * x^i`.
    #[serde(rename = "poly")]
    Polynomial { coeffs: Vec<f64> },
    /// `c * x^rho * ln(e + x)^beta`.
    #[serde(rename = "powerlog")]
    PowerLog {
        c: f64,
        #[serde(with = "crate::exponent")]
        rho: Exponent,
        beta: f64,
    },
}

/// Asymptotic growth class of a price function: `x^index * ln(x)^log`.
///
/// Two functions in the supported families have a finite, non-zero limit
/// ratio exactly when their growth classes are equal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Growth {
    Zero,
    Rate { index: Exponent, log: f64 },
}

impl Growth {
    pub fn rate(index: Exponent, log: f64) -> Self {
        Growth::Rate { index, log }
    }
}

impl Eq for Growth {}

impl Ord for Growth {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Growth::Zero, Growth::Zero) => Ordering::Equal,
            (Growth::Zero, _) => Ordering::Less,
            (_, Growth::Zero) => Ordering::Greater,
            (Growth::Rate { index: a, log: la }, Growth::Rate { index: b, log: lb }) => {
                a.cmp(b).then_with(|| la.total_cmp(lb))
            }
        }
    }
}

impl PartialOrd for Growth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::Zero => f.write_str("0"),
            Growth::Rate { index, log } if *log == 0.0 => {
                write!(f, "x^{}", exponent::format(*index))
            }
            Growth::Rate { index, log } => {
                write!(f, "x^{}*ln(x)^{}", exponent::format(*index), log)
            }
        }
    }
}

/// Why a price function falls outside the supported families.
#[derive(Clone, Debug, PartialEq)]
pub enum PriceIssue {
    NegativeCoefficient {
        power: usize,
        value: f64,
    },
    NonFinite,
    NonPositiveScale(f64),
    NegativeIndex(Exponent),
    /// `beta < 0` strong enough to make the function decrease somewhere.
    Decreasing {
        rho: Exponent,
        beta: f64,
    },
}

impl fmt::Display for PriceIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriceIssue::NegativeCoefficient { power, value } => {
                write!(f, "negative coefficient {value} on x^{power}")
            }
            PriceIssue::NonFinite => f.write_str("non-finite parameter"),
            PriceIssue::NonPositiveScale(c) => write!(f, "non-positive scale c = {c}"),
            PriceIssue::NegativeIndex(r) => {
                write!(f, "negative index rho = {}", exponent::format(*r))
            }
            PriceIssue::Decreasing { rho, beta } => write!(
                f,
                "decreasing power-log function (rho = {}, beta = {beta})",
                exponent::format(*rho)
            ),
        }
    }
}

/// Smallest value of `(e + x) ln(e + x) / x` over `x > 0`.
///
/// `c x^rho ln(e+x)^beta` with `beta < 0` is non-decreasing on `[0, inf)`
/// iff `|beta| <= rho * LOG_SLACK_MIN`. The minimizer solves
/// `x = e ln(e + x)`, where the ratio equals `1 + x / e`.
fn log_slack_min() -> f64 {
    let mut x = 6.0;
    for _ in 0..200 {
        x = E * (E + x).ln();
    }
    1.0 + x / E
}

impl PriceFunction {
    pub fn poly(coeffs: Vec<f64>) -> Self {
        PriceFunction::Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        PriceFunction::Polynomial { coeffs: vec![c] }
    }

    /// `coef * x^power`.
    pub fn monomial(coef: f64, power: usize) -> Self {
        let mut coeffs = vec![0.0; power + 1];
        coeffs[power] = coef;
        PriceFunction::Polynomial { coeffs }
    }

    pub fn power_log(c: f64, rho: Exponent, beta: f64) -> Self {
        PriceFunction::PowerLog { c, rho, beta }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PriceFunction::Polynomial { coeffs } => coeffs.iter().all(|c| *c == 0.0),
            PriceFunction::PowerLog { .. } => false,
        }
    }

    /// Problems that put this function outside the supported families.
    pub fn issues(&self) -> Vec<PriceIssue> {
        let mut out = Vec::new();
        match self {
            PriceFunction::Polynomial { coeffs } => {
                for (power, &value) in coeffs.iter().enumerate() {
                    if !value.is_finite() {
                        out.push(PriceIssue::NonFinite);
                    } else if value < 0.0 {
                        out.push(PriceIssue::NegativeCoefficient { power, value });
                    }
                }
            }
            PriceFunction::PowerLog { c, rho, beta } => {
                if !c.is_finite() || !beta.is_finite() {
                    out.push(PriceIssue::NonFinite);
                    return out;
                }
                if *c <= 0.0 {
                    out.push(PriceIssue::NonPositiveScale(*c));
                }
                if rho.is_negative() {
                    out.push(PriceIssue::NegativeIndex(*rho));
                } else if *beta < 0.0 {
                    let bound = exponent::to_f64(*rho) * log_slack_min();
                    if -beta > bound * (1.0 + 1e-12) {
                        out.push(PriceIssue::Decreasing { rho: *rho, beta: *beta });
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PriceFunction::Polynomial { coeffs } => horner(coeffs.iter().copied(), x),
            PriceFunction::PowerLog { c, rho, beta } => c * pow(x, *rho) * log_factor(x, *beta),
        }
    }

    /// First derivative. For a power-log with `0 < rho < 1` this is infinite at 0.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            PriceFunction::Polynomial { coeffs } => {
                horner(coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c), x)
            }
            PriceFunction::PowerLog { c, rho, beta } => {
                let r = exponent::to_f64(*rho);
                let l = (E + x).ln();
                let lead = if rho.is_zero() {
                    0.0
                } else {
                    r * pow(x, *rho - 1) * l.powf(*beta)
                };
                c * (lead + pow(x, *rho) * beta * l.powf(beta - 1.0) / (E + x))
            }
        }
    }

    /// `int_0^x tau(u) du`. Closed form for polynomials, adaptive Simpson
    /// for power-log functions.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match self {
            PriceFunction::Polynomial { coeffs } => {
                x * horner(coeffs.iter().enumerate().map(|(i, c)| c / (i as f64 + 1.0)), x)
            }
            PriceFunction::PowerLog { .. } => {
                if x <= 0.0 {
                    return 0.0;
                }
                adaptive_simpson(|u| self.eval(u), 0.0, x, ANTIDERIVATIVE_TOL)
            }
        }
    }

    /// Auxiliary marginal price `c(x) = x tau'(x) + tau(x)`.
    pub fn marginal(&self) -> Marginal {
        match self {
            PriceFunction::Polynomial { coeffs } => Marginal::Polynomial(PriceFunction::poly(
                coeffs.iter().enumerate().map(|(i, c)| (i as f64 + 1.0) * c).collect(),
            )),
            PriceFunction::PowerLog { c, rho, beta } => Marginal::PowerLog {
                c: *c,
                rho: *rho,
                beta: *beta,
            },
        }
    }

    /// Evaluates `x tau'(x) + tau(x)` without building the marginal.
    pub fn marginal_eval(&self, x: f64) -> f64 {
        match self {
            PriceFunction::Polynomial { coeffs } => {
                horner(coeffs.iter().enumerate().map(|(i, c)| (i as f64 + 1.0) * c), x)
            }
            PriceFunction::PowerLog { rho, beta, .. } => {
                powerlog_marginal(self.eval(x), exponent::to_f64(*rho), *beta, x)
            }
        }
    }

    /// Derivative of the marginal price, `x tau''(x) + 2 tau'(x)`. Exact for
    /// polynomials, a central difference otherwise.
    pub fn marginal_derivative(&self, x: f64) -> f64 {
        match self {
            PriceFunction::Polynomial { coeffs } => horner(
                coeffs.iter().enumerate().skip(1).map(|(i, c)| (i * (i + 1)) as f64 * c),
                x,
            ),
            PriceFunction::PowerLog { .. } => {
                let h = 1e-6 * (1.0 + x);
                let lo = (x - h).max(0.0);
                (self.marginal_eval(x + h) - self.marginal_eval(lo)) / (x + h - lo)
            }
        }
    }

    /// Total cost `x tau(x)`, which is also the antiderivative of the marginal.
    pub fn total_cost(&self, x: f64) -> f64 {
        x * self.eval(x)
    }

    /// Exact regular-variation index; `None` for the zero polynomial.
    pub fn index(&self) -> Option<Exponent> {
        match self {
            PriceFunction::Polynomial { coeffs } => {
                coeffs.iter().rposition(|c| *c != 0.0).map(|d| exponent::int(d as i64))
            }
            PriceFunction::PowerLog { rho, .. } => Some(*rho),
        }
    }

    pub fn log_exponent(&self) -> f64 {
        match self {
            PriceFunction::Polynomial { .. } => 0.0,
            PriceFunction::PowerLog { beta, .. } => *beta,
        }
    }

    pub fn growth(&self) -> Growth {
        match self.index() {
            None => Growth::Zero,
            Some(index) => Growth::Rate {
                index,
                log: self.log_exponent(),
            },
        }
    }

    /// Coefficient of the dominant term, i.e. `lim tau(x) / (x^index ln(x)^log)`.
    pub fn leading_coefficient(&self) -> f64 {
        match self {
            PriceFunction::Polynomial { coeffs } => coeffs.iter().rev().find(|c| **c != 0.0).copied().unwrap_or(0.0),
            PriceFunction::PowerLog { c, .. } => *c,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, PriceFunction::Polynomial { .. })
    }
}

impl fmt::Display for PriceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriceFunction::Polynomial { coeffs } => {
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(i, c)| match i {
                        0 => format!("{c}"),
                        1 => format!("{c}x"),
                        _ => format!("{c}x^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    f.write_str("0")
                } else {
                    f.write_str(&terms.join(" + "))
                }
            }
            PriceFunction::PowerLog { c, rho, beta } => {
                write!(f, "{c}x^{}", exponent::format(*rho))?;
                if *beta != 0.0 {
                    write!(f, "*ln(e+x)^{beta}")?;
                }
                Ok(())
            }
        }
    }
}

/// Marginal price `x tau'(x) + tau(x)` of a [`PriceFunction`].
#[derive(Clone, Debug, PartialEq)]
pub enum Marginal {
    /// Exact polynomial with coefficients `(i + 1) b_i`.
    Polynomial(PriceFunction),
    PowerLog {
        c: f64,
        rho: Exponent,
        beta: f64,
    },
}

impl Marginal {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Marginal::Polynomial(p) => p.eval(x),
            Marginal::PowerLog { c, rho, beta } => {
                let tau = c * pow(x, *rho) * log_factor(x, *beta);
                powerlog_marginal(tau, exponent::to_f64(*rho), *beta, x)
            }
        }
    }
}

/// `tau(x) (1 + rho + beta x / ((e + x) ln(e + x)))`, finite at 0 for any rho.
fn powerlog_marginal(tau: f64, rho: f64, beta: f64, x: f64) -> f64 {
    let elasticity = rho + beta * x / ((E + x) * (E + x).ln());
    tau * (1.0 + elasticity)
}

fn pow(x: f64, e: Exponent) -> f64 {
    if e.is_zero() {
        return 1.0;
    }
    if *e.denom() == 1 {
        if let Ok(n) = i32::try_from(*e.numer()) {
            return x.powi(n);
        }
    }
    x.powf(exponent::to_f64(e))
}

fn log_factor(x: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        1.0
    } else {
        (E + x).ln().powf(beta)
    }
}

fn horner<I>(coeffs: I, x: f64) -> f64
where
    I: DoubleEndedIterator<Item = f64>,
{
    coeffs.rev().fold(0.0, |acc, c| acc * x + c)
}
