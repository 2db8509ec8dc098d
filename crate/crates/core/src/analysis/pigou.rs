//! Closed-form price of anarchy of the Pigou network: one link priced `x^beta`,
//! one priced `1`, a single group with demand `T`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PigouForm {
    /// Minimizes `f^(beta+1) + (T - f)` directly.
    #[default]
    Derived,
    /// `T / (T - (beta+1)^(-1/beta) + (beta+1)^(-1))`, the form often printed.
    /// Its last term drops a factor `(beta+1)^(-1/beta)`, so at `beta = 1, T = 1`
    /// it gives 1 where the true value is 4/3.
    Printed,
}

#[derive(Debug, Error, PartialEq)]
pub enum PigouError {
    #[error("beta must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("total demand must be positive, got {0}")]
    NonPositiveDemand(f64),
}

pub fn pigou_poa(beta: f64, t: f64, form: PigouForm) -> Result<f64, PigouError> {
    if !(beta > 0.0) {
        return Err(PigouError::NonPositiveBeta(beta));
    }
    if !(t > 0.0) {
        return Err(PigouError::NonPositiveDemand(t));
    }
    let f_star = (beta + 1.0).powf(-1.0 / beta);
    Ok(match form {
        PigouForm::Derived => {
            let ne = if t >= 1.0 { t } else { t.powf(beta + 1.0) };
            let so = if f_star < t {
                t - f_star + f_star.powf(beta + 1.0)
            } else {
                t.powf(beta + 1.0)
            };
            ne / so
        }
        PigouForm::Printed => t / (t - f_star + 1.0 / (beta + 1.0)),
    })
}

pub fn pigou_poa_closed_form(beta: f64, t: f64) -> Result<f64, PigouError> {
    pigou_poa(beta, t, PigouForm::Derived)
}

pub fn pigou_poa_printed(beta: f64, t: f64) -> Result<f64, PigouError> {
    pigou_poa(beta, t, PigouForm::Printed)
}
