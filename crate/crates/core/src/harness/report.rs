use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::scale::{ScaleRecord, ScaleRun};
use crate::analysis::DecompositionReport;
use crate::exponent;

/// Fewest converged records a phase needs for a fit.
pub const MIN_POINTS: usize = 4;
/// Number of trailing records checked for a non-increasing trend.
pub const TREND_WINDOW: usize = 5;
/// Slack allowed in the trend check.
pub const TREND_SLACK: f64 = 1e-6;
/// `PoA - 1` at or below this is treated as exactly optimal.
pub const OPTIMAL_EXCESS: f64 = 1e-9;
/// Largest allowed gap between measured and predicted cost-growth exponents.
pub const GROWTH_TOLERANCE: f64 = 0.2;

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("phase {phase} has {found} converged records, need at least {MIN_POINTS}")]
    InsufficientData { phase: usize, found: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `PoA - 1` is small at the last point and still non-increasing.
    Converging,
    /// `PoA - 1` stays within numerical noise of zero.
    AlreadyOptimal,
    NotConverging,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseConvergence {
    pub phase: usize,
    pub records: usize,
    /// `PoA - 1` at the largest `n`.
    pub last_excess: f64,
    /// `PoA` is non-increasing over the last `TREND_WINDOW` records within `TREND_SLACK`.
    pub monotone: bool,
    /// Decay exponent `gamma` in `PoA - 1 ~ T^(-gamma)`, from the top half of the records.
    pub gamma: Option<Fit>,
    /// Slope of `log(T C_ne)` against `log n` over the top decade of `n`.
    pub measured_growth: Option<f64>,
    pub predicted_growth: Option<f64>,
    pub growth_consistent: Option<bool>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub phases: Vec<PhaseConvergence>,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Some(Fit {
        slope,
        intercept,
        residual: (rss / nf).sqrt(),
        points: n,
    })
}

/// `gamma` from `log(PoA - 1)` against `log T` over the upper half of `records`
/// (at least `MIN_POINTS`), skipping points within `OPTIMAL_EXCESS` of 1.
pub fn decay_exponent(records: &[&ScaleRecord]) -> Option<Fit> {
    let half = (records.len() / 2).min(records.len().saturating_sub(MIN_POINTS));
    let (xs, ys): (Vec<f64>, Vec<f64>) = records[half..]
        .iter()
        .filter(|r| r.poa - 1.0 > OPTIMAL_EXCESS)
        .map(|r| (r.t.ln(), (r.poa - 1.0).ln()))
        .unzip();
    if xs.len() < MIN_POINTS {
        return None;
    }
    fit_line(&xs, &ys).map(|f| Fit { slope: -f.slope, ..f })
}

/// Slope of `log(T C_ne)` against `log n` for `n` in `[n_max / 10, n_max]`.
pub fn growth_exponent(records: &[&ScaleRecord]) -> Option<f64> {
    let n_max = records.iter().map(|r| r.n).max()? as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.n as f64 >= n_max / 10.0 && r.t * r.c_ne > 0.0)
        .map(|r| ((r.n as f64).ln(), (r.t * r.c_ne).ln()))
        .unzip();
    if xs.len() < 2 {
        return None;
    }
    fit_line(&xs, &ys).map(|f| f.slope)
}

pub fn convergence_report(
    run: &ScaleRun,
    decomposition: Option<&DecompositionReport>,
) -> Result<ConvergenceReport, ReportError> {
    let mut phases = Vec::new();
    for phase in run.phases() {
        let mut records: Vec<&ScaleRecord> = run.phase_records(phase).into_iter().filter(|r| r.converged).collect();
        records.sort_by_key(|r| r.n);
        if records.len() < MIN_POINTS {
            return Err(ReportError::InsufficientData {
                phase,
                found: records.len(),
            });
        }
        let last_excess = records.last().expect("non-empty").poa - 1.0;
        let tail = &records[records.len().saturating_sub(TREND_WINDOW)..];
        let monotone = tail.windows(2).all(|w| w[1].poa <= w[0].poa + TREND_SLACK);
        let gamma = decay_exponent(&records);
        let measured_growth = growth_exponent(&records);
        let predicted_growth = decomposition
            .and_then(|d| d.phases.iter().find(|p| p.phase == phase))
            .map(|p| exponent::to_f64(p.predicted_cost_exponent));
        let growth_consistent = match (measured_growth, predicted_growth) {
            (Some(m), Some(p)) => Some((m - p).abs() <= GROWTH_TOLERANCE),
            _ => None,
        };
        let verdict = if records.iter().all(|r| (r.poa - 1.0).abs() <= OPTIMAL_EXCESS) {
            Verdict::AlreadyOptimal
        } else if monotone && last_excess < records[0].poa - 1.0 {
            Verdict::Converging
        } else {
            Verdict::NotConverging
        };
        phases.push(PhaseConvergence {
            phase,
            records: records.len(),
            last_excess,
            monotone,
            gamma,
            measured_growth,
            predicted_growth,
            growth_consistent,
            verdict,
        });
    }
    Ok(ConvergenceReport { phases })
}
