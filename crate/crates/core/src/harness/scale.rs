use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{price_of_anarchy, DemandPath, PathError, PoaError};
use crate::equilibrium::{check_epsilon_ne_of_so, SolverConfig};
use crate::game::Game;

#[derive(Debug, Error)]
pub enum ScaleError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("n = {n}: {source}")]
    Poa { n: u64, source: PoaError },
    #[error("bad grid `{0}`: expected lo:hi:geometric[:ratio] or lo:hi:linear[:step]")]
    Grid(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleRecord {
    pub phase: usize,
    pub n: u64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "C_ne")]
    pub c_ne: f64,
    #[serde(rename = "C_so")]
    pub c_so: f64,
    pub poa: f64,
    pub gap_ne: f64,
    pub gap_so: f64,
    pub eps_so: f64,
    /// Wall time in milliseconds; zero unless timing was requested.
    pub ms: f64,
    #[serde(skip)]
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleRun {
    pub records: Vec<ScaleRecord>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScaleConfig {
    pub solver: SolverConfig,
    /// Record wall time; off by default so output is byte-reproducible.
    pub timing: bool,
    /// Snap every grid point up into each phase's residue class, so every
    /// phase is sampled across the whole grid.
    pub per_phase: bool,
}

/// Parses `lo:hi:geometric[:ratio]` (ratio defaults to 2) or `lo:hi:linear[:step]`.
pub fn parse_grid(spec: &str) -> Result<Vec<u64>, ScaleError> {
    let bad = || ScaleError::Grid(spec.to_string());
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    if parts.len() < 3 || parts.len() > 4 {
        return Err(bad());
    }
    let lo: u64 = parts[0].parse().map_err(|_| bad())?;
    let hi: u64 = parts[1].parse().map_err(|_| bad())?;
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    match parts[2] {
        "geometric" => {
            let ratio: f64 = parts.get(3).map_or(Ok(2.0), |r| r.parse()).map_err(|_| bad())?;
            if !(ratio > 1.0) {
                return Err(bad());
            }
            Ok(geometric_grid(lo, hi, ratio))
        }
        "linear" => {
            let step: u64 = parts.get(3).map_or(Ok(1), |r| r.parse()).map_err(|_| bad())?;
            if step == 0 {
                return Err(bad());
            }
            Ok((lo..=hi).step_by(step as usize).collect())
        }
        _ => Err(bad()),
    }
}

/// `round(lo * ratio^i)` up to `hi`, deduplicated, always ending at `hi`.
pub fn geometric_grid(lo: u64, hi: u64, ratio: f64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = lo as f64;
    while x.round() as u64 <= hi {
        let n = x.round() as u64;
        if out.last() != Some(&n) {
            out.push(n);
        }
        x *= ratio;
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}

/// The grid restricted to one phase: each point moved up to the next `n` in the phase.
pub fn phase_grid(path: &DemandPath, phase: usize, grid: &[u64]) -> Vec<u64> {
    let Some(p) = path.phases.get(phase) else {
        return vec![];
    };
    let mut out: Vec<u64> = grid
        .iter()
        .map(|&n| {
            let r = n % p.modulus;
            let up = (p.residue + p.modulus - r) % p.modulus;
            (n + up).max(p.first_index())
        })
        .collect();
    out.dedup();
    out
}

pub fn scale_poa(game: &Game, path: &DemandPath, grid: &[u64], config: &ScaleConfig) -> Result<ScaleRun, ScaleError> {
    path.validate(game.num_groups())?;
    let jobs: Vec<(usize, u64)> = if config.per_phase {
        (0..path.phases.len())
            .flat_map(|ph| phase_grid(path, ph, grid).into_iter().map(move |n| (ph, n)))
            .collect()
    } else {
        grid.iter()
            .filter(|&&n| n > 0)
            .map(|&n| (path.phase_of(n).expect("validated paths cover every n"), n))
            .collect()
    };
    let records = jobs
        .par_iter()
        .map(|&(phase, n)| solve_point(game, path, phase, n, config))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScaleRun { records })
}

fn solve_point(
    game: &Game,
    path: &DemandPath,
    phase: usize,
    n: u64,
    config: &ScaleConfig,
) -> Result<ScaleRecord, ScaleError> {
    let start = Instant::now();
    let demand = path.demand_in_phase(phase, n)?;
    let report = price_of_anarchy(game, &demand, &config.solver).map_err(|source| ScaleError::Poa { n, source })?;
    let eps_so = check_epsilon_ne_of_so(game, &demand, &report.so.profile).map_err(|e| ScaleError::Poa {
        n,
        source: PoaError::from(e),
    })?;
    let ms = if config.timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    Ok(ScaleRecord {
        phase,
        n,
        t: demand.total(),
        c_ne: report.c_ne,
        c_so: report.c_so,
        poa: report.poa,
        gap_ne: report.ne.gap,
        gap_so: report.so.gap,
        eps_so,
        ms,
        converged: report.converged(),
    })
}

impl ScaleRun {
    pub fn phase_records(&self, phase: usize) -> Vec<&ScaleRecord> {
        self.records.iter().filter(|r| r.phase == phase).collect()
    }

    pub fn phases(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.records.iter().map(|r| r.phase).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    /// CSV with header `phase,n,T,C_ne,C_so,poa,gap_ne,gap_so,eps_so,ms`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ScaleError> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run serializes")
    }
}
