//! Phased power-law demand paths `d_k(n) = theta_k * n^(p_k)` for `n = r (mod m)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponent::{self, Exponent};
use crate::game::Demand;

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("demand path has no phases")]
    NoPhases,
    #[error("phase {phase}: modulus must be at least 1")]
    ZeroModulus { phase: usize },
    #[error("phase {phase}: residue {residue} is not below modulus {modulus}")]
    BadResidue { phase: usize, residue: u64, modulus: u64 },
    #[error("phase {phase}: expected {expected} group terms, found {found}")]
    GroupCount {
        phase: usize,
        expected: usize,
        found: usize,
    },
    #[error("phase {phase}, group {group}: theta must be finite and non-negative")]
    BadTheta { phase: usize, group: usize },
    #[error("phase {phase}, group {group}: exponent must be non-negative")]
    NegativeExponent { phase: usize, group: usize },
    #[error("phase {phase}: total demand does not grow (need theta > 0 with a positive exponent)")]
    Bounded { phase: usize },
    #[error("residue {residue} (mod {modulus}) is covered by {count} phases")]
    Coverage { residue: u64, modulus: u64, count: usize },
    #[error("phase moduli are too large to check coverage")]
    ModulusOverflow,
    #[error("no phase contains n = {0}")]
    Uncovered(u64),
    #[error("n must be at least 1")]
    ZeroIndex,
    #[error("phase index {0} out of range")]
    UnknownPhase(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupTerm {
    pub theta: f64,
    #[serde(with = "crate::exponent")]
    pub exponent: Exponent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    #[serde(default = "one")]
    pub modulus: u64,
    #[serde(default)]
    pub residue: u64,
    pub groups: Vec<GroupTerm>,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandPath {
    pub phases: Vec<Phase>,
}

/// Largest lcm of phase moduli accepted by [`DemandPath::validate`].
const MAX_PERIOD: u64 = 1 << 20;

impl DemandPath {
    /// Single-phase path `d_k(n) = theta_k * n^(p_k)`.
    pub fn power_law(terms: &[(f64, Exponent)]) -> Self {
        DemandPath {
            phases: vec![Phase {
                modulus: 1,
                residue: 0,
                groups: terms
                    .iter()
                    .map(|&(theta, exponent)| GroupTerm { theta, exponent })
                    .collect(),
            }],
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("path serializes")
    }

    pub fn num_groups(&self) -> usize {
        self.phases.first().map_or(0, |p| p.groups.len())
    }

    pub fn validate(&self, num_groups: usize) -> Result<(), PathError> {
        if self.phases.is_empty() {
            return Err(PathError::NoPhases);
        }
        let mut period: u64 = 1;
        for (i, p) in self.phases.iter().enumerate() {
            if p.modulus == 0 {
                return Err(PathError::ZeroModulus { phase: i });
            }
            if p.residue >= p.modulus {
                return Err(PathError::BadResidue {
                    phase: i,
                    residue: p.residue,
                    modulus: p.modulus,
                });
            }
            if p.groups.len() != num_groups {
                return Err(PathError::GroupCount {
                    phase: i,
                    expected: num_groups,
                    found: p.groups.len(),
                });
            }
            for (k, t) in p.groups.iter().enumerate() {
                if !(t.theta.is_finite() && t.theta >= 0.0) {
                    return Err(PathError::BadTheta { phase: i, group: k });
                }
                if t.exponent.is_negative() {
                    return Err(PathError::NegativeExponent { phase: i, group: k });
                }
            }
            if !p.groups.iter().any(|t| t.theta > 0.0 && t.exponent > Exponent::zero()) {
                return Err(PathError::Bounded { phase: i });
            }
            period = lcm(period, p.modulus);
            if period > MAX_PERIOD {
                return Err(PathError::ModulusOverflow);
            }
        }
        for residue in 0..period {
            let count = self.phases.iter().filter(|p| residue % p.modulus == p.residue).count();
            if count != 1 {
                return Err(PathError::Coverage {
                    residue,
                    modulus: period,
                    count,
                });
            }
        }
        Ok(())
    }

    /// Phase containing `n`, the first match if phases overlap.
    pub fn phase_of(&self, n: u64) -> Option<usize> {
        self.phases.iter().position(|p| n % p.modulus == p.residue)
    }

    pub fn demand(&self, n: u64) -> Result<Demand, PathError> {
        if n == 0 {
            return Err(PathError::ZeroIndex);
        }
        let phase = self.phase_of(n).ok_or(PathError::Uncovered(n))?;
        self.demand_in_phase(phase, n)
    }

    /// Evaluates a phase's formula at `n` without checking the residue.
    pub fn demand_in_phase(&self, phase: usize, n: u64) -> Result<Demand, PathError> {
        if n == 0 {
            return Err(PathError::ZeroIndex);
        }
        let p = self.phases.get(phase).ok_or(PathError::UnknownPhase(phase))?;
        let volumes = p
            .groups
            .iter()
            .map(|t| {
                if t.theta == 0.0 {
                    0.0
                } else {
                    t.theta * (n as f64).powf(exponent::to_f64(t.exponent))
                }
            })
            .collect();
        Ok(Demand::new(volumes).expect("terms validated non-negative"))
    }
}

impl Phase {
    /// Exponent of `T(d^(n))`: the largest `p_k` among groups with `theta_k > 0`.
    pub fn total_exponent(&self) -> Option<Exponent> {
        self.groups.iter().filter(|t| t.theta > 0.0).map(|t| t.exponent).max()
    }

    /// Limit shares `delta_k = lim d_k / T`.
    pub fn limit_shares(&self) -> Vec<f64> {
        let Some(top) = self.total_exponent() else {
            return vec![0.0; self.groups.len()];
        };
        let dominant = |t: &GroupTerm| t.theta > 0.0 && t.exponent == top;
        let sum: f64 = self.groups.iter().filter(|t| dominant(t)).map(|t| t.theta).sum();
        self.groups
            .iter()
            .map(|t| if dominant(t) { t.theta / sum } else { 0.0 })
            .collect()
    }

    /// Smallest `n >= 1` in this phase.
    pub fn first_index(&self) -> u64 {
        if self.residue == 0 {
            self.modulus
        } else {
            self.residue
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating() -> DemandPath {
        let term = |theta: f64| GroupTerm {
            theta,
            exponent: exponent::int(1),
        };
        DemandPath {
            phases: vec![
                Phase {
                    modulus: 2,
                    residue: 0,
                    groups: vec![term(1.0), term(0.0)],
                },
                Phase {
                    modulus: 2,
                    residue: 1,
                    groups: vec![term(0.0), term(1.0)],
                },
            ],
        }
    }

    #[test]
    fn alternating_demands() {
        let p = alternating();
        p.validate(2).unwrap();
        assert_eq!(p.demand(4).unwrap().as_slice(), &[4.0, 0.0]);
        assert_eq!(p.demand(5).unwrap().as_slice(), &[0.0, 5.0]);
        assert_eq!(p.phases[1].limit_shares(), vec![0.0, 1.0]);
    }

    #[test]
    fn coverage_is_checked() {
        let mut p = alternating();
        p.phases[1].residue = 0;
        assert!(matches!(
            p.validate(2),
            Err(PathError::Coverage {
                residue: 0,
                count: 2,
                ..
            })
        ));
        p.phases.pop();
        assert!(matches!(
            p.validate(2),
            Err(PathError::Coverage {
                residue: 1,
                count: 0,
                ..
            })
        ));
    }

    #[test]
    fn bounded_phase_rejected() {
        let p = DemandPath::power_law(&[(1.0, exponent::int(0))]);
        assert_eq!(p.validate(1), Err(PathError::Bounded { phase: 0 }));
    }

    #[test]
    fn shares_follow_dominant_exponent() {
        let p = DemandPath::power_law(&[
            (1.0, exponent::int(2)),
            (3.0, exponent::int(1)),
            (3.0, exponent::int(2)),
        ]);
        assert_eq!(p.phases[0].limit_shares(), vec![0.25, 0.0, 0.75]);
    }

    #[test]
    fn json_round_trip() {
        let p = alternating();
        assert_eq!(DemandPath::from_json(&p.to_json()).unwrap(), p);
        let q =
            DemandPath::from_json(r#"{"phases":[{"groups":[{"theta":1,"exponent":2},{"theta":1,"exponent":"1"}]}]}"#)
                .unwrap();
        assert_eq!(q.phases[0].modulus, 1);
        assert_eq!(q.phases[0].groups[0].exponent, exponent::int(2));
    }
}
