use serde::{Serialize, Serializer};

use crate::exponent::{self, Exponent};
use crate::game::Game;

/// Exact degrees. `None` marks the zero polynomial, and strategies or groups
/// built only from it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Degrees {
    #[serde(serialize_with = "opt_vec")]
    pub resource: Vec<Option<Exponent>>,
    /// `rho_s = max { rho_a : r(a, s) > 0 }`.
    #[serde(serialize_with = "opt_vec")]
    pub strategy: Vec<Option<Exponent>>,
    /// `rho_k = min { rho_s : s in S_k }`.
    #[serde(serialize_with = "opt_vec")]
    pub group: Vec<Option<Exponent>>,
}

fn opt_vec<S: Serializer>(v: &[Option<Exponent>], s: S) -> Result<S::Ok, S::Error> {
    let strings: Vec<Option<String>> = v.iter().map(|e| e.map(exponent::format)).collect();
    strings.serialize(s)
}

pub fn degrees(game: &Game) -> Degrees {
    let resource: Vec<Option<Exponent>> = game.resources().iter().map(|r| r.price.index()).collect();
    let strategy: Vec<Option<Exponent>> = game
        .strategies()
        .iter()
        .map(|s| s.uses.iter().filter_map(|u| resource[u.resource]).max())
        .collect();
    let group = game
        .groups()
        .iter()
        .map(|g| g.strategies.iter().filter_map(|&s| strategy[s]).min())
        .collect();
    Degrees {
        resource,
        strategy,
        group,
    }
}
