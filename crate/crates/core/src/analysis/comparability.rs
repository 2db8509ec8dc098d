use serde::{Deserialize, Serialize};

use crate::game::Game;
use crate::price::Growth;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityReport {
    /// Equivalence classes of resources (finite non-zero limit ratios), slowest growth first.
    pub classes: Vec<Vec<usize>>,
    /// Per group, the strategy whose fastest-growing resource grows slowest; lowest index on ties.
    pub cheapest: Vec<Option<usize>>,
}

/// Orders resources by `a <= b` iff `lim tau_a / tau_b < inf`.
///
/// Within the supported families every pair is comparable, so the result is
/// always a total preorder.
pub fn comparability_order(game: &Game) -> ComparabilityReport {
    let mut order: Vec<(Growth, usize)> = game
        .resources()
        .iter()
        .enumerate()
        .map(|(a, r)| (r.price.growth(), a))
        .collect();
    order.sort();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<Growth> = None;
    for (g, a) in order {
        if last == Some(g) {
            classes.last_mut().expect("class opened").push(a);
        } else {
            classes.push(vec![a]);
            last = Some(g);
        }
    }
    let cheapest = game
        .groups()
        .iter()
        .map(|g| {
            g.strategies
                .iter()
                .map(|&s| {
                    let worst = game.strategies()[s]
                        .uses
                        .iter()
                        .map(|u| game.price(u.resource).growth())
                        .max()
                        .unwrap_or(Growth::Zero);
                    (worst, s)
                })
                .min()
                .map(|(_, s)| s)
        })
        .collect();
    ComparabilityReport { classes, cheapest }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent;
    use crate::price::PriceFunction;

    #[test]
    fn orders_by_growth() {
        let mut b = Game::builder();
        let cube = b.resource("cube", PriceFunction::monomial(1.0, 3));
        let sq = b.resource("sq", PriceFunction::monomial(1.0, 2));
        let sqlog = b.resource("sqlog", PriceFunction::power_log(1.0, exponent::int(2), 1.0));
        let g = b.group("g");
        b.strategy(g, "a", &[(cube, 1.0)]);
        b.strategy(g, "b", &[(sqlog, 1.0), (sq, 1.0)]);
        let r = comparability_order(&b.build());
        assert_eq!(r.classes, vec![vec![sq], vec![sqlog], vec![cube]]);
        assert_eq!(r.cheapest, vec![Some(1)]);
    }
}
