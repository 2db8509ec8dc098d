//! Limit games of the double-limits game along the alternating path: one
//! per phase, each with its own scaling.

use ncg::analysis::{find_limit_game, price_of_anarchy};
use ncg::equilibrium::SolverConfig;
use ncg::exponent;
use ncg::harness::{alternating_path, double_limits};

fn main() {
    let game = double_limits();
    let path = alternating_path();
    for phase in 0..path.phases.len() {
        let Some(limit) = find_limit_game(&game, &path, phase).unwrap() else {
            println!("phase {phase}: no limit game");
            continue;
        };
        println!("phase {phase}: scaling T^{}", exponent::format(limit.gauge.rho));
        for (r, p) in game.resources().iter().zip(&limit.prices) {
            println!("  {:<3} {p}", r.id);
        }
        let (instance, demand) = limit.instance(&game);
        let poa = price_of_anarchy(&instance, &demand, &SolverConfig::default())
            .unwrap()
            .poa;
        println!(
            "  limit PoA {:.6} (solved instance {:.6})",
            limit.poa.unwrap_or(f64::NAN),
            poa
        );
    }
}
