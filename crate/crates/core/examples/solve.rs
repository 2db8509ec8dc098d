//! Wardrop equilibrium and system optimum of a small game, with the checks
//! that certify each.

use ncg::equilibrium::{check_epsilon_ne_of_so, check_wardrop, solve_so, solve_wardrop, SolverConfig};
use ncg::game::{average_cost, Demand};
use ncg::harness::double_limits;

fn main() {
    let game = double_limits();
    let demand = Demand::new(vec![2.0, 3.0]).unwrap();
    let config = SolverConfig::default();

    let ne = solve_wardrop(&game, &demand, &config).unwrap();
    let so = solve_so(&game, &demand, &config).unwrap();
    for (name, r) in [("equilibrium", &ne), ("optimum", &so)] {
        println!("{name}: {} iterations, gap {:.2e}", r.iterations, r.gap);
        for (s, f) in game.strategies().iter().zip(r.profile.as_slice()) {
            println!("  {:<8} {:.6}", s.id, f);
        }
        println!(
            "  average cost {:.6}",
            average_cost(&game, &demand, &r.profile).unwrap()
        );
    }
    let check = check_wardrop(&game, &demand, &ne.profile, 1e-9).unwrap();
    println!("equilibrium verified: {}", check.is_equilibrium);
    println!(
        "optimum as equilibrium, epsilon {:.3e}",
        check_epsilon_ne_of_so(&game, &demand, &so.profile).unwrap()
    );
}
