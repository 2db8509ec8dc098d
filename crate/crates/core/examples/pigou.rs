//! Price of anarchy of the Pigou network against its closed form.

use ncg::analysis::{pigou_poa_closed_form, pigou_poa_printed, price_of_anarchy};
use ncg::equilibrium::SolverConfig;
use ncg::game::Demand;
use ncg::harness::pigou;

fn main() {
    let config = SolverConfig::default();
    println!(
        "{:>5} {:>8} {:>12} {:>12} {:>12} {:>6}",
        "beta", "T", "solver", "closed form", "literal", "iters"
    );
    for beta in [1.0, 2.0, 4.0] {
        let game = pigou(beta);
        for t in [1.0, 4.0, 16.0, 256.0, 4096.0] {
            let r = price_of_anarchy(&game, &Demand::new(vec![t]).unwrap(), &config).unwrap();
            println!(
                "{:>5} {:>8} {:>12.8} {:>12.8} {:>12.8} {:>6}",
                beta,
                t,
                r.poa,
                pigou_poa_closed_form(beta, t).unwrap(),
                pigou_poa_printed(beta, t).unwrap(),
                r.so.iterations
            );
        }
    }
}
