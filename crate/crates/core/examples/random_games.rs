//! Seeded random games: same seed, same game. Prints the PoA of each at a
//! few demand scales.

use ncg::analysis::price_of_anarchy;
use ncg::equilibrium::SolverConfig;
use ncg::game::validate_game;
use ncg::harness::{random_game, random_path, RandomSizes};

fn main() {
    let sizes = RandomSizes::default();
    assert_eq!(random_game(7, sizes, 4).to_json(), random_game(7, sizes, 4).to_json());
    for seed in 0..5 {
        let game = random_game(seed, sizes, 4);
        let path = random_path(seed, game.num_groups(), 2);
        print!(
            "seed {seed}: {} groups, {} strategies, valid {}:",
            game.num_groups(),
            game.num_strategies(),
            validate_game(&game).is_valid()
        );
        for n in [1, 10, 100] {
            let poa = price_of_anarchy(&game, &path.demand(n).unwrap(), &SolverConfig::default())
                .unwrap()
                .poa;
            print!(" {poa:.6}");
        }
        println!();
    }
}
