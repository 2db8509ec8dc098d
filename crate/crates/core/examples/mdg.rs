//! Splitting a game into independent components, solving each, and merging.

use ncg::analysis::{mdg_decompose, merge_profiles};
use ncg::equilibrium::{solve_wardrop, SolverConfig};
use ncg::game::{total_cost, Demand};
use ncg::harness::mdg_pair;

fn main() {
    let game = mdg_pair();
    let demand = Demand::new(vec![3.0, 2.0]).unwrap();
    let config = SolverConfig::default();
    let components = mdg_decompose(&game);
    let profiles: Vec<_> = components
        .iter()
        .map(|c| solve_wardrop(&c.game, &c.demand(&demand), &config).unwrap().profile)
        .collect();
    for (c, p) in components.iter().zip(&profiles) {
        println!("component groups {:?}: flows {:?}", c.groups, p.as_slice());
    }
    let merged = merge_profiles(&game, &components, &profiles);
    let whole = solve_wardrop(&game, &demand, &config).unwrap().profile;
    println!("merged cost {:.9}", total_cost(&game, &merged).unwrap());
    println!("whole cost  {:.9}", total_cost(&game, &whole).unwrap());
}
