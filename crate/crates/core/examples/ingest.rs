//! Sioux Falls from TNTP files to a path game and its equilibrium.
//!
//! Usage: `cargo run --release --example ingest [net.tntp trips.tntp [k]]`.

use std::time::Instant;

use ncg::equilibrium::{solve_wardrop, SolverConfig};
use ncg::game::validate_game;
use ncg::ingest::{enumerate_paths, parse_tntp};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let net = args.first().cloned().unwrap_or(format!("{dir}/SiouxFalls_net.tntp"));
    let trips = args.get(1).cloned().unwrap_or(format!("{dir}/SiouxFalls_trips.tntp"));
    let k: usize = args.get(2).map_or(4, |s| s.parse().expect("k is a number"));

    let (network, table) = parse_tntp(
        &std::fs::read_to_string(net).unwrap(),
        &std::fs::read_to_string(trips).unwrap(),
    )
    .unwrap();
    println!(
        "{} nodes, {} links, {} OD pairs",
        network.nodes,
        network.links.len(),
        table.positive_pairs().len()
    );

    let start = Instant::now();
    let pg = enumerate_paths(&network, &table, k).unwrap();
    println!(
        "{} strategies in {:.2?}; valid: {}",
        pg.game.num_strategies(),
        start.elapsed(),
        validate_game(&pg.game).is_valid()
    );

    let start = Instant::now();
    let config = SolverConfig {
        gap_tolerance: 1e-6,
        ..SolverConfig::default()
    };
    let r = solve_wardrop(&pg.game, &pg.demand, &config).unwrap();
    println!(
        "equilibrium: gap {:.2e} after {} iterations in {:.2?}",
        r.gap,
        r.iterations,
        start.elapsed()
    );
}
