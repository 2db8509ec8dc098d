//! Gauge checks: Pigou with a constant gauge and with `x^4`, then a search
//! along a path with two phases.

use ncg::analysis::{find_gauge_for_path, gauge_check, Gauge};
use ncg::exponent;
use ncg::harness::{alternating_path, double_limits, pigou, power_law_path};

fn main() {
    let game = pigou(4.0);
    let path = power_law_path(&[(1.0, 1)]);
    for gauge in [Gauge::constant(), Gauge::power(exponent::int(4))] {
        let r = gauge_check(&game, &path, &gauge).unwrap();
        let q: Vec<String> = r.q.iter().map(|q| q.to_string()).collect();
        println!(
            "pigou(4), gauge {gauge}: q = [{}], G2 {}, G3 {}, gaugeable {}",
            q.join(", "),
            r.g2,
            r.g3,
            r.gaugeable
        );
    }

    let found = find_gauge_for_path(&double_limits(), &alternating_path()).unwrap();
    match found {
        Some(r) => println!("double limits, alternating: gauge {}", r.gauge),
        None => println!("double limits, alternating: no single gauge"),
    }
}
