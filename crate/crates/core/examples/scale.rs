//! Price of anarchy along a demand path, written as CSV, then summarized.

use ncg::analysis::asymptotic_decomposition;
use ncg::harness::{convergence_report, parse_grid, pigou, power_law_path, scale_poa, ScaleConfig};

fn main() {
    let game = pigou(1.0);
    let path = power_law_path(&[(1.0, 1)]);
    let grid = parse_grid("1:16384:geometric").unwrap();
    let run = scale_poa(&game, &path, &grid, &ScaleConfig::default()).unwrap();
    print!("{}", run.to_csv());

    let decomposition = asymptotic_decomposition(&game, &path).ok();
    let report = convergence_report(&run, decomposition.as_ref()).unwrap();
    for p in &report.phases {
        let gamma = p.gamma.as_ref().map_or(f64::NAN, |g| g.slope);
        println!(
            "phase {}: {:?}, PoA - 1 = {:.3e}, decay exponent {:.3}, cost growth {:.3} (predicted {:?})",
            p.phase,
            p.verdict,
            p.last_excess,
            gamma,
            p.measured_growth.unwrap_or(f64::NAN),
            p.predicted_growth
        );
    }
}
