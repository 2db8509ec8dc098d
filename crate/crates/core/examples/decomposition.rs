use ncg::analysis::asymptotic_decomposition;
use ncg::harness::{double_limits, power_law_path};

// Upper group grows like n^2, lower like n.
fn main() {
    let game = double_limits();
    let path = power_law_path(&[(1.0, 2), (1.0, 1)]);
    let report = asymptotic_decomposition(&game, &path).unwrap();
    print!("{}", report.render_table());
    println!("{}", report.to_json());
}
