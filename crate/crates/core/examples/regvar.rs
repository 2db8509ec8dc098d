//! Regular-variation diagnostics of a few prices.

use ncg::analysis::regvar_diagnostics;
use ncg::exponent;
use ncg::price::PriceFunction;

fn main() {
    let prices = [
        ("x^2 ln(e+x)", PriceFunction::power_log(1.0, exponent::int(2), 1.0)),
        ("1 + x^4", PriceFunction::poly(vec![1.0, 0.0, 0.0, 0.0, 1.0])),
        (
            "x^1.5",
            PriceFunction::power_log(1.0, exponent::parse("3/2").unwrap(), 0.0),
        ),
    ];
    for (name, p) in prices {
        let r = regvar_diagnostics(&p);
        println!("{name}");
        println!("  symbolic index      {:?}", r.index);
        println!("  index at 1e6        {:.4}", r.index_at_point);
        println!("  index estimate      {:.4}", r.index_estimate);
        println!("  x tau'/tau samples  {:?}", r.karamata_ratios);
        println!("  x tau'/tau estimate {:.4}", r.karamata_ratio_estimate);
    }
}
