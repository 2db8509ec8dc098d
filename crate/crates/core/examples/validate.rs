use ncg::game::{validate_game, Game};
use ncg::price::PriceFunction;

// A strategy with no resources is free, which the model rules out.
fn main() {
    let mut b = Game::builder();
    let x = b.resource("x", PriceFunction::monomial(1.0, 1));
    let g = b.group("od");
    b.strategy(g, "road", &[(x, 1.0)]);
    b.strategy(g, "teleport", &[]);
    let report = validate_game(&b.build());
    println!("valid: {}", report.is_valid());
    println!("{report}");
}
