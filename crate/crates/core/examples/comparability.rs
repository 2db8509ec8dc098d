use ncg::analysis::{comparability_order, degrees};
use ncg::exponent;
use ncg::harness::all_degree_equal;

fn main() {
    let game = all_degree_equal();
    let d = degrees(&game);
    for (g, deg) in game.groups().iter().zip(&d.group) {
        println!("group {} degree {}", g.id, deg.map_or("-".into(), exponent::format));
    }
    let order = comparability_order(&game);
    for (i, class) in order.classes.iter().enumerate() {
        let ids: Vec<&str> = class.iter().map(|&a| game.resources()[a].id.as_str()).collect();
        println!("class {i}: {}", ids.join(" "));
    }
    println!("{}", serde_json::to_string_pretty(&order).unwrap());
}
