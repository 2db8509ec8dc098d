use std::fs;
use std::path::Path;

use ncg::cli::run_with;
use ncg::game::{validate_game, Game};
use ncg::harness::{alternating_path, geometric_grid, pigou, power_law_path, scale_poa, ScaleConfig};

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn ncg(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ncg").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn poa_of_pigou() {
    let o = ncg(&["poa", "builtin:pigou(1)", "--demand", "1:1"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.starts_with("poa 1.33333"), "{}", o.out);
    assert!(o.out.contains("C_so 0.75"));

    let o = ncg(&["poa", "builtin:pigou(1)", "--demand", "od:1", "--json"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert!((v["poa"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-6);
}

#[test]
fn solve_reports_flows() {
    let o = ncg(&["solve", "builtin:pigou(1)", "--demand", "1:1", "--mode", "so"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.contains("0.5"), "{}", o.out);
    let fw = ncg(&[
        "solve",
        "builtin:pigou(1)",
        "--demand",
        "1:2",
        "--method",
        "frank-wolfe",
        "--tol",
        "1e-6",
    ]);
    assert_eq!(fw.code, 0, "{}", fw.err);
}

#[test]
fn validate_reports_free_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("free.json");
    let mut b = Game::builder();
    let x = b.resource("x", ncg::price::PriceFunction::monomial(1.0, 1));
    let g = b.group("od");
    b.strategy(g, "paid", &[(x, 1.0)]);
    b.strategy(g, "free", &[]);
    fs::write(&file, b.build().to_json()).unwrap();

    let o = ncg(&["validate", s(&file)]);
    assert_eq!(o.code, 1);
    assert!(o.out.contains("free strategy"), "{}", o.out);

    let ok = ncg(&["validate", "builtin:double_limits"]);
    assert_eq!(ok.code, 0);
    assert!(
        ok.out.starts_with("valid: 2 groups, 4 strategies, 4 resources"),
        "{}",
        ok.out
    );
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["poa", "builtin:pigou(1)", "--demand", "x"][..],
        &["poa", "builtin:pigou(1)", "--demand", "3:1"],
        &["poa", "builtin:pigou(1)", "--demand", "1:-1"],
        &["poa", "builtin:nope", "--demand", "1:1"],
        &["frobnicate"],
        &["poa"],
        &["generate"],
    ] {
        let o = ncg(args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.out);
        assert!(!o.err.is_empty());
    }
}

#[test]
fn missing_file_exits_one() {
    let o = ncg(&["validate", "/nonexistent/game.json"]);
    assert_eq!(o.code, 1);
    assert!(o.err.contains("/nonexistent/game.json"));
}

#[test]
fn help_for_every_subcommand() {
    let top = ncg(&["--help"]);
    assert_eq!(top.code, 0);
    for sub in ["validate", "solve", "poa", "scale", "analyze", "ingest", "generate"] {
        assert!(top.out.contains(sub), "{sub}");
        let o = ncg(&[sub, "--help"]);
        assert_eq!(o.code, 0, "{sub}");
        assert!(o.out.contains("Usage"), "{sub}");
    }
    assert_eq!(ncg(&["--version"]).code, 0);
}

#[test]
fn analyze_double_limits() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alt.json");
    fs::write(&path, alternating_path().to_json()).unwrap();
    let o = ncg(&["analyze", "builtin:double_limits", "--path", s(&path)]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.contains("components: 2"));
    assert!(o.out.contains("resource order: u1 ~ u2 < l1 ~ l2"), "{}", o.out);
    assert!(o.out.contains("phase 0: alpha 1, groups upper,"), "{}", o.out);
    assert!(o.out.contains("phase 1: alpha 2"), "{}", o.out);

    let j = ncg(&["analyze", "builtin:double_limits", "--path", s(&path), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&j.out).unwrap();
    assert!(v["decomposition"].is_object());
}

#[test]
fn analyze_square_and_linear_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nsq_n.json");
    fs::write(&path, power_law_path(&[(1.0, 2), (1.0, 1)]).to_json()).unwrap();
    let o = ncg(&["analyze", "builtin:double_limits", "--path", s(&path)]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.contains("predicted cost exponent 4"), "{}", o.out);
    let rows: Vec<Vec<&str>> = o.out.lines().map(|l| l.split_whitespace().collect()).collect();
    assert!(rows.contains(&vec!["0", "upper", "1", "2", "2", "base"]), "{}", o.out);
    assert!(
        rows.contains(&vec!["1", "lower", "2", "1", "2", "negligible"]),
        "{}",
        o.out
    );
}

#[test]
fn scale_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let csv = dir.path().join("out.csv");
    let report = dir.path().join("report.json");
    fs::write(&path, power_law_path(&[(1.0, 1)]).to_json()).unwrap();
    let o = ncg(&[
        "scale",
        "builtin:pigou(1)",
        "--path",
        s(&path),
        "--grid",
        "1:64:geometric",
        "-o",
        s(&csv),
        "--report",
        s(&report),
        "--threads",
        "2",
    ]);
    assert_eq!(o.code, 0, "{}", o.err);
    let lib = scale_poa(
        &pigou(1.0),
        &power_law_path(&[(1.0, 1)]),
        &geometric_grid(1, 64, 2.0),
        &ScaleConfig::default(),
    )
    .unwrap();
    assert_eq!(fs::read_to_string(&csv).unwrap(), lib.to_csv());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 7);

    let stdout = ncg(&[
        "scale",
        "builtin:pigou(1)",
        "--path",
        s(&path),
        "--grid",
        "1:64:geometric",
    ]);
    assert_eq!(stdout.out, lib.to_csv());

    let bad = ncg(&["scale", "builtin:pigou(1)", "--path", s(&path), "--grid", "1:64:cubic"]);
    assert_eq!(bad.code, 2);
}

const TOY_NET: &str =
    "<NUMBER OF ZONES> 2\n<NUMBER OF NODES> 3\n<FIRST THRU NODE> 1\n<NUMBER OF LINKS> 3\n<END OF METADATA>\n\
1 2 10 1 1 0.15 4 ;\n1 3 10 1 1 0.15 4 ;\n3 2 10 1 1 0.15 4 ;\n";
const TOY_TRIPS: &str = "<NUMBER OF ZONES> 2\n<TOTAL OD FLOW> 7\n<END OF METADATA>\nOrigin 1\n 2 : 7 ;\n";

#[test]
fn ingest_writes_game_and_demand() {
    let dir = tempfile::tempdir().unwrap();
    let (net, trips, game, demand) = (
        dir.path().join("net.tntp"),
        dir.path().join("trips.tntp"),
        dir.path().join("game.json"),
        dir.path().join("demand.json"),
    );
    fs::write(&net, TOY_NET).unwrap();
    fs::write(&trips, TOY_TRIPS).unwrap();
    let o = ncg(&[
        "ingest",
        "--net",
        s(&net),
        "--trips",
        s(&trips),
        "--k",
        "2",
        "-o",
        s(&game),
        "--demand-output",
        s(&demand),
    ]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(
        o.out.trim(),
        "3 nodes, 3 links, 1 OD pairs, 2 strategies, total demand 7"
    );
    let g = Game::from_json(&fs::read_to_string(&game).unwrap()).unwrap();
    assert!(validate_game(&g).is_valid());
    assert_eq!(g.num_strategies(), 2);
    assert!(fs::read_to_string(&demand).unwrap().contains('7'));

    let p = ncg(&["poa", s(&game), "--demand", "1:7"]);
    assert_eq!(p.code, 0, "{}", p.err);

    let zero = ncg(&[
        "ingest",
        "--net",
        s(&net),
        "--trips",
        s(&trips),
        "--k",
        "0",
        "-o",
        s(&game),
    ]);
    assert_eq!(zero.code, 2);
    fs::write(&net, TOY_NET.replace("<NUMBER OF LINKS> 3", "<NUMBER OF LINKS> 4")).unwrap();
    let bad = ncg(&["ingest", "--net", s(&net), "--trips", s(&trips), "-o", s(&game)]);
    assert_eq!(bad.code, 1);
    assert!(bad.err.contains("count mismatch"), "{}", bad.err);
}

#[test]
fn generate_games() {
    let a = ncg(&["generate", "--seed", "5"]);
    let b = ncg(&["generate", "--seed", "5"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.out, b.out);
    assert!(validate_game(&Game::from_json(&a.out).unwrap()).is_valid());

    let p = ncg(&["generate", "--builtin", "pigou(4)"]);
    assert_eq!(Game::from_json(&p.out).unwrap(), pigou(4.0));
    assert_eq!(ncg(&["generate", "--builtin", "nope"]).code, 2);
    assert_eq!(ncg(&["generate", "--builtin", "double_limits", "--seed", "1"]).code, 2);
}
