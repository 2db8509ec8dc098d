//! Command-line front end. Every subcommand is a thin adapter over the library.
//!
//! Exit codes: 0 on success, 1 when validation or solving fails (or an input
//! file cannot be read), 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{
    asymptotic_decomposition, comparability_order, degrees, find_gauge, find_gauge_for_path, find_limit_game,
    mdg_decompose, price_of_anarchy, DemandPath,
};
use crate::equilibrium::{check_epsilon_ne_of_so, solve_so, solve_wardrop, Method, SolverConfig};
use crate::exponent;
use crate::game::{total_cost, validate_game, Demand, Game};
use crate::harness::{builtin, convergence_report, parse_grid, random_game, scale_poa, RandomSizes, ScaleConfig};
use crate::ingest::{enumerate_paths, parse_tntp, DEFAULT_K};

/// Environment variable giving the default worker-thread count.
pub const THREADS_ENV: &str = "NCG_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "ncg",
    version,
    about = "Equilibria, optima and price-of-anarchy asymptotics of non-atomic congestion games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a game against the modelling assumptions.
    Validate {
        /// Game JSON file, or `builtin:<name>`.
        game: String,
    },
    /// Compute a Wardrop equilibrium or a system optimum.
    Solve {
        game: String,
        #[arg(long, value_enum, default_value_t = Mode::We)]
        mode: Mode,
        /// Group volumes as `group:volume` pairs; groups by 1-based index or id.
        #[arg(long)]
        demand: String,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Price of anarchy at one demand vector.
    Poa {
        game: String,
        #[arg(long)]
        demand: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Price of anarchy along a demand path; writes CSV.
    Scale {
        game: String,
        /// Demand path JSON file.
        #[arg(long)]
        path: PathBuf,
        /// `lo:hi:geometric[:ratio]` or `lo:hi:linear[:step]`.
        #[arg(long, default_value = "1:16384:geometric")]
        grid: String,
        /// Sample every phase across the whole grid.
        #[arg(long)]
        per_phase: bool,
        /// Fill the `ms` column with wall time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
        /// CSV output file; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the run and its convergence report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads; defaults to $NCG_THREADS, then the core count.
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Degrees, components, decomposition, gauges and limit games.
    Analyze {
        game: String,
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Build a path game from TNTP network and trip files.
    Ingest {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        trips: PathBuf,
        /// Paths per OD pair.
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        /// Game JSON output file.
        #[arg(short, long)]
        output: PathBuf,
        /// Demand vector JSON output file.
        #[arg(long)]
        demand_output: Option<PathBuf>,
    },
    /// Emit a built-in or seeded random game as JSON.
    Generate {
        /// Built-in name such as `pigou(4)` or `double_limits`.
        #[arg(long, conflicts_with = "seed")]
        builtin: Option<String>,
        /// Seed of a random polynomial game.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 3)]
        groups: usize,
        #[arg(long, default_value_t = 3)]
        strategies: usize,
        #[arg(long, default_value_t = 6)]
        resources: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    We,
    So,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Pairwise,
    FrankWolfe,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Relative gap tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Pairwise)]
    method: MethodArg,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig, Failure> {
        let config = SolverConfig {
            gap_tolerance: self.tol,
            max_iterations: self.max_iter,
            method: match self.method {
                MethodArg::Pairwise => Method::PairwiseConditionalGradient,
                MethodArg::FrankWolfe => Method::ConditionalGradient,
            },
            ..SolverConfig::default()
        };
        config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(config)
    }
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Failed(e.to_string())
    }
}

/// Runs the CLI with process stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams; `argv[0]` is the program name.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { game } => {
            let game = game_arg(&game)?;
            let report = validate_game(&game);
            if report.is_valid() {
                writeln!(
                    out,
                    "valid: {} groups, {} strategies, {} resources",
                    game.num_groups(),
                    game.num_strategies(),
                    game.num_resources()
                )?;
                Ok(0)
            } else {
                writeln!(out, "invalid:")?;
                for v in &report.violations {
                    writeln!(out, "  {v}")?;
                }
                Ok(1)
            }
        }
        Command::Solve {
            game,
            mode,
            demand,
            solver,
        } => {
            let game = game_arg(&game)?;
            let demand = parse_demand(&game, &demand).map_err(Failure::Usage)?;
            let config = solver.config()?;
            let result = match mode {
                Mode::We => solve_wardrop(&game, &demand, &config)?,
                Mode::So => solve_so(&game, &demand, &config)?,
            };
            let flows: serde_json::Map<String, serde_json::Value> = game
                .strategies()
                .iter()
                .zip(result.profile.as_slice())
                .map(|(s, f)| (s.id.clone(), json!(f)))
                .collect();
            let total = total_cost(&game, &result.profile)?;
            let doc = json!({
                "mode": match mode { Mode::We => "we", Mode::So => "so" },
                "converged": result.converged,
                "iterations": result.iterations,
                "gap": result.gap,
                "objective": result.objective,
                "total_cost": total,
                "average_cost": if demand.total() > 0.0 { json!(total / demand.total()) } else { json!(null) },
                "flows": flows,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
            Ok(if result.converged { 0 } else { 1 })
        }
        Command::Poa {
            game,
            demand,
            json: as_json,
            solver,
        } => {
            let game = game_arg(&game)?;
            let demand = parse_demand(&game, &demand).map_err(Failure::Usage)?;
            let config = solver.config()?;
            let r = price_of_anarchy(&game, &demand, &config)?;
            let eps = check_epsilon_ne_of_so(&game, &demand, &r.so.profile)?;
            if as_json {
                let doc = json!({
                    "poa": r.poa, "C_ne": r.c_ne, "C_so": r.c_so,
                    "gap_ne": r.ne.gap, "gap_so": r.so.gap, "eps_so": eps,
                    "converged": r.converged(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
            } else {
                writeln!(out, "poa {:.10}", r.poa)?;
                writeln!(out, "C_ne {:.10}", r.c_ne)?;
                writeln!(out, "C_so {:.10}", r.c_so)?;
                writeln!(out, "gap_ne {:.3e}", r.ne.gap)?;
                writeln!(out, "gap_so {:.3e}", r.so.gap)?;
                writeln!(out, "eps_so {:.10}", eps)?;
            }
            Ok(if r.converged() { 0 } else { 1 })
        }
        Command::Scale {
            game,
            path,
            grid,
            per_phase,
            timing,
            output,
            report,
            threads,
            solver,
        } => {
            let game = game_arg(&game)?;
            let path = load_path(&path)?;
            let grid = parse_grid(&grid).map_err(|e| Failure::Usage(e.to_string()))?;
            let config = ScaleConfig {
                solver: solver.config()?,
                timing,
                per_phase,
            };
            let threads = threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()));
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| Failure::Failed(e.to_string()))?;
            let run = pool.install(|| scale_poa(&game, &path, &grid, &config))?;
            match output {
                Some(p) => fs::write(&p, run.to_csv())?,
                None => out.write_all(run.to_csv().as_bytes())?,
            }
            if let Some(p) = report {
                let decomposition = asymptotic_decomposition(&game, &path).ok();
                let convergence = convergence_report(&run, decomposition.as_ref()).ok();
                let doc = json!({ "records": run.records, "convergence": convergence });
                fs::write(&p, serde_json::to_string_pretty(&doc)? + "\n")?;
            }
            Ok(if run.records.iter().all(|r| r.converged) { 0 } else { 1 })
        }
        Command::Analyze {
            game,
            path,
            json: as_json,
        } => {
            let game = game_arg(&game)?;
            let path = path.map(|p| load_path(&p)).transpose()?;
            let report = analyze(&game, path.as_ref())?;
            if as_json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json)?)?;
            } else {
                out.write_all(report.text.as_bytes())?;
            }
            Ok(0)
        }
        Command::Ingest {
            net,
            trips,
            k,
            output,
            demand_output,
        } => {
            if k == 0 {
                return Err(Failure::Usage("--k must be at least 1".into()));
            }
            let (network, table) = parse_tntp(&read(&net)?, &read(&trips)?)?;
            let pg = enumerate_paths(&network, &table, k)?;
            let report = validate_game(&pg.game);
            if !report.is_valid() {
                return Err(Failure::Failed(format!("enumerated game is invalid:\n{report}")));
            }
            fs::write(&output, pg.game.to_json() + "\n")?;
            if let Some(p) = demand_output {
                fs::write(&p, serde_json::to_string_pretty(&pg.demand)? + "\n")?;
            }
            writeln!(
                out,
                "{} nodes, {} links, {} OD pairs, {} strategies, total demand {}",
                network.nodes,
                network.links.len(),
                pg.game.num_groups(),
                pg.game.num_strategies(),
                pg.demand.total()
            )?;
            Ok(0)
        }
        Command::Generate {
            builtin: name,
            seed,
            groups,
            strategies,
            resources,
            max_degree,
        } => {
            let game = match (name, seed) {
                (Some(n), _) => builtin(&n).ok_or_else(|| Failure::Usage(format!("unknown built-in `{n}`")))?,
                (None, Some(seed)) => random_game(
                    seed,
                    RandomSizes {
                        groups,
                        max_strategies_per_group: strategies,
                        resources,
                        ..RandomSizes::default()
                    },
                    max_degree,
                ),
                (None, None) => return Err(Failure::Usage("give --builtin or --seed".into())),
            };
            writeln!(out, "{}", game.to_json())?;
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

/// A game JSON file, or `builtin:<name>`.
pub fn load_game(spec: &str) -> Result<Game, String> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin(name).ok_or_else(|| format!("unknown built-in `{name}`"));
    }
    let text = fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
    Game::from_json(&text).map_err(|e| format!("{spec}: {e}"))
}

fn load_path(path: &Path) -> Result<DemandPath, Failure> {
    DemandPath::from_json(&read(path)?).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

fn game_arg(spec: &str) -> Result<Game, Failure> {
    // A bad built-in name is a usage error; a bad file is a runtime one.
    let usage = spec.starts_with("builtin:");
    load_game(spec).map_err(|e| if usage { Failure::Usage(e) } else { Failure::Failed(e) })
}

/// Parses `group:volume,...`; groups by 1-based index or id, unlisted groups get 0.
pub fn parse_demand(game: &Game, spec: &str) -> Result<Demand, String> {
    let mut volumes = vec![0.0; game.num_groups()];
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (g, v) = item
            .rsplit_once(':')
            .ok_or_else(|| format!("bad demand entry `{item}`, expected group:volume"))?;
        let k = match g.trim().parse::<usize>() {
            Ok(i) if i >= 1 && i <= game.num_groups() => i - 1,
            Ok(i) => return Err(format!("group index {i} out of range 1..={}", game.num_groups())),
            Err(_) => game
                .group_index(g.trim())
                .ok_or_else(|| format!("unknown group `{g}`"))?,
        };
        let v: f64 = v.trim().parse().map_err(|_| format!("bad volume `{v}`"))?;
        volumes[k] = v;
    }
    Demand::new(volumes).map_err(|e| e.to_string())
}

struct Analysis {
    text: String,
    json: serde_json::Value,
}

fn analyze(game: &Game, path: Option<&DemandPath>) -> Result<Analysis, Failure> {
    let mut text = String::new();
    let deg = degrees(game);
    let fmt = |e: Option<exponent::Exponent>| e.map_or_else(|| "-".to_string(), exponent::format);
    writeln!(text, "degrees")?;
    for (k, g) in game.groups().iter().enumerate() {
        writeln!(text, "  group {}: {}", g.id, fmt(deg.group[k]))?;
    }

    let components = mdg_decompose(game);
    writeln!(text, "components: {}", components.len())?;
    for (i, c) in components.iter().enumerate() {
        let ids: Vec<&str> = c.groups.iter().map(|&k| game.groups()[k].id.as_str()).collect();
        writeln!(text, "  {i}: {}", ids.join(","))?;
    }

    let order = comparability_order(game);
    let classes: Vec<String> = order
        .classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|&a| game.resources()[a].id.as_str())
                .collect::<Vec<_>>()
                .join(" ~ ")
        })
        .collect();
    writeln!(text, "resource order: {}", classes.join(" < "))?;

    let all: Vec<usize> = (0..game.num_groups()).collect();
    let subset_gauge = find_gauge(game, &all);
    writeln!(
        text,
        "gauge for all groups: {}",
        subset_gauge.map_or("none".to_string(), |g| g.to_string())
    )?;

    let mut json = json!({
        "degrees": deg,
        "components": components.iter().map(|c| &c.groups).collect::<Vec<_>>(),
        "comparability": order,
        "gauge_all_groups": subset_gauge,
    });

    if let Some(path) = path {
        path.validate(game.num_groups())
            .map_err(|e| Failure::Failed(e.to_string()))?;
        match asymptotic_decomposition(game, path) {
            Ok(d) => {
                writeln!(text, "decomposition")?;
                for line in d.render_table().lines() {
                    writeln!(text, "  {line}")?;
                }
                json["decomposition"] = serde_json::to_value(&d)?;
            }
            Err(e) => {
                writeln!(text, "decomposition: {e}")?;
                json["decomposition"] = json!(null);
            }
        }
        let path_gauge = find_gauge_for_path(game, path)?;
        writeln!(
            text,
            "gauge along path: {}",
            path_gauge.as_ref().map_or("none".to_string(), |r| r.gauge.to_string())
        )?;
        json["gauge_path"] = serde_json::to_value(&path_gauge)?;

        let mut limits = Vec::new();
        writeln!(text, "limit games")?;
        for phase in 0..path.phases.len() {
            let limit = find_limit_game(game, path, phase)?;
            match &limit {
                Some(l) => {
                    let surviving: Vec<&str> = l
                        .surviving_groups
                        .iter()
                        .map(|&k| game.groups()[k].id.as_str())
                        .collect();
                    writeln!(
                        text,
                        "  phase {phase}: alpha {}, groups {}, limit poa {}",
                        exponent::format(l.gauge.rho),
                        surviving.join(","),
                        l.poa.map_or("-".to_string(), |p| format!("{p:.6}"))
                    )?;
                }
                None => writeln!(text, "  phase {phase}: none")?,
            }
            limits.push(limit);
        }
        json["limit_games"] = serde_json::to_value(&limits)?;
    }
    Ok(Analysis { text, json })
}
