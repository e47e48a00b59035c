use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use convex_cover::generators::{gen_ccheese, gen_cheese, gen_maze, CheeseParams, MazeParams};
use convex_cover::geom::Rational;
use convex_cover::harness::{leaderboard_from_dirs, read_instance_dir, render_svg};
use convex_cover::instance::{
    parse_instance, parse_solution, serialize_instance, serialize_solution, verify_solution, Failure, Instance,
    Solution,
};
use convex_cover::solvers::{solve_cliquecover, solve_greedy_restarts, solve_setcover, CollectionKind, SetCoverConfig};
use convex_cover::triangulate::SteinerPolicy;

#[derive(Parser)]
#[command(name = "cover", version, about = "Convex covers of polygons with holes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Compute a cover of an instance.
    Solve(SolveArgs),
    /// Check a cover; prints `VALID k=<n>` or the first failure.
    Verify {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(short, long)]
        solution: PathBuf,
    },
    /// Score team submissions: one subdirectory of solutions per team.
    Score {
        #[arg(long)]
        instances: PathBuf,
        #[arg(long)]
        solutions: PathBuf,
        /// Also write the machine-readable table here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw an instance and optionally a cover as SVG.
    Render {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(short, long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        allow_invalid: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run solvers over every instance of a directory.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cheese,
    Ccheese,
    Maze,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Holes to place (cheese kinds).
    #[arg(long, default_value_t = 20)]
    holes: usize,
    #[arg(long, default_value_t = 1000)]
    width: i64,
    #[arg(long, default_value_t = 1000)]
    height: i64,
    #[arg(long, default_value_t = 3)]
    min_hole_vertices: usize,
    #[arg(long, default_value_t = 6)]
    max_hole_vertices: usize,
    #[arg(long, default_value_t = 10)]
    hole_radius: i64,
    /// Obstacle grid (maze).
    #[arg(long, default_value_t = 8)]
    cols: usize,
    #[arg(long, default_value_t = 8)]
    rows: usize,
    #[arg(long, default_value_t = 10)]
    cell_size: i64,
    #[arg(long, default_value = "1/10")]
    removal: Rational,
    #[arg(long, default_value = "1/2")]
    perturbation: Rational,
    #[arg(long, default_value_t = 4)]
    magnitude: i64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Greedy,
    Cliquecover,
    Setcover,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Greedy => "greedy",
            Algo::Cliquecover => "cliquecover",
            Algo::Setcover => "setcover",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Steiner {
    None,
    Ext,
    Extx,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gen {
    Cliques,
    Bloat,
    Both,
}

#[derive(Args, Clone)]
struct SolverOpts {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Greedy restarts.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, value_enum, default_value_t = Steiner::None)]
    steiner: Steiner,
    /// Set cover collection.
    #[arg(long = "gen", value_enum, default_value_t = Gen::Both)]
    generator: Gen,
    /// Clique pieces in the collection (default: three per triangle).
    #[arg(long)]
    cap: Option<usize>,
    /// Bloat runs (default: one per triangle).
    #[arg(long)]
    bloat: Option<usize>,
    /// Annealing steps (default: fifty per collection piece).
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    chains: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(short, long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    opts: SolverOpts,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    instances: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Greedy, Algo::Cliquecover, Algo::Setcover])]
    algos: Vec<Algo>,
    #[command(flatten)]
    opts: SolverOpts,
    /// Write the rows as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

enum Error {
    /// Bad arguments or input files; exit code 1.
    Input(String),
    /// Exit code 2.
    Internal(String),
}

type Res<T> = Result<T, Error>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Internal(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Res<Instance> {
    let parsed = parse_instance(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(parsed.value)
}

fn load_solution(path: &Path) -> Res<Solution> {
    let parsed = parse_solution(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(parsed.value)
}

fn generate(a: &GenerateArgs) -> Res<()> {
    let inst = match a.kind {
        Kind::Cheese | Kind::Ccheese => {
            let p = CheeseParams {
                target_holes: a.holes,
                field_width: a.width,
                field_height: a.height,
                hole_vertices: (a.min_hole_vertices, a.max_hole_vertices),
                hole_radius: a.hole_radius,
                seed: a.seed,
            };
            if matches!(a.kind, Kind::Cheese) {
                gen_cheese(&p)
            } else {
                gen_ccheese(&p)
            }
        }
        Kind::Maze => gen_maze(&MazeParams {
            grid_cols: a.cols,
            grid_rows: a.rows,
            cell_size: a.cell_size,
            removal_fraction: a.removal.clone(),
            perturbation_fraction: a.perturbation.clone(),
            perturbation_magnitude: a.magnitude,
            seed: a.seed,
        }),
    }
    .map_err(|e| Error::Input(e.to_string()))?;
    write_out(a.output.as_deref(), &serialize_instance(&inst))
}

fn run_solver(inst: &Instance, algo: Algo, o: &SolverOpts) -> Solution {
    let policy = match o.steiner {
        Steiner::None => SteinerPolicy::None,
        Steiner::Ext => SteinerPolicy::EdgeExtensions,
        Steiner::Extx => SteinerPolicy::ExtensionIntersections,
    };
    match algo {
        Algo::Greedy => solve_greedy_restarts(inst, o.seed, o.restarts),
        Algo::Cliquecover => solve_cliquecover(inst, policy, o.seed),
        Algo::Setcover => {
            let mut cfg = SetCoverConfig::new(o.seed);
            cfg.generator = match o.generator {
                Gen::Cliques => CollectionKind::Cliques,
                Gen::Bloat => CollectionKind::Bloat,
                Gen::Both => CollectionKind::Both,
            };
            cfg.policy = policy;
            cfg.cap = o.cap;
            cfg.bloat_count = o.bloat;
            cfg.steps = o.steps;
            cfg.chains = o.chains;
            solve_setcover(inst, &cfg)
        }
    }
}

fn solve(a: &SolveArgs) -> Res<()> {
    let inst = load_instance(&a.instance)?;
    let sol = run_solver(&inst, a.algo, &a.opts);
    let report = verify_solution(&inst, &sol).map_err(|e| Error::Internal(e.to_string()))?;
    if !report.is_valid() {
        return Err(Error::Internal(format!("{} produced an invalid cover", a.algo.name())));
    }
    log::info!("{}: {} pieces", inst.name, sol.len());
    write_out(a.output.as_deref(), &serialize_solution(&sol))
}

/// `Ok(true)` when valid.
fn verify(instance: &Path, solution: &Path) -> Res<bool> {
    let inst = load_instance(instance)?;
    let sol = load_solution(solution)?;
    let report = verify_solution(&inst, &sol).map_err(|e| Error::Input(e.to_string()))?;
    if report.is_valid() {
        println!("VALID k={}", report.piece_count);
        return Ok(true);
    }
    let line = match report.first_uncovered() {
        Some(w) => format!("uncovered at {w}"),
        None => match &report.failures[0] {
            Failure::NonConvex { piece, vertex } => format!("piece {piece} is not convex at {vertex}"),
            Failure::NotContained { piece, witness } => format!("piece {piece} leaves the region at {witness}"),
            Failure::Uncovered { witness } => format!("uncovered at {witness}"),
        },
    };
    println!("INVALID {line}");
    Ok(false)
}

fn score(instances: &Path, solutions: &Path, json: Option<&Path>) -> Res<()> {
    let table = leaderboard_from_dirs(instances, solutions).map_err(|e| Error::Input(e.to_string()))?;
    print!("{}", table.to_text());
    if let Some(p) = json {
        let doc = serde_json::to_string_pretty(&table.to_json()).map_err(|e| Error::Internal(e.to_string()))?;
        write_out(Some(p), &(doc + "\n"))?;
    }
    Ok(())
}

fn render(instance: &Path, solution: Option<&Path>, allow_invalid: bool, output: Option<&Path>) -> Res<()> {
    let inst = load_instance(instance)?;
    let sol = solution.map(load_solution).transpose()?;
    if let Some(s) = &sol {
        let ok = verify_solution(&inst, s).map_err(|e| Error::Input(e.to_string()))?.is_valid();
        if !ok && !allow_invalid {
            return Err(Error::Input("solution is not a valid cover (pass --allow-invalid to draw it anyway)".into()));
        }
    }
    write_out(output, &render_svg(&inst, sol.as_ref()))
}

struct Row {
    instance: String,
    vertices: usize,
    solver: &'static str,
    pieces: usize,
    valid: bool,
    millis: u128,
}

fn bench(a: &BenchArgs) -> Res<()> {
    let insts = read_instance_dir(&a.instances).map_err(|e| Error::Input(e.to_string()))?;
    let jobs: Vec<(&Instance, Algo)> = insts.iter().flat_map(|i| a.algos.iter().map(move |&s| (i, s))).collect();
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(inst, algo)| {
            let t = Instant::now();
            let sol = run_solver(inst, algo, &a.opts);
            let millis = t.elapsed().as_millis();
            let valid = verify_solution(inst, &sol).is_ok_and(|r| r.is_valid());
            Row {
                instance: inst.name.clone(),
                vertices: inst.vertex_count(),
                solver: algo.name(),
                pieces: sol.len(),
                valid,
                millis,
            }
        })
        .collect();
    let w = rows.iter().map(|r| r.instance.len()).max().unwrap_or(8).max(8);
    println!("{:<w$} {:>8} {:<11} {:>7} {:>5} {:>9}", "instance", "vertices", "solver", "pieces", "valid", "ms");
    for r in &rows {
        println!(
            "{:<w$} {:>8} {:<11} {:>7} {:>5} {:>9}",
            r.instance, r.vertices, r.solver, r.pieces, r.valid, r.millis
        );
    }
    if let Some(p) = &a.json {
        let doc: Vec<serde_json::Value> = rows
            .iter()
            .map(|r| {
                serde_json::json!({"instance": r.instance, "vertices": r.vertices, "solver": r.solver,
                    "pieces": r.pieces, "valid": r.valid, "ms": r.millis as u64})
            })
            .collect();
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Internal(e.to_string()))?;
        write_out(Some(p), &(text + "\n"))?;
    }
    if rows.iter().all(|r| r.valid) {
        Ok(())
    } else {
        Err(Error::Internal("some solver produced an invalid cover".into()))
    }
}

fn run(cli: Cli) -> Res<bool> {
    match &cli.cmd {
        Cmd::Generate(a) => generate(a).map(|_| true),
        Cmd::Solve(a) => solve(a).map(|_| true),
        Cmd::Verify { instance, solution } => verify(instance, solution),
        Cmd::Score { instances, solutions, json } => score(instances, solutions, json.as_deref()).map(|_| true),
        Cmd::Render { instance, solution, allow_invalid, output } => {
            render(instance, solution.as_deref(), *allow_invalid, output.as_deref()).map(|_| true)
        }
        Cmd::Bench(a) => bench(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Ok(v) = std::env::var("COVER_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            _ => {
                eprintln!("error: COVER_THREADS must be a positive integer");
                return ExitCode::from(1);
            }
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Error::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
