use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use sigcube::bench::{run_bench, BenchConfig};
use sigcube::cube::cuboid_file_path;
use sigcube::graph::LoadReport;
use sigcube::{
    build_inverted_index, compute_cube, generate_synthetic, load_graph, significance_table,
    write_cube, write_graph, CubeOptions, Error, GenParams, MultidimGraph, PrunePolicy, Result,
    Strategy,
};

/// Cube materialization over attributed graphs, with cells pruned by
/// structural significance.
#[derive(Parser)]
#[command(name = "sigcube", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic graph.
    Gen(GenArgs),
    /// Write the per-value significance table.
    Ss(SsArgs),
    /// Materialize a cube directory.
    Cube(CubeArgs),
    /// Print one stored cuboid.
    Query(QueryArgs),
    /// Time both strategies on the same graph after checking they agree.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Directory holding vertices.csv and edges.csv.
    #[arg(long, conflicts_with_all = ["vertex_file", "edge_file"])]
    graph: Option<PathBuf>,
    #[arg(long, requires = "edge_file")]
    vertex_file: Option<PathBuf>,
    #[arg(long, requires = "vertex_file")]
    edge_file: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<MultidimGraph> {
        let (vf, ef) = match (&self.graph, &self.vertex_file, &self.edge_file) {
            (Some(dir), _, _) => (dir.join("vertices.csv"), dir.join("edges.csv")),
            (None, Some(v), Some(e)) => (v.clone(), e.clone()),
            _ => {
                return Err(Error::Parameter(
                    "give --graph DIR or both --vertex-file and --edge-file".into(),
                ))
            }
        };
        let (g, report) = load_graph(&vf, &ef)?;
        warn_load(&report);
        Ok(g)
    }
}

fn warn_load(r: &LoadReport) {
    if r.self_loops_dropped > 0 {
        eprintln!("note: dropped {} self-loops", r.self_loops_dropped);
    }
    if r.duplicate_edges_collapsed > 0 {
        eprintln!("note: collapsed {} duplicate edges", r.duplicate_edges_collapsed);
    }
}

#[derive(Args)]
struct PolicyArgs {
    /// none, ss-mean or support.
    #[arg(long, default_value = "ss-mean")]
    policy: String,
    /// Required by the support policy.
    #[arg(long)]
    min_support: Option<usize>,
}

impl PolicyArgs {
    fn resolve(&self) -> Result<PrunePolicy> {
        PrunePolicy::parse(&self.policy, self.min_support)
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1000)]
    vertices: usize,
    #[arg(long, default_value_t = 5000)]
    edges: usize,
    #[arg(long, default_value_t = 6)]
    dims: usize,
    #[arg(long, default_value_t = 10)]
    card: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction of vertices planted as a clique sharing a rare value.
    #[arg(long, default_value_t = 0.0)]
    hub: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SsArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CubeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long)]
    out: PathBuf,
    /// level or steps.
    #[arg(long, default_value = "steps")]
    strategy: Strategy,
    /// Defaults to the number of dimensions.
    #[arg(long)]
    max_level: Option<usize>,
    /// Store member lists. On by default below a million vertices.
    #[arg(long, conflicts_with = "no_members")]
    keep_members: bool,
    #[arg(long)]
    no_members: bool,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    cube: PathBuf,
    /// Comma-separated dimension names, any order.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Highest level to materialize; defaults to the number of dimensions.
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn io_err(p: &Path, e: io::Error) -> Error {
    Error::Io {
        context: format!("writing {}", p.display()),
        source: e,
    }
}

fn gen(a: &GenArgs) -> Result<()> {
    let params = GenParams {
        vertex_count: a.vertices,
        edge_count: a.edges,
        dim_count: a.dims,
        cardinality: a.card,
        seed: a.seed,
        hub_fraction: a.hub,
    };
    let g = generate_synthetic(&params)?;
    fs::create_dir_all(&a.out).map_err(|e| io_err(&a.out, e))?;
    write_graph(&g, &a.out.join("vertices.csv"), &a.out.join("edges.csv"))?;
    println!(
        "vertices={} edges={} dims={} card={} seed={} hub={} out={}",
        g.vertex_count(),
        g.edge_count(),
        g.dim_count(),
        a.card,
        a.seed,
        params.hub_size(),
        a.out.display()
    );
    Ok(())
}

fn ss(a: &SsArgs) -> Result<()> {
    let policy = a.policy.resolve()?;
    let g = a.graph.load()?;
    let idx = build_inverted_index(&g);
    let table = significance_table(&g, &idx).apply_policy(policy);
    emit(a.out.as_deref(), &table.to_csv(&g))
}

fn cube(a: &CubeArgs) -> Result<()> {
    let policy = a.policy.resolve()?;
    if a.max_level == Some(0) {
        return Err(Error::Parameter("max level must be at least 1".into()));
    }
    let g = a.graph.load()?;
    let started = Instant::now();
    let idx = build_inverted_index(&g);
    let table = significance_table(&g, &idx).apply_policy(policy);
    let ss_millis = started.elapsed().as_secs_f64() * 1e3;
    let opts = CubeOptions {
        strategy: a.strategy,
        max_level: a.max_level.unwrap_or(g.dim_count()),
        threads: a.threads,
    };
    let cube = compute_cube(&g, &idx, &table, &opts)?;
    let keep = a.keep_members || (!a.no_members && g.vertex_count() < 1_000_000);
    write_cube(&cube, &a.out, keep)?;

    let stats = &cube.meta().stats;
    println!("significance: {ss_millis:.1} ms");
    for level in 1..stats.nodes_per_level.len() {
        println!(
            "level {level}: {} nodes, {:.1} ms",
            stats.nodes_per_level[level], stats.level_millis[level]
        );
    }
    println!("edges: {:.1} ms", stats.edge_millis);
    println!(
        "total: {} nodes, {} combines, {:.1} ms",
        cube.node_count(),
        stats.combines_attempted,
        stats.total_millis
    );
    Ok(())
}

fn query(a: &QueryArgs) -> Result<()> {
    let path = cuboid_file_path(&a.cube, &a.dims)?;
    let text = fs::read_to_string(&path).map_err(|e| Error::Io {
        context: format!("reading {}", path.display()),
        source: e,
    })?;
    emit(None, &text)
}

fn bench(a: &BenchArgs) -> Result<()> {
    let policy = a.policy.resolve()?;
    let g = a.graph.load()?;
    let cfg = BenchConfig {
        max_level: a.levels.unwrap_or(g.dim_count()),
        repeats: a.repeats,
        policy,
        threads: a.threads,
    };
    let report = run_bench(&g, &cfg)?;
    emit(a.out.as_deref(), &report.to_csv())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Ss(a) => ss(a),
        Command::Cube(a) => cube(a),
        Command::Query(a) => query(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
