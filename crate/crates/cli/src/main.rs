mod output;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use densim_core::baselines::{bl_sim_pair_estimate, BL_SIM_PAIR_WARNING};
use densim_core::ingest::{
    parse_multiplex_reader, read_similarity, write_edge_list, write_similarity,
};
use densim_core::{
    bl_den, bl_sim, build_similarity, explore, generate_random, lambda_bounds, solve_dss,
    solve_dss_inv, stats, EdgeSimilarity, ExploreOptions, Graph, MultilayerGraph, Solution,
};

use output::{num, round12, CatalogDocument, DatasetInfo, SolutionEntry, SolveDocument};

#[derive(Debug, Parser)]
#[command(name = "densim", version, about = "Dense subgraphs of similar edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dataset statistics as a table followed by a JSON object.
    Stats(InputArgs),
    /// Enumerate the similarity/density trade-off over all lambda.
    Explore(ExploreArgs),
    /// Solve for one lambda, or for one mu via a full exploration.
    Solve(SolveArgs),
    /// Sweep a baseline over a gamma grid.
    Baseline(BaselineArgs),
    /// Write a random instance and its similarity sidecar.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Edge list with lines `layer u v [weight]`.
    input: PathBuf,
    /// Similarity sidecar with lines `e_i e_j s`, replacing Jaccard.
    #[arg(long)]
    sim: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExploreArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Ratio solver stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Maximum number of lambda evaluations.
    #[arg(long)]
    budget: Option<usize>,
    /// Stop after this many distinct solutions.
    #[arg(long)]
    max_solutions: Option<usize>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    out: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[group(id = "target", required = true, multiple = false, args = ["lambda", "mu"])]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// A nonnegative number, `min` or `max`.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Den,
    Sim,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    mode: Mode,
    /// `start:stop:step`.
    #[arg(long, default_value = "0:10:0.1")]
    gamma_grid: String,
    /// Run `--mode sim` even when it materializes a very large pair list.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long)]
    psim: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge list path; the sidecar is written next to it with `.sim` appended.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DENSIM_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<UsageError>() {
            return 4;
        }
        if cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(core) = cause.downcast_ref::<densim_core::Error>() {
            return match core {
                densim_core::Error::Io(_) => 2,
                densim_core::Error::NegativeParameter { .. } => 4,
                _ => 3,
            };
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Stats(args) => cmd_stats(&args, &mut out)?,
        Command::Explore(args) => cmd_explore(&args, &mut out)?,
        Command::Solve(args) => cmd_solve(&args, &mut out)?,
        Command::Baseline(args) => cmd_baseline(&args, &mut out)?,
        Command::Gen(args) => cmd_gen(&args)?,
    }
    out.flush()?;
    Ok(())
}

struct Instance {
    ml: MultilayerGraph,
    graph: Graph,
    sim: EdgeSimilarity,
    info: DatasetInfo,
}

fn load(args: &InputArgs) -> Result<Instance> {
    let file =
        File::open(&args.input).with_context(|| format!("cannot open {}", args.input.display()))?;
    let ml = parse_multiplex_reader(BufReader::new(file))
        .with_context(|| format!("reading {}", args.input.display()))?;
    let (graph, sim) = match &args.sim {
        Some(path) => {
            let file =
                File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            let graph = ml.graph().clone();
            let sim = read_similarity(BufReader::new(file), graph.edge_count())
                .with_context(|| format!("reading {}", path.display()))?;
            (graph, sim)
        }
        None => build_similarity(&ml)?,
    };
    log::info!(
        "loaded {} nodes, {} edges, {} similar pairs",
        graph.node_count(),
        graph.edge_count(),
        sim.pair_count()
    );
    let info = DatasetInfo {
        file: args.input.display().to_string(),
        sim_file: args.sim.as_ref().map(|p| p.display().to_string()),
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        layers: ml.layer_count(),
        s_min: round12(sim.s_min_nonzero().unwrap_or(0.0)),
        s_max: round12(sim.s_max().unwrap_or(0.0)),
    };
    Ok(Instance {
        ml,
        graph,
        sim,
        info,
    })
}

fn cmd_stats(args: &InputArgs, out: &mut impl Write) -> Result<()> {
    let inst = load(args)?;
    let s = stats(&inst.ml, &inst.graph, &inst.sim);
    write!(out, "{}", output::stats_table(&s))?;
    writeln!(out, "{}", output::stats_json(&s))?;
    Ok(())
}

fn cmd_explore(args: &ExploreArgs, out: &mut impl Write) -> Result<()> {
    let inst = load(&args.input)?;
    let options = ExploreOptions {
        budget: args.budget,
        max_solutions: args.max_solutions,
        jobs: args.jobs as usize,
        tol: args.tol,
    };
    let start = Instant::now();
    let catalog = explore(&inst.graph, &inst.sim, &options)?;
    let seconds = start.elapsed().as_secs_f64();
    if catalog.truncated {
        log::warn!(
            "exploration stopped early after {} lambda evaluations; the catalog is partial",
            catalog.tested_lambdas()
        );
    }
    let doc = CatalogDocument::new(inst.info, &inst.ml, &catalog, seconds);
    match args.out {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?,
        Format::Csv => write!(out, "{}", doc.csv())?,
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs, out: &mut impl Write) -> Result<()> {
    if let Some(mu) = args.mu.filter(|m| !(m.is_finite() && *m >= 0.0)) {
        return Err(UsageError(format!("--mu must be a nonnegative number, got {mu}")).into());
    }
    let inst = load(&args.input)?;
    let doc = if let Some(lambda) = &args.lambda {
        let lambda = match lambda.as_str() {
            "min" => lambda_bounds(&inst.graph, &inst.sim)?.lambda_min,
            "max" => lambda_bounds(&inst.graph, &inst.sim)?.lambda_max,
            text => text
                .parse::<f64>()
                .ok()
                .filter(|l| l.is_finite() && *l >= 0.0)
                .ok_or_else(|| {
                    UsageError(format!(
                        "--lambda expects a nonnegative number, min or max, got {text:?}"
                    ))
                })?,
        };
        let (solution, trace) = solve_dss_inv(&inst.graph, &inst.sim, lambda, args.tol)?;
        SolveDocument {
            solution: SolutionEntry::new(&inst.ml, &solution),
            dataset: inst.info,
            mu: None,
            objective_dss: None,
            iterations: Some(trace.iterations()),
        }
    } else {
        let mu = args.mu.unwrap_or_default();
        let options = ExploreOptions {
            jobs: args.jobs as usize,
            tol: args.tol,
            ..ExploreOptions::default()
        };
        let catalog = explore(&inst.graph, &inst.sim, &options)?;
        let solution: &Solution = solve_dss(&catalog, mu)?;
        SolveDocument {
            solution: SolutionEntry::new(&inst.ml, solution),
            objective_dss: Some(round12(solution.objective_dss(mu)?)),
            dataset: inst.info,
            mu: Some(round12(mu)),
            iterations: None,
        }
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

/// Parses `start:stop:step` into the grid values.
fn parse_grid(text: &str) -> std::result::Result<Vec<f64>, UsageError> {
    let bad = || {
        UsageError(format!(
            "invalid gamma grid {text:?}, expected start:stop:step"
        ))
    };
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let &[start, stop, step] = parts.as_slice() else {
        return Err(bad());
    };
    if !parts.iter().all(|x| x.is_finite()) || start < 0.0 || stop < start || step <= 0.0 {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| round12(start + i as f64 * step))
        .collect())
}

fn cmd_baseline(args: &BaselineArgs, out: &mut impl Write) -> Result<()> {
    let grid = parse_grid(&args.gamma_grid)?;
    let inst = load(&args.input)?;
    if matches!(args.mode, Mode::Sim) && grid.iter().any(|&g| g > 0.0) {
        let pairs = bl_sim_pair_estimate(&inst.graph, &inst.sim);
        if pairs > BL_SIM_PAIR_WARNING && !args.allow_large {
            return Err(UsageError(format!(
                "--mode sim would materialize {pairs} weighted pairs; pass --allow-large to proceed"
            ))
            .into());
        }
    }
    writeln!(out, "gamma,S,D_num,D_den,edges,nodes")?;
    for gamma in grid {
        let result = match args.mode {
            Mode::Den => bl_den(&inst.ml, gamma)?,
            Mode::Sim => bl_sim(&inst.graph, &inst.sim, gamma)?,
        };
        let s = Solution::evaluate(&inst.graph, &inst.sim, result.edge_set, 0.0)?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(gamma),
            num(s.similarity),
            s.density.numerator,
            s.density.denominator,
            s.num_edges(),
            s.num_nodes()
        )?;
    }
    Ok(())
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".sim");
    PathBuf::from(name)
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let (graph, sim) = generate_random(args.nodes, args.edges, args.psim, args.seed)?;
    let sim_path = sidecar_path(&args.out);
    let mut edges = BufWriter::new(
        File::create(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?,
    );
    write_edge_list(&mut edges, &graph)?;
    edges.flush()?;
    let mut pairs = BufWriter::new(
        File::create(&sim_path).with_context(|| format!("cannot create {}", sim_path.display()))?,
    );
    write_similarity(&mut pairs, &sim)?;
    pairs.flush()?;
    log::info!(
        "wrote {} edges to {} and {} pairs to {}",
        graph.edge_count(),
        args.out.display(),
        sim.pair_count(),
        sim_path.display()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:0:1").unwrap(), vec![0.0]);
        assert_eq!(
            parse_grid("0:1:0.25").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        let default = parse_grid("0:10:0.1").unwrap();
        assert_eq!(default.len(), 101);
        assert_eq!(default[3], 0.3);
        assert_eq!(default[100], 10.0);
        for bad in [
            "", "1:0:1", "0:1:0", "0:1", "a:b:c", "-1:1:1", "0:1:-1", "0:inf:1",
        ] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            sidecar_path(Path::new("x/g.edges")),
            PathBuf::from("x/g.edges.sim")
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
