//! Command-line surface: solve, bench, gen, validate, cascade.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::baselines::{solve_baseline, solve_nosocial, StrategyKind};
use crate::cascade;
use crate::datagen::{generate_instance, sample_valuations, InstanceSpec, ValuationDistribution, WeightLaw};
use crate::error::{Error, Result};
use crate::io::{
    network_from_files, parse_edge_list, write_graph_tsv, write_results_csv, write_valuations_tsv,
    ResultRow,
};
use crate::model::{ConcaveInfluence, Money, MonetizingNetwork, NodeSet, PriceSet};
use crate::prub::{per_price_best, solve_bruteforce, solve_prub, SolverResult};
use crate::prubif::solve_prubif;

/// Exit code for bad input.
const EXIT_INPUT: i32 = 1;
/// Exit code for a violated internal invariant.
const EXIT_INTERNAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "seedprice", version, about = "Price and seed a commodity on a monetizing social network")]
struct Cli {
    /// Worker threads (default: available parallelism; env SEEDPRICE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one solver on a network and emit a result row.
    Solve(SolveArgs),
    /// Sweep solvers across quantity ratios and emit a CSV table.
    Bench(BenchArgs),
    /// Generate a synthetic instance to graph/valuation files.
    Gen(GenArgs),
    /// Check a network file against the model invariants.
    Validate(ValidateArgs),
    /// Run a single cascade at an explicit price and seed group.
    Cascade(CascadeArgs),
}

#[derive(Debug, Args)]
struct NetworkArgs {
    /// Graph TSV: source<TAB>target<TAB>weight per line.
    #[arg(long)]
    graph: PathBuf,
    /// Valuation TSV: node<TAB>valuation per line (missing nodes get 0).
    #[arg(long)]
    valuations: Option<PathBuf>,
    /// Sample valuations instead of reading them: normal:MU,VAR or
    /// mshape:MU1,VAR1,MU2,VAR2 (uses --seed).
    #[arg(long, conflicts_with = "valuations")]
    val_dist: Option<String>,
    /// Influence function: identity, sqrt, or log1p.
    #[arg(long, default_value = "identity")]
    influence: String,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Price set: A..B for all integers in [A, B], or a comma list.
    #[arg(long, default_value = "1..10")]
    prices: String,
    /// Commodity stock.
    #[arg(long, conflicts_with = "ratio")]
    n: Option<usize>,
    /// Stock as a fraction of the node count.
    #[arg(long)]
    ratio: Option<f64>,
    /// prub, bruteforce, prubif, random, sumweights, ablation-n,
    /// ablation-f, ablation-p, or nosocial.
    #[arg(long, default_value = "prub")]
    solver: String,
    /// Rng seed (random strategy and sampled valuations).
    #[arg(long)]
    seed: Option<u64>,
    /// Write the CSV row here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report wall_time_ms as 0 for byte-reproducible output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Graph TSV (alternative: --gen-nodes).
    #[arg(long, required_unless_present = "gen_nodes")]
    graph: Option<PathBuf>,
    #[arg(long)]
    valuations: Option<PathBuf>,
    /// Generate the instance instead of reading one.
    #[arg(long, conflicts_with = "graph")]
    gen_nodes: Option<usize>,
    #[arg(long, default_value_t = 0.02)]
    edge_prob: f64,
    /// uniform:LO,HI or powerlaw:EXPONENT.
    #[arg(long, default_value = "powerlaw:2.5")]
    weights: String,
    /// Valuation distribution (required with --gen-nodes, optional override
    /// for a loaded graph).
    #[arg(long)]
    val_dist: Option<String>,
    #[arg(long, default_value = "identity")]
    influence: String,
    #[arg(long, default_value = "1..10")]
    prices: String,
    /// Comma list of solvers to sweep.
    #[arg(long, default_value = "prubif,sumweights,random,nosocial")]
    solvers: String,
    /// A..B[:STEP] (default step 0.05) or a comma list of n/|V| ratios.
    #[arg(long, default_value = "0.05..0.30:0.05")]
    ratios: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Result-row CSV destination (default stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a revenue-ratio-to-NoSocial table here.
    #[arg(long)]
    ratio_table: Option<PathBuf>,
    /// Also write per-price best-revenue curves here (exact enumeration;
    /// small instances only).
    #[arg(long)]
    price_curve: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 0.02)]
    edge_prob: f64,
    /// uniform:LO,HI or powerlaw:EXPONENT.
    #[arg(long, default_value = "powerlaw:2.5")]
    weights: String,
    /// normal:MU,VAR or mshape:MU1,VAR1,MU2,VAR2.
    #[arg(long)]
    val_dist: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.tsv and PREFIX.val.
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    network: NetworkArgs,
}

#[derive(Debug, Args)]
struct CascadeArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long)]
    price: f64,
    /// Comma-separated seed labels (may be empty).
    #[arg(long, default_value = "")]
    seeds: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
}

/// Which solver a name refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Prub,
    BruteForce,
    PrubIf,
    Baseline(StrategyKind),
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prub" => Ok(SolverKind::Prub),
            "bruteforce" => Ok(SolverKind::BruteForce),
            "prubif" => Ok(SolverKind::PrubIf),
            other => Ok(SolverKind::Baseline(other.parse()?)),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverKind::Prub => f.write_str("prub"),
            SolverKind::BruteForce => f.write_str("bruteforce"),
            SolverKind::PrubIf => f.write_str("prubif"),
            SolverKind::Baseline(k) => write!(f, "{k}"),
        }
    }
}

pub fn run_solver(
    net: &MonetizingNetwork,
    prices: &PriceSet,
    n: usize,
    kind: SolverKind,
    rng_seed: Option<u64>,
) -> Result<SolverResult> {
    match kind {
        SolverKind::Prub => solve_prub(net, prices, n),
        SolverKind::BruteForce => solve_bruteforce(net, prices, n),
        SolverKind::PrubIf => solve_prubif(net, prices, n),
        SolverKind::Baseline(k) => solve_baseline(net, prices, n, k, rng_seed),
    }
}

fn parse_prices(spec: &str) -> Result<PriceSet> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = lo
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad price range '{spec}'")))?;
        let hi: u64 = hi
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad price range '{spec}'")))?;
        PriceSet::integer_range(lo, hi)
    } else {
        let prices: std::result::Result<Vec<f64>, _> =
            spec.split(',').map(|p| p.trim().parse::<f64>()).collect();
        PriceSet::new(prices.map_err(|_| Error::InvalidParams(format!("bad price list '{spec}'")))?)
    }
}

fn parse_ratios(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParams(format!("bad ratio spec '{spec}'"));
    let ratios = if let Some((range, step)) = spec
        .split_once(':')
        .map(|(r, s)| (r, Some(s)))
        .or(Some((spec, None)))
        .filter(|(r, _)| r.contains(".."))
    {
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let step: f64 = match step {
            Some(s) => s.trim().parse().map_err(|_| bad())?,
            None => 0.05,
        };
        if step <= 0.0 || lo > hi {
            return Err(bad());
        }
        let mut out = Vec::new();
        let mut r = lo;
        while r <= hi + 1e-9 {
            out.push(r);
            r += step;
        }
        out
    } else {
        spec.split(',')
            .map(|r| r.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<f64>>>()?
    };
    if ratios.iter().any(|&r| r <= 0.0 || r > 1.0) {
        return Err(Error::InvalidParams("ratios must lie in (0, 1]".into()));
    }
    Ok(ratios)
}

fn parse_val_dist(spec: &str) -> Result<ValuationDistribution> {
    let bad = || Error::InvalidParams(format!("bad valuation distribution '{spec}'"));
    let (kind, params) = spec.split_once(':').ok_or_else(bad)?;
    let nums: std::result::Result<Vec<f64>, _> =
        params.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let nums = nums.map_err(|_| bad())?;
    match (kind, nums.as_slice()) {
        ("normal", [mean, variance]) => Ok(ValuationDistribution::Normal {
            mean: *mean,
            variance: *variance,
        }),
        ("mshape", [m1, v1, m2, v2]) => Ok(ValuationDistribution::MShape {
            mean_low: *m1,
            variance_low: *v1,
            mean_high: *m2,
            variance_high: *v2,
        }),
        _ => Err(bad()),
    }
}

fn parse_weight_law(spec: &str) -> Result<WeightLaw> {
    let bad = || Error::InvalidParams(format!("bad weight law '{spec}'"));
    let (kind, params) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "uniform" => {
            let (lo, hi) = params.split_once(',').ok_or_else(bad)?;
            Ok(WeightLaw::UniformInt {
                lo: lo.trim().parse().map_err(|_| bad())?,
                hi: hi.trim().parse().map_err(|_| bad())?,
            })
        }
        "powerlaw" => Ok(WeightLaw::PowerLaw {
            exponent: params.trim().parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

fn load_network(args: &NetworkArgs, seed: Option<u64>) -> Result<MonetizingNetwork> {
    let influence: ConcaveInfluence = args.influence.parse()?;
    let graph_text = fs::read_to_string(&args.graph)?;
    match (&args.valuations, &args.val_dist) {
        (Some(path), None) => {
            let val_text = fs::read_to_string(path)?;
            network_from_files(&graph_text, Some(&val_text), influence)
        }
        (None, Some(dist)) => {
            let dist = parse_val_dist(dist)?;
            let edges = parse_edge_list(&graph_text)?;
            let mut labels = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for (s, t, _) in &edges {
                for l in [s, t] {
                    if seen.insert(l.clone()) {
                        labels.push(l.clone());
                    }
                }
            }
            let vals = sample_valuations(dist, labels.len().max(1), seed.unwrap_or(0))?;
            MonetizingNetwork::build(labels, vals, edges, influence)
        }
        (None, None) => network_from_files(&graph_text, None, influence),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn resolve_quantity(n: Option<usize>, ratio: Option<f64>, node_count: usize) -> Result<usize> {
    let n = match (n, ratio) {
        (Some(n), None) => n,
        (None, Some(r)) => {
            if !(0.0..=1.0).contains(&r) || r <= 0.0 {
                return Err(Error::InvalidParams("ratio must lie in (0, 1]".into()));
            }
            ((r * node_count as f64).round() as usize).clamp(1, node_count)
        }
        _ => return Err(Error::InvalidParams("exactly one of --n or --ratio is required".into())),
    };
    if n == 0 || n > node_count {
        return Err(Error::InvalidParams(format!(
            "quantity {n} must lie in [1, {node_count}]"
        )));
    }
    Ok(n)
}

fn parse_seed_labels(net: &MonetizingNetwork, spec: &str) -> Result<NodeSet> {
    let mut seeds = NodeSet::new();
    for label in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        seeds.insert(net.node_id(label)?);
    }
    Ok(seeds)
}

fn write_output(path: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// Entry point; returns the process exit code (0 ok, 1 input error,
/// 2 internal invariant violation).
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("SEEDPRICE_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Cascade(args) => cmd_cascade(args),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let net = load_network(&args.network, args.seed)?;
    let prices = parse_prices(&args.prices)?;
    let n = resolve_quantity(args.n, args.ratio, net.node_count())?;
    let kind: SolverKind = args.solver.parse()?;
    let res = run_solver(&net, &prices, n, kind, args.seed)?;
    // replay the reported solution through the cascade; the network-blind
    // strategy may undercount since real cascades spread further
    if res.p_max > 0.0 {
        let replayed = cascade::revenue(&net, n, res.p_max, &res.a_max)?;
        let bad = if kind == SolverKind::Baseline(StrategyKind::NoSocial) {
            replayed < res.revenue - 1e-9
        } else {
            (replayed - res.revenue).abs() > 1e-9
        };
        if bad {
            eprintln!(
                "internal error: reported revenue {} does not replay ({replayed})",
                res.revenue
            );
            return Ok(EXIT_INTERNAL);
        }
    }
    let row = ResultRow::from_result(&net, &kind.to_string(), n, &res, !args.no_timing);
    let mut buf = Vec::new();
    write_results_csv(&[row], &mut buf)?;
    write_output(&args.output, &buf)?;
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let net = if let Some(nodes) = args.gen_nodes {
        let dist = parse_val_dist(args.val_dist.as_deref().ok_or_else(|| {
            Error::InvalidParams("--val-dist is required with --gen-nodes".into())
        })?)?;
        generate_instance(&InstanceSpec {
            node_count: nodes,
            edge_probability: args.edge_prob,
            weight_law: parse_weight_law(&args.weights)?,
            valuations: dist,
            rng_seed: args.seed,
        })?
    } else {
        load_network(
            &NetworkArgs {
                graph: args.graph.clone().expect("required_unless_present"),
                valuations: args.valuations.clone(),
                val_dist: args.val_dist.clone(),
                influence: args.influence.clone(),
            },
            Some(args.seed),
        )?
    };
    let prices = parse_prices(&args.prices)?;
    let ratios = parse_ratios(&args.ratios)?;
    let solvers: Vec<SolverKind> = args
        .solvers
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_>>()?;

    let nosocial_by_ratio: Vec<Money> = ratios
        .iter()
        .map(|&r| {
            let n = resolve_quantity(None, Some(r), net.node_count())?;
            Ok(solve_nosocial(&net, &prices, n)?.revenue)
        })
        .collect::<Result<_>>()?;

    let cells: Vec<(SolverKind, usize, f64)> = solvers
        .iter()
        .flat_map(|&kind| ratios.iter().enumerate().map(move |(i, &r)| (kind, i, r)))
        .collect();
    let rows: Vec<(ResultRow, f64)> = cells
        .par_iter()
        .map(|&(kind, ratio_idx, ratio)| {
            let n = resolve_quantity(None, Some(ratio), net.node_count())?;
            let res = run_solver(&net, &prices, n, kind, Some(args.seed))?;
            let row = ResultRow::from_result(&net, &kind.to_string(), n, &res, !args.no_timing);
            let base = nosocial_by_ratio[ratio_idx];
            Ok((row, base))
        })
        .collect::<Result<_>>()?;

    let mut buf = Vec::new();
    let result_rows: Vec<ResultRow> = rows.iter().map(|(r, _)| r.clone()).collect();
    write_results_csv(&result_rows, &mut buf)?;
    write_output(&args.output, &buf)?;

    if let Some(path) = &args.ratio_table {
        let mut out = Vec::new();
        writeln!(out, "solver,n_over_v,n,revenue,nosocial_revenue,ratio_to_nosocial")?;
        for (row, base) in &rows {
            let ratio_str = if *base > 0.0 {
                format!("{}", row.revenue / base)
            } else {
                String::new()
            };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                row.solver, row.n_over_v, row.n, row.revenue, base, ratio_str
            )?;
        }
        fs::write(path, out)?;
    }

    if let Some(path) = &args.price_curve {
        if net.node_count() > crate::prub::BRUTE_FORCE_NODE_LIMIT {
            return Err(Error::InstanceTooLarge {
                nodes: net.node_count(),
                limit: crate::prub::BRUTE_FORCE_NODE_LIMIT,
            });
        }
        let mut out = Vec::new();
        writeln!(out, "n_over_v,n,price,best_revenue")?;
        for &ratio in &ratios {
            let n = resolve_quantity(None, Some(ratio), net.node_count())?;
            for &p in prices.prices() {
                let (_, rev) = per_price_best(&net, p, n, n)?;
                writeln!(out, "{ratio},{n},{p},{rev}")?;
            }
        }
        fs::write(path, out)?;
    }
    Ok(0)
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let spec = InstanceSpec {
        node_count: args.nodes,
        edge_probability: args.edge_prob,
        weight_law: parse_weight_law(&args.weights)?,
        valuations: parse_val_dist(&args.val_dist)?,
        rng_seed: args.seed,
    };
    let net = generate_instance(&spec)?;
    let mut graph = Vec::new();
    write_graph_tsv(&net, &mut graph)?;
    let mut vals = Vec::new();
    write_valuations_tsv(&net, &mut vals)?;
    let graph_path = args.out_prefix.with_extension("tsv");
    let val_path = args.out_prefix.with_extension("val");
    fs::write(&graph_path, graph)?;
    fs::write(&val_path, vals)?;
    println!(
        "wrote {} nodes, {} edges to {} and {}",
        net.node_count(),
        net.edge_count(),
        graph_path.display(),
        val_path.display()
    );
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<i32> {
    let net = load_network(&args.network, None)?;
    println!("ok: {} nodes, {} edges", net.node_count(), net.edge_count());
    Ok(0)
}

fn cmd_cascade(args: CascadeArgs) -> Result<i32> {
    let net = load_network(&args.network, args.seed)?;
    let seeds = parse_seed_labels(&net, &args.seeds)?;
    let result = cascade::run_cascade(&net, args.price, &seeds)?;
    let revenue = cascade::revenue(&net, args.n, args.price, &seeds)?;
    let adopter_labels: Vec<&str> = result.adopters.iter().map(|&v| net.label(v)).collect();
    println!("adopters: {}", adopter_labels.join(";"));
    println!("rounds: {}", result.rounds);
    println!(
        "paying: {}",
        result
            .adopters
            .len()
            .saturating_sub(seeds.len())
            .min(args.n.saturating_sub(seeds.len()))
    );
    println!("revenue: {revenue}");
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn price_spec_parsing() {
        assert_eq!(parse_prices("1..10").unwrap().len(), 10);
        assert_eq!(parse_prices("1,5,9.5").unwrap().prices(), &[1.0, 5.0, 9.5]);
        assert!(parse_prices("5..1").is_err());
        assert!(parse_prices("x").is_err());
    }

    #[test]
    fn ratio_spec_parsing() {
        let r = parse_ratios("0.05..0.30:0.05").unwrap();
        assert_eq!(r.len(), 6);
        assert!((r[0] - 0.05).abs() < 1e-12 && (r[5] - 0.30).abs() < 1e-12);
        assert_eq!(parse_ratios("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_ratios("0.0").is_err());
        assert!(parse_ratios("1.5").is_err());
    }

    #[test]
    fn dist_spec_parsing() {
        assert_eq!(
            parse_val_dist("normal:10,8.16").unwrap(),
            ValuationDistribution::Normal { mean: 10.0, variance: 8.16 }
        );
        assert_eq!(
            parse_val_dist("mshape:2,0.44,8,0.44").unwrap(),
            ValuationDistribution::MShape {
                mean_low: 2.0,
                variance_low: 0.44,
                mean_high: 8.0,
                variance_high: 0.44
            }
        );
        assert!(parse_val_dist("normal:1").is_err());
        assert_eq!(
            parse_weight_law("uniform:1,5").unwrap(),
            WeightLaw::UniformInt { lo: 1, hi: 5 }
        );
        assert_eq!(
            parse_weight_law("powerlaw:2.5").unwrap(),
            WeightLaw::PowerLaw { exponent: 2.5 }
        );
    }

    #[test]
    fn quantity_resolution() {
        assert_eq!(resolve_quantity(Some(4), None, 6).unwrap(), 4);
        assert_eq!(resolve_quantity(None, Some(0.5), 6).unwrap(), 3);
        assert_eq!(resolve_quantity(None, Some(0.01), 6).unwrap(), 1);
        assert!(resolve_quantity(Some(7), None, 6).is_err());
        assert!(resolve_quantity(Some(0), None, 6).is_err());
    }
}
