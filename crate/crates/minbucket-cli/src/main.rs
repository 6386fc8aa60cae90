//! Command line driver for the `minbucket` library: degree-sequence and
//! random-graph generation, triangle counting, runtime bounds, limit
//! constants, and the Monte Carlo work-per-vertex experiment.
//!
//! Exit codes: 0 on success, 2 for parameter/usage/parse problems,
//! 3 when a resource budget stops a run (partial output is still
//! flushed), 4 for I/O failures.

use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use minbucket::harness::parse_count;
use minbucket::{
    emit_csv, emit_plot_data, generate_chung_lu, generate_ecm, limit_constant, load_degrees,
    load_graph, minbucket_enumerate, minbucket_enumerate_listing, parse_config_overlay,
    power_law_sequence, run_experiment, sample_iid_degrees, save_degrees, save_graph,
    triangle_count_by_intersection, trivial_enumerate, trivial_enumerate_listing,
    validate_truncation, write_csv, BoundReport, CapRule, ConfigOverlay, DegreeModel, Error,
    ExperimentConfig, GenerationTrace, PowerLawParams, ReferenceDistribution, Result, SimpleGraph,
    TieMode, WorkReport,
};

/// Environment variable supplying the default experiment worker count.
const WORKERS_ENV: &str = "MINBUCKET_WORKERS";

#[derive(Parser)]
#[command(
    name = "minbucket",
    version,
    about = "Generate heavy-tailed random graphs and enumerate their triangles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a degree sequence, one degree per line.
    GenDegrees(GenDegreesArgs),
    /// Realize a random simple graph from a degree sequence file.
    GenGraph(GenGraphArgs),
    /// Count (and optionally list) the triangles of a graph file.
    Triangles(TrianglesArgs),
    /// Runtime bounds for a degree sequence file.
    Bounds(BoundsArgs),
    /// The limiting triangle work per vertex of a power-law distribution.
    LimitConstant(LimitConstantArgs),
    /// Monte Carlo sweep of bucketing work per vertex across graph sizes.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenDegreesArgs {
    /// Sequence model: deterministic power-law quantiles, i.i.d.
    /// power-law draws, or revalidation of an existing file.
    #[arg(long, value_enum)]
    model: DegreeSource,
    /// Power-law exponent (powerlaw and iid-powerlaw models).
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of vertices (powerlaw and iid-powerlaw models).
    #[arg(long)]
    n: Option<u64>,
    /// Largest admissible degree (powerlaw and iid-powerlaw models).
    #[arg(long)]
    dmax: Option<u64>,
    /// RNG seed (iid-powerlaw model; the others are deterministic).
    #[arg(long)]
    seed: Option<u64>,
    /// Existing degree file to read (file model).
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Where to write the sequence.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DegreeSource {
    /// Deterministic quantiles of the truncated power law.
    Powerlaw,
    /// Independent draws from the truncated power law.
    IidPowerlaw,
    /// Read, validate, and canonically re-emit a degree file.
    File,
}

#[derive(Args)]
struct GenGraphArgs {
    /// Random-graph model.
    #[arg(long, value_enum)]
    model: GraphSource,
    /// Degree sequence file (one degree per line).
    #[arg(long)]
    degrees: PathBuf,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the edge list.
    #[arg(long)]
    out: PathBuf,
    /// Print the generation accounting (erased multi-edges, loops, …).
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphSource {
    /// Erased configuration model: uniform stub matching, then erasure.
    Ecm,
    /// Chung-Lu: independent pairs with probability dᵢdⱼ/2m.
    ChungLu,
}

#[derive(Args)]
struct TrianglesArgs {
    /// Edge-list file ("u v" per line).
    #[arg(long)]
    graph: PathBuf,
    /// Enumeration algorithm; `oracle` is an independent count-only
    /// cross-check.
    #[arg(long, value_enum, default_value = "minbucket")]
    algo: TriangleAlgo,
    /// Tie handling between equal-degree endpoints (minbucket only).
    #[arg(long, value_parser = TieMode::from_str, default_value = "consistent")]
    tie: TieMode,
    /// Write the triangles here, one "a b c" line each.
    #[arg(long)]
    list_out: Option<PathBuf>,
    /// Write the stats record here instead of stdout.
    #[arg(long)]
    stats_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TriangleAlgo {
    /// Scan every neighbor pair of every vertex.
    Trivial,
    /// Bucket each edge at its smaller-degree endpoint.
    Minbucket,
    /// Sorted-adjacency intersection count (no listing, no work stats).
    Oracle,
}

#[derive(Args)]
struct BoundsArgs {
    /// Degree sequence file (one degree per line).
    #[arg(long)]
    degrees: PathBuf,
    /// Also report power-law growth predictions for this exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Bracket half-width tolerance for the limit constant.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Fail (exit 2) when the max degree is not below √m/2.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct LimitConstantArgs {
    /// Power-law exponent; the untruncated constant is finite only
    /// above 7/3.
    #[arg(long)]
    alpha: f64,
    /// Bracket half-width tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Truncate the distribution's support at this degree.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat key = value configuration file, applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Power-law exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated instance sizes, plain or mantissa-exponent
    /// form ("1e4,1e5,1e6").
    #[arg(long)]
    n_list: Option<String>,
    /// Monte Carlo trials per instance size.
    #[arg(long)]
    trials: Option<u32>,
    /// Tie handling: consistent | both.
    #[arg(long, value_parser = TieMode::from_str)]
    tie: Option<TieMode>,
    /// Degree cap rule: sqrt-n | sqrt-n-over-log2 | fixed:<k>.
    #[arg(long, value_parser = CapRule::from_str)]
    cap: Option<CapRule>,
    /// Master seed; every trial seed derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: $MINBUCKET_WORKERS, then 1). Results
    /// do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Degree model: iid | deterministic-powerlaw.
    #[arg(long, value_parser = DegreeModel::from_str)]
    model: Option<DegreeModel>,
    /// Sample one degree sequence per size and reuse it across trials.
    #[arg(long)]
    fixed_sequence: bool,
    /// Memory budget in MB, or "none" to disable the guard.
    #[arg(long)]
    max_mem_mb: Option<String>,
    /// Write per-trial CSV here (default: stdout).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write per-size plot data (mean, stddev, reference C·n) here.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::GenDegrees(args) => gen_degrees(args),
        Command::GenGraph(args) => gen_graph(args),
        Command::Triangles(args) => triangles(args),
        Command::Bounds(args) => bounds(args),
        Command::LimitConstant(args) => limit_constant_cmd(args),
        Command::Experiment(args) => experiment(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Maps error classes onto the documented exit codes.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parameter(_)
        | Error::Usage(_)
        | Error::Parse { .. }
        | Error::Truncation { .. }
        | Error::Divergent(_) => 2,
        Error::Resource(_) => 3,
        Error::Io { .. } => 4,
    }
}

/// A flag that one of the models requires.
fn require<T>(value: Option<T>, flag: &str, model: &str) -> Result<T> {
    value.ok_or_else(|| Error::Usage(format!("--{flag} is required for the {model} model")))
}

fn gen_degrees(args: GenDegreesArgs) -> Result<ExitCode> {
    let seq = match args.model {
        DegreeSource::Powerlaw => {
            let alpha = require(args.alpha, "alpha", "powerlaw")?;
            let n = require(args.n, "n", "powerlaw")?;
            let dmax = require(args.dmax, "dmax", "powerlaw")?;
            let dmax = u32::try_from(dmax)
                .map_err(|_| Error::Parameter(format!("--dmax {dmax} does not fit in u32")))?;
            power_law_sequence(&PowerLawParams::new(alpha, n as usize, dmax)?)?
        }
        DegreeSource::IidPowerlaw => {
            let alpha = require(args.alpha, "alpha", "iid-powerlaw")?;
            let n = require(args.n, "n", "iid-powerlaw")?;
            let dmax = require(args.dmax, "dmax", "iid-powerlaw")?;
            let dist = ReferenceDistribution::power_law(alpha)?.truncate(dmax)?;
            sample_iid_degrees(&dist, n as usize, args.seed.unwrap_or(0))?
        }
        DegreeSource::File => {
            let input = require(args.input, "in", "file")?;
            load_degrees(&input)?
        }
    };
    save_degrees(&seq, &args.out)?;
    println!("n = {}", seq.n());
    println!("stubs = {}", seq.stub_sum());
    println!("edges = {}", seq.m());
    println!("max_degree = {}", seq.max_degree());
    println!("parity_adjusted = {}", seq.parity_adjusted());
    Ok(ExitCode::SUCCESS)
}

fn gen_graph(args: GenGraphArgs) -> Result<ExitCode> {
    let seq = load_degrees(&args.degrees)?;
    let (graph, trace) = match args.model {
        GraphSource::Ecm => generate_ecm(&seq, args.seed),
        GraphSource::ChungLu => generate_chung_lu(&seq, args.seed),
    };
    save_graph(&graph, &args.out)?;
    if args.trace {
        print_trace(&graph, &trace);
    }
    Ok(ExitCode::SUCCESS)
}

fn print_trace(graph: &SimpleGraph, trace: &GenerationTrace) {
    let model = match trace.model {
        minbucket::GraphModel::Ecm => "ecm",
        minbucket::GraphModel::ChungLu => "chung-lu",
    };
    println!("model = {model}");
    println!("seed = {}", trace.seed);
    println!("n = {}", trace.input_n);
    println!("stubs = {}", trace.input_stub_sum);
    println!("edges = {}", graph.edge_count());
    println!("multi_edges_erased = {}", trace.multi_edges_erased);
    println!("self_loops_erased = {}", trace.self_loops_erased);
    println!("clamped_pairs = {}", trace.clamped_pairs);
}

fn triangles(args: TrianglesArgs) -> Result<ExitCode> {
    let graph = load_graph(&args.graph)?;
    let want_list = args.list_out.is_some();

    let report: Option<WorkReport> = match args.algo {
        TriangleAlgo::Oracle => {
            if want_list {
                return Err(Error::Usage(
                    "the oracle only counts; use --algo trivial or minbucket with --list-out"
                        .into(),
                ));
            }
            None
        }
        TriangleAlgo::Trivial => Some(if want_list {
            trivial_enumerate_listing(&graph, None)
        } else {
            trivial_enumerate(&graph)
        }),
        TriangleAlgo::Minbucket => Some(if want_list {
            minbucket_enumerate_listing(&graph, args.tie, None)
        } else {
            minbucket_enumerate(&graph, args.tie)
        }),
    };

    if let (Some(path), Some(report)) = (&args.list_out, &report) {
        let triples = report
            .triangles
            .listed()
            .expect("listing was requested above");
        let mut out = io::BufWriter::new(fs::File::create(path).map_err(|e| io_err(path, e))?);
        for t in triples {
            writeln!(out, "{} {} {}", t[0], t[1], t[2]).map_err(|e| io_err(path, e))?;
        }
        out.flush().map_err(|e| io_err(path, e))?;
    }

    let stats = match &report {
        Some(r) => format!(
            "{{\"wedges_enumerated\": {}, \"closed_wedges\": {}, \"triangle_count\": {}, \"max_bucket\": {}}}",
            r.wedges_enumerated,
            r.closed_wedges,
            r.triangle_count(),
            r.max_bucket().map_or("null".into(), |b| b.to_string()),
        ),
        None => format!(
            "{{\"wedges_enumerated\": null, \"closed_wedges\": null, \"triangle_count\": {}, \"max_bucket\": null}}",
            triangle_count_by_intersection(&graph),
        ),
    };
    match &args.stats_out {
        Some(path) => fs::write(path, stats + "\n").map_err(|e| io_err(path, e))?,
        None => println!("{stats}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(args: BoundsArgs) -> Result<ExitCode> {
    let seq = load_degrees(&args.degrees)?;
    let truncation = validate_truncation(&seq, args.strict)?;
    let report = match args.alpha {
        Some(alpha) => BoundReport::for_power_law(alpha, args.tol)?.with_sequence(&seq),
        None => BoundReport::for_sequence(&seq),
    };

    println!("n = {}", seq.n());
    println!("edges = {}", truncation.m);
    println!("max_degree = {}", truncation.max_degree);
    println!("work_bound_regime = {}", truncation.work_bound_regime);
    println!("tightness_regime = {}", truncation.tightness_regime);
    print_bound_report(&report);
    Ok(ExitCode::SUCCESS)
}

fn print_bound_report(report: &BoundReport) {
    if let Some(b) = report.trivial_bound {
        println!("trivial_bound = {b}");
    }
    if let Some(b) = report.minbucket_bound {
        println!("minbucket_bound = {b}");
    }
    if let Some(alpha) = report.alpha {
        println!("alpha = {alpha}");
    }
    if let Some((trivial, bucket)) = report.power_law_exponents {
        println!("trivial_excess = {trivial} ({})", growth_word(trivial));
        println!("minbucket_excess = {bucket} ({})", growth_word(bucket));
    }
    if let Some(c) = &report.limit_constant {
        println!("limit_constant = {}", c.value);
        println!("limit_constant_lower = {}", c.lower);
        println!("limit_constant_upper = {}", c.upper);
    }
}

fn growth_word(excess: f64) -> &'static str {
    if excess <= 0.0 {
        "linear"
    } else {
        "superlinear"
    }
}

fn limit_constant_cmd(args: LimitConstantArgs) -> Result<ExitCode> {
    let mut dist = ReferenceDistribution::power_law(args.alpha)?;
    if let Some(cap) = args.cap {
        dist = dist.truncate(cap)?;
    }
    let c = limit_constant(&dist, args.tol)?;
    println!("C = {}", c.value);
    println!("lower = {}", c.lower);
    println!("upper = {}", c.upper);
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let mut cfg = ExperimentConfig::default();

    if let Ok(value) = std::env::var(WORKERS_ENV) {
        cfg.worker_count = value.trim().parse().map_err(|_| {
            Error::Parameter(format!("{WORKERS_ENV} must be a worker count, got {value:?}"))
        })?;
    }
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        cfg.apply_overlay(&parse_config_overlay(&text, path)?);
    }
    cfg.apply_overlay(&cli_overlay(&args)?);

    let result = run_experiment(&cfg)?;

    match &args.csv {
        Some(path) => emit_csv(&result, path)?,
        None => {
            let stdout = io::stdout();
            write_csv(&result, stdout.lock()).map_err(|e| io_err(Path::new("stdout"), e))?;
        }
    }
    if let Some(path) = &args.plot_data {
        emit_plot_data(&result, path)?;
    }

    // Human-readable summary; kept off stdout when the CSV goes there.
    let summary: Box<dyn Write> = if args.csv.is_some() {
        Box::new(io::stdout())
    } else {
        Box::new(io::stderr())
    };
    print_summary(summary, &result).map_err(|e| io_err(Path::new("summary"), e))?;

    if let Some(reason) = &result.aborted {
        eprintln!("warning: {reason}");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_summary(mut out: impl Write, result: &minbucket::ExperimentResult) -> io::Result<()> {
    for s in &result.summaries {
        write!(
            out,
            "n = {:>9}: work/n = {:.6} ± {:.6}",
            s.n, s.mean_ratio, s.stddev_ratio
        )?;
        match s.reference_cn {
            Some(reference) => writeln!(out, " (limit prediction {:.6})", reference / s.n as f64)?,
            None => writeln!(out)?,
        }
    }
    Ok(())
}

/// Collects the experiment flags into a configuration overlay, so the
/// same precedence machinery serves the config file and the flags.
fn cli_overlay(args: &ExperimentArgs) -> Result<ConfigOverlay> {
    let n_values = args
        .n_list
        .as_deref()
        .map(|list| {
            list.split(',')
                .map(|tok| {
                    parse_count(tok.trim()).ok_or_else(|| {
                        Error::Parameter(format!("invalid instance size {:?} in --n-list", tok))
                    })
                })
                .collect::<Result<Vec<u64>>>()
        })
        .transpose()?;
    let max_memory_mb = args
        .max_mem_mb
        .as_deref()
        .map(|value| {
            if value.eq_ignore_ascii_case("none") {
                Ok(None)
            } else {
                value.parse::<u64>().map(Some).map_err(|_| {
                    Error::Parameter(format!("--max-mem-mb expects a size in MB or \"none\", got {value:?}"))
                })
            }
        })
        .transpose()?;
    Ok(ConfigOverlay {
        alpha: args.alpha,
        n_values,
        trials: args.trials,
        cap_rule: args.cap,
        tie_mode: args.tie,
        degree_model: args.model,
        master_seed: args.seed,
        worker_count: args.workers,
        fixed_sequence: args.fixed_sequence.then_some(true),
        max_memory_mb,
    })
}

fn io_err(path: &Path, source: io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Keeps `--help` texts for value-parser flags aligned with the library
/// vocabulary (compile-time check that the parsers stay `FromStr`).
#[allow(dead_code)]
fn _parsers_are_fromstr() {
    fn assert_fromstr<T: FromStr<Err = E>, E: Display>() {}
    assert_fromstr::<TieMode, _>();
    assert_fromstr::<CapRule, _>();
    assert_fromstr::<DegreeModel, _>();
}
