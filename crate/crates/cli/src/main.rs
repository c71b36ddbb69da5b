mod enumerate;
mod report;
mod suites;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use halftree::graphmodel::{enumerate_perfect_matchings, PerfectMatching, RootedGraph};
use halftree::linebundle::Connection;
use halftree::skewmatrix::{random_instance, random_instance_with_density, SkewMatrix};

use enumerate::Kind;
use report::{Status, VerificationReport};
use suites::{Instance, Suite};

/// Generate zero-sum skew-symmetric instances and check the half-tree,
/// forest and line-bundle identities on them with exact arithmetic.
#[derive(Parser)]
#[command(name = "halftree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance in the matrix text format.
    Generate {
        #[command(flatten)]
        random: RandomArgs,
        /// Output file; the matrix goes to standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run identity checks and print a JSON report.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Pin one reference matching, e.g. `1-4,2-3`; all are tried otherwise.
        #[arg(long)]
        m0: Option<String>,
        /// Connection file with lines `i j p/q` for the line-bundle suite.
        #[arg(long)]
        connection: Option<PathBuf>,
        /// Seed for a random connection when no file is given.
        #[arg(long, default_value_t = 1)]
        connection_seed: u64,
    },
    /// List configurations, one JSON object per line.
    Enumerate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        m0: Option<String>,
        /// Vertex count for `3trees`.
        #[arg(long, default_value_t = 5)]
        v: usize,
    },
}

#[derive(Args, Clone)]
struct RandomArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep each pair not touching `n+1` with this probability.
    #[arg(long, conflicts_with = "edges")]
    density: Option<f64>,
    /// Exact support, e.g. `1-2,1-3,3-5`.
    #[arg(long)]
    edges: Option<String>,
    /// Numerators and denominators are drawn from `1..=range`.
    #[arg(long, default_value_t = 9)]
    range: i64,
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Matrix file in the text format written by `generate`.
    matrix: Option<PathBuf>,
    /// Use a random instance instead of a file.
    #[arg(long, conflicts_with = "matrix")]
    random: bool,
    #[command(flatten)]
    params: RandomArgs,
}

/// Malformed input: exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("HALFTREE_THREADS").ok().and_then(|t| t.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, InputError> {
    match command {
        Command::Generate { random, out } => {
            let a = generate(&random)?;
            let descriptor = descriptor(&random);
            match out {
                Some(path) => {
                    fs::write(&path, a.to_text())?;
                    println!("{}", json!({ "instance": descriptor, "out": path.display().to_string() }));
                }
                None => {
                    print!("{}", a.to_text());
                    eprintln!("{descriptor}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { source, suite, m0, connection, connection_seed } => {
            let start = Instant::now();
            let (a, instance) = load(&source)?;
            let graph = RootedGraph::from_matrix(&a);
            let references = match m0 {
                Some(text) => vec![parse_m0(&a, &graph, &text)?],
                None => enumerate_perfect_matchings(&graph),
            };
            let connection = match connection {
                Some(path) => Some(Connection::from_text(&fs::read_to_string(path)?)?),
                None => None,
            };
            let inst = Instance { matrix: a, graph, references, connection, connection_seed };
            let checks = suites::run(suite, &inst);
            let passed = checks.iter().all(|c| c.status != Status::Fail);
            let report = VerificationReport {
                instance,
                suite: suite.name().into(),
                passed,
                checks,
                elapsed_ms: start.elapsed().as_millis(),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Enumerate { source, kind, m0, v } => {
            let matrix = if kind.needs_matrix() { Some(load(&source)?.0) } else { None };
            let m0 = match (&m0, &matrix) {
                (Some(text), Some(a)) => Some(parse_m0(a, &RootedGraph::from_matrix(a), text)?),
                (Some(_), None) => return Err(InputError("--m0 needs a matrix".into())),
                (None, _) if kind.needs_m0() => return Err(InputError("this kind needs --m0".into())),
                (None, _) => None,
            };
            for line in enumerate::lines(kind, matrix.as_ref(), m0.as_ref(), v)? {
                println!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>, InputError> {
    text.split(',')
        .map(|pair| {
            let (a, b) = pair
                .trim()
                .split_once('-')
                .ok_or_else(|| InputError(format!("bad edge `{pair}`, expected `i-j`")))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect()
}

fn generate(p: &RandomArgs) -> Result<SkewMatrix, InputError> {
    Ok(match (&p.edges, p.density) {
        (Some(edges), _) => random_instance(p.n, p.r, Some(&parse_edges(edges)?), p.seed, p.range)?,
        (None, Some(d)) => random_instance_with_density(p.n, p.r, d, p.seed, p.range)?,
        (None, None) => random_instance(p.n, p.r, None, p.seed, p.range)?,
    })
}

fn descriptor(p: &RandomArgs) -> serde_json::Value {
    json!({
        "n": p.n, "r": p.r, "seed": p.seed, "density": p.density,
        "edges": p.edges, "range": p.range,
    })
}

/// Reads or generates the matrix and rejects anything that is not
/// skew-symmetric with an even non-root block. Row sums are left to the
/// suites so that a broken instance yields a counterexample.
fn load(source: &SourceArgs) -> Result<(SkewMatrix, serde_json::Value), InputError> {
    let (a, descriptor) = match &source.matrix {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let a = SkewMatrix::from_text(&text)?;
            let d = json!({ "file": path.display().to_string(), "n": a.n(), "r": a.r() });
            (a, d)
        }
        None if source.random => (generate(&source.params)?, descriptor(&source.params)),
        None => return Err(InputError("give a matrix file or --random".into())),
    };
    let v = a.validate(false);
    if !v.antisymmetry.is_empty() {
        let (i, j) = v.antisymmetry[0];
        return Err(InputError(format!("matrix is not skew-symmetric at ({i}, {j})")));
    }
    if v.odd_block {
        return Err(InputError(format!("non-root block size n = {} must be even", a.n())));
    }
    if a.r() == 0 {
        return Err(InputError("the instance needs at least one root (r >= 1)".into()));
    }
    Ok((a, descriptor))
}

fn parse_m0(a: &SkewMatrix, g: &RootedGraph, text: &str) -> Result<PerfectMatching, InputError> {
    let m0 = PerfectMatching::parse(a.n(), text)?;
    if !m0.is_in(g) {
        return Err(InputError(format!("{m0} uses a pair that is not an edge of the graph")));
    }
    Ok(m0)
}
