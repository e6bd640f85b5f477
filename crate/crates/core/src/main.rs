use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pebbling::barely::{enumerate_barely, EnumerationOptions, DEFAULT_MAX_QUEUE};
use pebbling::io::{decode_graph6, parse_weighted_graph, spectrum};
use pebbling::oracle::{minimal_sufficient_oracle, pi_oracle, reachable};
use pebbling::reduce::simplify;
use pebbling::solve::{pebbling_number_at, pebbling_numbers_by_goal, SolveOptions};
use pebbling::{Distribution, Error, Vertex, WeightedGraph};

/// Exact pebbling numbers of weighted graphs.
#[derive(Parser)]
#[command(name = "pebbling", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pebbling number of a graph, or of one goal vertex.
    Pi {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        goal: Option<Vertex>,
        #[arg(long)]
        no_simplify: bool,
        #[arg(long)]
        no_squish: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Cap on candidate queue entries per enumeration.
        #[arg(long, default_value_t = DEFAULT_MAX_QUEUE)]
        max_queue: usize,
        /// Print a JSON object with the value of every goal.
        #[arg(long)]
        verbose: bool,
    },
    /// Pebbling number frequencies over a file of graph6 lines.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Apply the closed-form rewrites and print the residue.
    Simplify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        goal: Vertex,
    },
    /// Barely sufficient distributions for a goal.
    Barely {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        goal: Vertex,
        #[arg(long)]
        no_squish: bool,
        #[arg(long)]
        no_arc_prune: bool,
        #[arg(long)]
        no_vertex_prune: bool,
        /// Cap on candidate queue entries.
        #[arg(long, default_value_t = DEFAULT_MAX_QUEUE)]
        max_queue: usize,
    },
    /// Brute-force reference computations for small graphs.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// t-pebbling number of a goal by exhaustive search.
    Pi {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        goal: Vertex,
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
    /// Whether a distribution can put t pebbles on the goal.
    Reachable {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        goal: Vertex,
        /// Comma-separated pebble counts, one per vertex.
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
    /// Barely sufficient distributions by exhaustive search.
    Barely {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        goal: Vertex,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Weighted edge-list file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Unweighted graph as a graph6 string.
    #[arg(long)]
    graph6: Option<String>,
}

impl GraphInput {
    fn load(&self) -> Result<WeightedGraph, Failure> {
        match (&self.graph, &self.graph6) {
            (Some(path), _) => Ok(parse_weighted_graph(&read(path)?)?),
            (None, Some(text)) => Ok(decode_graph6(text)?),
            (None, None) => unreachable!("clap requires one input"),
        }
    }
}

enum Failure {
    Invalid(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn check_goal(g: &WeightedGraph, goal: Vertex) -> Result<(), Failure> {
    if goal < g.vertex_count() {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange {
            vertex: goal,
            n: g.vertex_count(),
        }
        .into())
    }
}

fn format_dist(p: &Distribution) -> String {
    p.counts().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_dist(text: &str, n: usize) -> Result<Distribution, Failure> {
    let counts = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Invalid(format!("invalid distribution {text:?}: {e}")))?;
    if counts.len() != n {
        return Err(Error::Dimension {
            left: counts.len(),
            right: n,
        }
        .into());
    }
    Ok(Distribution::new(counts))
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Invalid(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Pi {
            input,
            goal,
            no_simplify,
            no_squish,
            jobs,
            max_queue,
            verbose,
        } => {
            let g = input.load()?;
            let mut opts = SolveOptions {
                simplify: !no_simplify,
                ..SolveOptions::default()
            };
            opts.enumeration.squish_filter = !no_squish;
            opts.enumeration.max_queue = max_queue;
            let pool = thread_pool(jobs)?;
            match goal {
                Some(x) => {
                    check_goal(&g, x)?;
                    let pi = pool.install(|| pebbling_number_at(&g, x, &opts))?;
                    if verbose {
                        println!("{}", json!({ "pi": pi, "goals": { x.to_string(): pi } }));
                    } else {
                        println!("{pi}");
                    }
                }
                None => {
                    let values = pool.install(|| pebbling_numbers_by_goal(&g, &opts))?;
                    let pi = values.iter().copied().max().unwrap_or(0);
                    if verbose {
                        let goals: serde_json::Map<String, serde_json::Value> =
                            values.iter().enumerate().map(|(x, &v)| (x.to_string(), json!(v))).collect();
                        println!("{}", json!({ "pi": pi, "goals": goals }));
                    } else {
                        println!("{pi}");
                    }
                }
            }
        }
        Command::Spectrum { input, out, jobs } => {
            let text = read(&input)?;
            let table = spectrum(text.lines(), jobs, &SolveOptions::default())?;
            match out {
                Some(path) => fs::write(&path, table.to_tsv())
                    .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
                None => print!("{}", table.to_tsv()),
            }
        }
        Command::Simplify { input, goal } => {
            let g = input.load()?;
            check_goal(&g, goal)?;
            let reduced = simplify(&g, goal)?;
            let ledger = &reduced.ledger;
            println!("offset {}", ledger.offset);
            for step in &ledger.trace {
                println!("rewrite {step}");
            }
            let names: Vec<String> = ledger.name_map.iter().map(|o| o.to_string()).collect();
            println!("vertices {}", names.join(" "));
            println!("goal {}", reduced.goal);
            println!("{}", reduced.graph.vertex_count());
            for (u, v, w) in reduced.graph.edges() {
                println!("{u} {v} {w}");
            }
            if let Some(value) = reduced.terminal_value {
                println!("pi {value}");
            }
        }
        Command::Barely {
            input,
            goal,
            no_squish,
            no_arc_prune,
            no_vertex_prune,
            max_queue,
        } => {
            let g = input.load()?;
            check_goal(&g, goal)?;
            let opts = EnumerationOptions {
                squish_filter: !no_squish,
                use_arc_prune: !no_arc_prune,
                use_vertex_prune: !no_vertex_prune,
                max_queue,
                ..EnumerationOptions::default()
            };
            for p in enumerate_barely(&g, goal, &opts)? {
                println!("{}", format_dist(&p));
            }
        }
        Command::Oracle(command) => match command {
            OracleCommand::Pi { input, goal, t } => {
                let g = input.load()?;
                check_goal(&g, goal)?;
                if t == 0 {
                    return Err(Failure::Invalid("t must be positive".into()));
                }
                println!("{}", pi_oracle(&g, goal, t));
            }
            OracleCommand::Reachable { input, goal, dist, t } => {
                let g = input.load()?;
                check_goal(&g, goal)?;
                if t == 0 {
                    return Err(Failure::Invalid("t must be positive".into()));
                }
                let p = parse_dist(&dist, g.vertex_count())?;
                println!("{}", reachable(&g, &p, goal, t));
            }
            OracleCommand::Barely { input, goal } => {
                let g = input.load()?;
                check_goal(&g, goal)?;
                for p in minimal_sufficient_oracle(&g, goal) {
                    println!("{}", format_dist(&p));
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
