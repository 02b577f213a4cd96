use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use mdag_cli::bench::{self, CSV_HEADER};
use mdag_cli::{dot, format, input};
use mdag_core::builder::stats;
use mdag_core::crosscheck::{cross_check, Mismatch};
use mdag_core::oracle::brute_force_mcs;
use mdag_core::query::{Annotated, EnumCursor};
use mdag_core::{compact_mdag, Builder, Mdag};
use num_bigint::BigUint;

const VERIFY_CAP: usize = 100_000;

#[derive(Parser)]
#[command(name = "mdag", version, about = "Maximal common subsequences of two strings as a compact DAG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    /// First string, or @path to read it from a file.
    #[arg(short, allow_hyphen_values = true)]
    x: String,
    /// Second string, or @path to read it from a file.
    #[arg(short, allow_hyphen_values = true)]
    y: String,
}

#[derive(Args)]
struct GraphFile {
    /// Graph written by `mdag build`.
    #[arg(short = 'g', long = "graph")]
    path: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build the graph for two strings and save it.
    Build {
        #[command(flatten)]
        pair: Pair,
        #[arg(short, long)]
        output: PathBuf,
        /// Keep one character per edge.
        #[arg(long)]
        no_compact: bool,
        /// Check the first 100000 solutions for maximality before saving.
        #[arg(long)]
        verify: bool,
        /// Print size figures to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Number of maximal common subsequences.
    Count(GraphFile),
    /// Solutions in lexicographic order.
    List {
        #[command(flatten)]
        graph: GraphFile,
        #[arg(long)]
        prefix: Option<String>,
        #[arg(long)]
        limit: Option<u64>,
        /// Print each solution as kept length, a tab, and the new suffix.
        #[arg(long)]
        compressed: bool,
    },
    /// The i-th solution, counting from 1.
    Select {
        #[command(flatten)]
        graph: GraphFile,
        #[arg(short)]
        i: String,
    },
    /// Position of a solution, counting from 1.
    Rank {
        #[command(flatten)]
        graph: GraphFile,
        #[arg(short)]
        s: String,
    },
    /// Solutions starting with a prefix.
    Search {
        #[command(flatten)]
        graph: GraphFile,
        #[arg(short)]
        p: String,
    },
    Stats(GraphFile),
    /// Graphviz rendering on stdout.
    ExportDot(GraphFile),
    /// Brute-force solution set (short strings only).
    Oracle(Pair),
    /// Build and compare against the brute-force solution set.
    Check(Pair),
    /// Time random instances; CSV on stdout.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        sigma: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solutions enumerated per instance for the throughput figure.
        #[arg(long, default_value_t = 100_000)]
        enum_cap: u64,
    },
}

enum Failure {
    Data(anyhow::Error),
    Mismatch(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(e)) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(e)) => {
            eprintln!("mismatch: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match command {
        Command::Build {
            pair,
            output,
            no_compact,
            verify,
            stats: show_stats,
        } => {
            let (x, y) = read_pair(&pair)?;
            let pruned = Builder::new().build(&x, &y)?;
            if show_stats {
                print_stats(&mut io::stderr(), &pruned)?;
            }
            let mut g = if no_compact { pruned } else { compact_mdag(pruned) };
            if verify {
                match bench::verify_output(&g, &x, &y, VERIFY_CAP) {
                    Ok(k) => eprintln!("verified {k} solutions"),
                    Err((k, s)) => {
                        return Err(Failure::Data(anyhow!(
                            "solution {k} ({}) is not maximal",
                            s.escape_ascii()
                        )))
                    }
                }
                g.set_verified(true);
            }
            format::save(&g, &output).with_context(|| format!("writing {}", output.display()))?;
        }
        Command::Count(file) => {
            let g = load(&file.path)?;
            writeln!(out, "{}", Annotated::new(&g).count())?;
        }
        Command::List {
            graph,
            prefix,
            limit,
            compressed,
        } => {
            let g = load(&graph.path)?;
            let index = Annotated::new(&g);
            let cursor = match &prefix {
                Some(p) => index.search_cursor(p.as_bytes()),
                None => Some(index.cursor()),
            };
            if let Some(cursor) = cursor {
                drain(cursor, limit.unwrap_or(u64::MAX), compressed, &mut out)?;
            }
        }
        Command::Select { graph, i } => {
            let g = load(&graph.path)?;
            let i = BigUint::from_str(&i).map_err(|_| anyhow!("index must be a positive integer"))?;
            let s = Annotated::new(&g).select(i)?;
            out.write_all(&s)?;
            writeln!(out)?;
        }
        Command::Rank { graph, s } => {
            let g = load(&graph.path)?;
            let r = Annotated::new(&g).rank(s.as_bytes()).context("not a solution")?;
            writeln!(out, "{r}")?;
        }
        Command::Search { graph, p } => {
            let g = load(&graph.path)?;
            let index = Annotated::new(&g);
            let mut err = Ok(());
            let n = index.search_prefix(p.as_bytes(), |s| {
                if err.is_ok() {
                    err = out.write_all(s).and_then(|()| out.write_all(b"\n"));
                }
            });
            err?;
            eprintln!("{n} matches");
        }
        Command::Stats(file) => {
            let g = load(&file.path)?;
            print_stats(&mut out, &g)?;
        }
        Command::ExportDot(file) => {
            let g = load(&file.path)?;
            out.write_all(dot::export_dot(&g).as_bytes())?;
        }
        Command::Oracle(pair) => {
            let (x, y) = read_pair(&pair)?;
            let set = brute_force_mcs(&x, &y)?;
            for s in &set.strings {
                out.write_all(s)?;
                writeln!(out)?;
            }
            eprintln!("{} maximal common subsequences", set.len());
        }
        Command::Check(pair) => {
            let (x, y) = read_pair(&pair)?;
            match cross_check(&x, &y) {
                Ok(a) => writeln!(out, "mdag {} = oracle {}", a.solutions, a.solutions)?,
                Err(e @ (Mismatch::Oracle(_) | Mismatch::Build(_))) => return Err(Failure::Data(e.into())),
                Err(e) => return Err(Failure::Mismatch(e.into())),
            }
        }
        Command::Bench {
            lengths,
            sigma,
            seed,
            enum_cap,
        } => {
            if !(1..=26).contains(&sigma) {
                return Err(Failure::Data(anyhow!("sigma must be between 1 and 26")));
            }
            writeln!(out, "{CSV_HEADER}")?;
            let mut rows = Vec::new();
            for &n in &lengths {
                let row = bench::run_instance(n, sigma, seed, enum_cap)?;
                writeln!(out, "{}", row.csv())?;
                out.flush()?;
                eprintln!("n={n}: {:.0} solutions/s", row.throughput);
                if row.max_lm_multiplicity >= 2 * n.max(1) {
                    return Err(Failure::Data(anyhow!(
                        "n={n}: {} nodes share one (l,m) pair, expected fewer than {}",
                        row.max_lm_multiplicity,
                        2 * n
                    )));
                }
                rows.push(row);
            }
            eprintln!("fitted C = {:.6e} (nodes <= C*n^3 on every row)", bench::cubic_envelope(&rows));
        }
    }
    out.flush()?;
    Ok(())
}

// output closed early, as in `mdag list ... | head`
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn read_pair(pair: &Pair) -> anyhow::Result<(Vec<u8>, Vec<u8>)> {
    Ok((input::read_arg(&pair.x)?, input::read_arg(&pair.y)?))
}

fn load(path: &Path) -> anyhow::Result<Mdag> {
    format::load(path).with_context(|| format!("loading {}", path.display()))
}

fn drain(mut cursor: EnumCursor<'_>, limit: u64, compressed: bool, out: &mut impl Write) -> io::Result<()> {
    let mut emitted = 0;
    while emitted < limit {
        if compressed {
            let Some((keep, suffix)) = cursor.next_delta() else { break };
            write!(out, "{keep}\t")?;
            out.write_all(suffix)?;
        } else {
            let Some(s) = cursor.next_solution() else { break };
            out.write_all(s)?;
        }
        out.write_all(b"\n")?;
        emitted += 1;
    }
    Ok(())
}

fn print_stats(out: &mut impl Write, g: &Mdag) -> io::Result<()> {
    let s = stats(g);
    let index = Annotated::new(g);
    writeln!(out, "stage: {:?}", g.stage())?;
    writeln!(out, "verified: {}", g.is_verified())?;
    writeln!(out, "string lengths: {} {}", g.x_len(), g.y_len())?;
    writeln!(out, "common alphabet: {}", g.sigma())?;
    writeln!(out, "nodes: {}", s.nodes)?;
    writeln!(out, "edges: {}", s.edges)?;
    writeln!(out, "solutions: {}", index.count())?;
    writeln!(out, "(l,m) pairs: {}", s.lm_pairs)?;
    writeln!(out, "max nodes per (l,m): {}", s.max_lm_multiplicity)?;
    writeln!(out, "max out-degree: {}", s.max_out_degree)?;
    writeln!(out, "depth: {}", s.depth)?;
    writeln!(out, "antichain violations: {}", s.antichain_violations)
}
