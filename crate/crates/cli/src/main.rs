use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use splitdec::gen::random_connected;
use splitdec::oracle::reference_tree;
use splitdec::{load_graph, split_decomposition, Graph, SplitTree};
use splitdec_cli::{bench, bench_table, edge_list, parse_sizes, to_dot, to_json, to_text};

#[derive(Parser)]
#[command(name = "splitdec", version, about = "Split decomposition of undirected graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Print the split tree of a connected graph.
    Decompose {
        /// Edge-list file; standard input when absent or `-`.
        input: Option<PathBuf>,
        /// Label of the BFS root; the first vertex by default.
        #[arg(long)]
        root: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also compare with the brute-force tree (small graphs only).
        #[arg(long)]
        verify: bool,
    },
    /// Compare the tree with the brute-force tree.
    Verify {
        input: Option<PathBuf>,
        #[arg(long)]
        root: Option<String>,
    },
    /// Print a seeded random connected graph.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the decomposition on random graphs with the given edge counts.
    Bench {
        #[arg(long, default_value = "1e3,2e3,4e3")]
        sizes: String,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_graph(input: Option<&PathBuf>) -> Result<Graph> {
    let text = match input {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
            s
        }
    };
    Ok(load_graph(&text)?)
}

fn root_of(g: &Graph, root: Option<&str>) -> Result<usize> {
    match root {
        None => Ok(0),
        Some(label) => g.vertex_by_label(label).with_context(|| format!("no vertex labelled `{label}`")),
    }
}

/// Returns the oracle tree when it differs from `t`.
fn check(g: &Graph, r: usize, t: &SplitTree) -> Result<Option<SplitTree>> {
    let want = reference_tree(g, r)?;
    Ok((want.canonical() != t.canonical()).then_some(want))
}

fn run(cli: Cli) -> Result<u8> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Decompose { input, root, format, verify } => {
            let g = read_graph(input.as_ref())?;
            let r = root_of(&g, root.as_deref())?;
            let t = split_decomposition(&g, r)?;
            match format {
                Format::Text => writeln!(out, "{}", to_text(&t, &g, r))?,
                Format::Json => writeln!(out, "{}", serde_json::to_string(&to_json(&t, &g, r))?)?,
                Format::Dot => write!(out, "{}", to_dot(&t, &g))?,
            }
            if verify {
                if let Some(want) = check(&g, r, &t)? {
                    eprintln!("MISMATCH: oracle gives {}", to_text(&want, &g, r));
                    return Ok(2);
                }
                eprintln!("MATCH");
            }
        }
        Command::Verify { input, root } => {
            let g = read_graph(input.as_ref())?;
            let r = root_of(&g, root.as_deref())?;
            let t = split_decomposition(&g, r)?;
            match check(&g, r, &t)? {
                None => writeln!(out, "MATCH {}", to_text(&t, &g, r))?,
                Some(want) => {
                    writeln!(out, "MISMATCH")?;
                    writeln!(out, "  computed: {}", to_text(&t, &g, r))?;
                    writeln!(out, "  oracle:   {}", to_text(&want, &g, r))?;
                    return Ok(2);
                }
            }
        }
        Command::Gen { n, m, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_connected(&mut rng, n, m)?;
            writeln!(out, "# n={n} m={m} seed={seed}")?;
            write!(out, "{}", edge_list(&g))?;
        }
        Command::Bench { sizes, reps, seed } => {
            let sizes = parse_sizes(&sizes)?;
            write!(out, "{}", bench_table(&bench(&sizes, reps, seed)?))?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
