//! `p4forge`: recognize, count, sample and analyse graphs of the six
//! P4-restricted classes from the command line.
//!
//! Exit status is 0 on success, 1 when the request fails (unknown class,
//! malformed graph, a size bound, a failed verification) and 2 on a usage
//! error.

mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use p4forge::asymptotics::{k_prime, singularity_report};
use p4forge::classes::{membership, GraphClass};
use p4forge::decomposition::canonical_tree;
use p4forge::egf::ClassSeriesBundle;
use p4forge::graph::LabeledGraph;
use p4forge::occurrence::p4_tilde;
use p4forge::pattern::pattern_counts;
use p4forge::random::RandomSource;
use p4forge::sampler::{build_tables, empirical_stats_with};
use p4forge::tree::DecoratedTree;

/// Version of every JSON document this tool writes.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "p4forge", version, about = "Counting, recognition and uniform sampling of P4-restricted graph classes")]
struct Cli {
    /// Seed of the random stream used by `sample` and `stats`.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Target absolute accuracy of the singularity and derived constants.
    #[arg(long, global = true, env = "P4FORGE_PRECISION", default_value_t = 1e-12)]
    precision: f64,
    /// Report progress on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide membership of a graph (JSON) in one class or all of them.
    Recognize {
        #[command(flatten)]
        class: ClassArg,
        #[command(flatten)]
        input: InputArg,
    },
    /// Print the canonical modular-decomposition tree of a graph (JSON).
    Decompose {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value_t = TreeFormat::Sexp)]
        format: TreeFormat,
    },
    /// Exact number of labeled graphs of a class.
    Count {
        #[command(flatten)]
        class: ClassArg,
        /// A single size.
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        n: Option<usize>,
        /// A range of sizes `A..B` (inclusive).
        #[arg(long)]
        table: Option<String>,
        #[command(flatten)]
        output: TableOutput,
    },
    /// Dominant singularity, growth constant and K of the labeled P4.
    Constants {
        #[command(flatten)]
        class: ClassArg,
        #[command(flatten)]
        output: TableOutput,
    },
    /// Exact number and probability of marked copies of a pattern tree.
    Pattern {
        #[arg(long)]
        class: GraphClass,
        /// Pattern tree as an S-expression, e.g. `(J 1 2)`.
        #[arg(long)]
        tau: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Uniform random graphs or trees of a class.
    Sample {
        #[arg(long)]
        class: GraphClass,
        #[arg(long)]
        n: usize,
        /// Number of samples; `pgm` and `dot` take exactly one.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value_t = SampleFormat::Json)]
        format: SampleFormat,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo occurrence and induced-subtree statistics.
    Stats {
        #[arg(long)]
        class: GraphClass,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        output: TableOutput,
    },
    /// Run the oracle equivalences and reference tables.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Level::Desk)]
        level: verify::Level,
    },
}

#[derive(Args, Debug)]
struct ClassArg {
    /// Class name, or `all`.
    #[arg(long, default_value = "all")]
    class: String,
}

impl ClassArg {
    fn classes(&self) -> Result<Vec<GraphClass>> {
        if self.class.eq_ignore_ascii_case("all") {
            return Ok(GraphClass::ALL.to_vec());
        }
        Ok(vec![self.class.parse()?])
    }
}

#[derive(Args, Debug)]
struct InputArg {
    /// Graph file in JSON; standard input when absent or `-`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

impl InputArg {
    fn graph(&self) -> Result<LabeledGraph> {
        let text = match &self.input {
            Some(path) if path.as_os_str() != "-" => {
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
            }
            _ => {
                let mut text = String::new();
                io::stdin().read_to_string(&mut text).context("reading standard input")?;
                text
            }
        };
        Ok(LabeledGraph::from_json_str(&text)?)
    }
}

#[derive(Args, Debug)]
struct TableOutput {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TreeFormat {
    Sexp,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SampleFormat {
    /// Graph JSON, one document per line.
    Json,
    /// Decomposition tree, one S-expression per line.
    Sexp,
    /// Decomposition tree in Graphviz format.
    Dot,
    /// Adjacency matrix as a plain greyscale image, edges black.
    Pgm,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// A combination of arguments that clap cannot rule out by itself.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Runs one command; `Ok(false)` means it ran but reported a failure.
fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Recognize { class, input } => recognize(&class.classes()?, &input.graph()?, out)?,
        Command::Decompose { input, format } => {
            let tree = canonical_tree(&input.graph()?)?;
            match format {
                TreeFormat::Sexp => writeln!(out, "{}", tree.to_sexp())?,
                TreeFormat::Dot => write!(out, "{}", tree.to_dot())?,
            }
        }
        Command::Count { class, n, table, output } => {
            let (lo, hi) = match (n, table) {
                (Some(n), _) => (*n, *n),
                (None, Some(range)) => parse_range(range)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            count(&class.classes()?, lo, hi, n.is_some(), output, out)?;
        }
        Command::Constants { class, output } => constants(&class.classes()?, cli.precision, output, out)?,
        Command::Pattern { class, tau, n, json } => pattern(*class, tau, *n, *json, out)?,
        Command::Sample { class, n, count, format, out: path } => {
            if *count == 0 || (*count > 1 && matches!(format, SampleFormat::Pgm | SampleFormat::Dot)) {
                bail!(UsageError("--count must be positive, and 1 with --format pgm or dot".into()));
            }
            let text = sample(*class, *n, *count, *format, cli.seed)?;
            match path {
                Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Stats { class, n, trials, output } => stats(*class, *n, *trials, cli.seed, output, out)?,
        Command::Verify { level } => return verify::run(*level, cli.precision, cli.verbose, out),
    }
    Ok(true)
}

fn parse_range(text: &str) -> Result<(usize, usize)> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| UsageError(format!("bad range `{text}`, expected A..B")));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => (1, parse(text)?),
    };
    if lo == 0 || lo > hi {
        bail!(UsageError(format!("bad range `{text}`, expected 1 <= A <= B")));
    }
    Ok((lo, hi))
}

fn recognize(classes: &[GraphClass], g: &LabeledGraph, out: &mut dyn Write) -> Result<()> {
    let mut results = Vec::new();
    for &class in classes {
        let report = membership(g, class)?;
        results.push(json!({
            "class": class.name(),
            "member": report.member,
            "witness_tree": report.member.then(|| report.tree.to_sexp()),
            "violating_node": report.violation.map(|(node, reason)| json!({"node": node, "reason": reason})),
        }));
    }
    let doc = if results.len() == 1 {
        let mut single = results.pop().expect("one result");
        single["schema_version"] = json!(SCHEMA_VERSION);
        single
    } else {
        json!({"schema_version": SCHEMA_VERSION, "results": results})
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

fn count(classes: &[GraphClass], lo: usize, hi: usize, single: bool, fmt: &TableOutput, out: &mut dyn Write) -> Result<()> {
    let bundles: Vec<(GraphClass, ClassSeriesBundle)> =
        classes.iter().map(|&c| (c, ClassSeriesBundle::new(c, hi))).collect();
    let value = |b: &ClassSeriesBundle, n: usize| b.graph_count(n).map_err(anyhow::Error::from);
    if fmt.json {
        let mut rows = Vec::new();
        for (class, b) in &bundles {
            for n in lo..=hi {
                rows.push(json!({"class": class.name(), "n": n, "count": value(b, n)?.to_string()}));
            }
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({"schema_version": SCHEMA_VERSION, "rows": rows}))?)?;
    } else if fmt.csv {
        writeln!(out, "class,n,count")?;
        for (class, b) in &bundles {
            for n in lo..=hi {
                writeln!(out, "{class},{n},{}", value(b, n)?)?;
            }
        }
    } else if single && bundles.len() == 1 {
        writeln!(out, "{}", value(&bundles[0].1, lo)?)?;
    } else {
        for (class, b) in &bundles {
            for n in lo..=hi {
                writeln!(out, "{:<11} {n:>5} {}", class.name(), value(b, n)?)?;
            }
        }
    }
    Ok(())
}

fn constants(classes: &[GraphClass], precision: f64, fmt: &TableOutput, out: &mut dyn Write) -> Result<()> {
    let mut rows = Vec::new();
    for &class in classes {
        let s = singularity_report(class, precision)?;
        let k = k_prime(&p4_tilde(), class, precision)?.k;
        rows.push((class, s, k));
    }
    if fmt.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(class, s, k)| {
                json!({"class": class.name(), "R": s.r, "R_inv": s.r_inv, "kappa": s.kappa, "C": s.c, "K_P4tilde": k})
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({"schema_version": SCHEMA_VERSION, "rows": rows}))?)?;
    } else if fmt.csv {
        writeln!(out, "class,R,R_inv,kappa,C,K_P4tilde")?;
        for (class, s, k) in &rows {
            writeln!(out, "{class},{:.12},{:.12},{:.12},{:.12},{k:.12}", s.r, s.r_inv, s.kappa, s.c)?;
        }
    } else {
        writeln!(out, "{:<11} {:>12} {:>12} {:>12} {:>12} {:>12}", "class", "R^-1", "R", "kappa", "C", "K_P4tilde")?;
        for (class, s, k) in &rows {
            writeln!(out, "{:<11} {:>12.8} {:>12.8} {:>12.8} {:>12.8} {k:>12.8}", class.name(), s.r_inv, s.r, s.kappa, s.c)?;
        }
    }
    Ok(())
}

fn pattern(class: GraphClass, tau: &str, n: usize, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let tau = DecoratedTree::parse_sexp(tau)?;
    let l = tau.size();
    if n < l {
        bail!("size {n} is below the pattern size {l}");
    }
    let bundle = ClassSeriesBundle::new(class, n);
    let marked = pattern_counts(&tau, &bundle)?.count(n);
    let graphs = bundle.t().count(n);
    let falling: BigInt = (n - l + 1..=n).fold(BigInt::one(), |acc, i| acc * i);
    let per_graph = BigRational::new(marked.clone(), graphs.clone());
    let probability = BigRational::new(marked.clone(), falling * graphs);
    let float = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
    if as_json {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "class": class.name(),
            "tau": tau.to_sexp(),
            "n": n,
            "marked_trees": marked.to_string(),
            "expected_copies": per_graph.to_string(),
            "expected_copies_float": float(&per_graph),
            "probability": probability.to_string(),
            "probability_float": float(&probability),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else {
        writeln!(out, "marked trees      {marked}")?;
        writeln!(out, "expected copies   {per_graph} ~ {:.12}", float(&per_graph))?;
        writeln!(out, "probability       {probability} ~ {:.12}", float(&probability))?;
    }
    Ok(())
}

fn sample(class: GraphClass, n: usize, count: usize, format: SampleFormat, seed: u64) -> Result<String> {
    let tables = build_tables(class, n)?;
    let mut rng = RandomSource::new(seed);
    let mut text = String::new();
    for _ in 0..count {
        let tree = tables.sample_tree(n, &mut rng)?;
        match format {
            SampleFormat::Json => {
                text.push_str(&tree.graph_of()?.to_json_string());
                text.push('\n');
            }
            SampleFormat::Sexp => {
                text.push_str(&tree.to_sexp());
                text.push('\n');
            }
            SampleFormat::Dot => text.push_str(&tree.to_dot()),
            SampleFormat::Pgm => text.push_str(&adjacency_pgm(&tree.graph_of()?)),
        }
    }
    Ok(text)
}

/// Plain (`P2`) greyscale image of the adjacency matrix in label order.
fn adjacency_pgm(g: &LabeledGraph) -> String {
    let n = g.order();
    let mut text = format!("P2\n{n} {n}\n1\n");
    for u in 0..n {
        let row: Vec<&str> = (0..n).map(|v| if g.has_edge(u, v) { "0" } else { "1" }).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    text
}

fn stats(class: GraphClass, n: usize, trials: usize, seed: u64, fmt: &TableOutput, out: &mut dyn Write) -> Result<()> {
    let tables = build_tables(class, n)?;
    let report = empirical_stats_with(&tables, n, trials, &RandomSource::new(seed))?;
    if fmt.json {
        let mut doc = serde_json::to_value(&report)?;
        doc["schema_version"] = json!(SCHEMA_VERSION);
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else if fmt.csv {
        writeln!(out, "statistic,mean,std_error")?;
        writeln!(out, "occ_p4_over_n,{},{}", report.occ_p4_over_n.mean, report.occ_p4_over_n.std_error)?;
        let b = report.occ_bull_over_n_three_halves;
        writeln!(out, "occ_bull_over_n_three_halves,{},{}", b.mean, b.std_error)?;
        for f in &report.subtree_frequencies {
            writeln!(out, "\"subtree {} {}\",{},{}", f.ell, f.shape.replace('"', "\"\""), f.frequency.mean, f.frequency.std_error)?;
        }
    } else {
        writeln!(out, "{class}, n = {n}, {trials} trials")?;
        let a = report.occ_p4_over_n;
        let b = report.occ_bull_over_n_three_halves;
        writeln!(out, "Occ(P4)/n            {:.6} +- {:.6}", a.mean, a.std_error)?;
        writeln!(out, "Occ(bull)/n^(3/2)    {:.6} +- {:.6}", b.mean, b.std_error)?;
        for f in &report.subtree_frequencies {
            writeln!(out, "subtree ell={} {:<24} {:.4} +- {:.4}", f.ell, f.shape, f.frequency.mean, f.frequency.std_error)?;
        }
    }
    Ok(())
}
