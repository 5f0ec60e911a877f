//! Command-line front end: `mine`, `bench`, `gen` and `kg`.
//!
//! Exit codes: 0 success, 1 usage or argument error (including a benchmark
//! result mismatch), 2 unreadable or malformed input data.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::apriori::Apriori;
use crate::bench::{BenchError, Benchmark};
use crate::fpgrowth::FpGrowth;
use crate::kgraph::{
    export_dot, export_graphml, ingest_triples, load_graph, parse_triples, query_neighbors, rules_to_graph,
    save_graph, AliasMap, NodeKey, NodeLabel, PropertyGraph, QueryFilter,
};
use crate::rules::{derive_rules, filter_max_rule_size, rank_rules, render_table, rules_from_json, rules_to_json};
use crate::txdb::{
    generate_dense, generate_synthetic, parse_planted_rules, parse_transactions_csv, write_transactions_csv,
    MiningConfig, SyntheticSpec, Threshold, TransactionDatabase,
};

#[derive(Debug, Parser)]
#[command(name = "freqkg", version, about = "Inspection-item rule mining and knowledge-graph tooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine ranked association rules from a transactions CSV.
    Mine(MineArgs),
    /// Time FP-Growth against Apriori on one database.
    Bench(BenchArgs),
    /// Generate a synthetic transactions CSV with planted rules.
    Gen(GenArgs),
    /// Build, query and export the knowledge graph.
    #[command(subcommand)]
    Kg(KgCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algorithm {
    Fpgrowth,
    Apriori,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Graphml,
}

fn threshold(s: &str) -> Result<Threshold, String> {
    Threshold::parse(s).map_err(|e| e.to_string())
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args)]
struct Thresholds {
    /// Minimum support, as a fraction ("0.01") or percentage ("1%").
    #[arg(long, value_parser = threshold, default_value = "0.01")]
    min_support: Threshold,
    /// Minimum confidence, as a fraction ("0.6") or percentage ("60%").
    #[arg(long, value_parser = threshold, default_value = "0.6")]
    min_confidence: Threshold,
    /// Worker threads for mining.
    #[arg(long, env = "FREQKG_THREADS", default_value = "1", value_parser = positive)]
    threads: usize,
}

impl Thresholds {
    fn config(&self) -> MiningConfig {
        MiningConfig {
            min_support: self.min_support,
            min_confidence: self.min_confidence,
            max_itemset_size: None,
        }
    }
}

#[derive(Debug, Args)]
struct MineArgs {
    /// Transactions CSV (`device_number,failed_items`).
    csv: PathBuf,
    #[command(flatten)]
    thresholds: Thresholds,
    #[arg(long, value_enum, default_value = "fpgrowth")]
    algorithm: Algorithm,
    /// Only render rules with at most this many items in total.
    #[arg(long, value_parser = positive)]
    max_rule_size: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: RuleFormat,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Transactions CSV to benchmark on.
    #[arg(conflicts_with_all = ["synthetic", "dense"])]
    csv: Option<PathBuf>,
    /// Planted-rules CSV; the database is generated from it.
    #[arg(long, conflicts_with = "dense")]
    synthetic: Option<PathBuf>,
    /// Uniform random baskets (see --items and --mean-len).
    #[arg(long)]
    dense: bool,
    /// Transactions to generate for --synthetic / --dense.
    #[arg(long, default_value = "10000", value_parser = positive)]
    n: usize,
    #[arg(long, default_value = "50", value_parser = positive)]
    items: usize,
    #[arg(long, default_value = "8", value_parser = positive)]
    mean_len: usize,
    #[arg(long, default_value = "0")]
    noise_items: usize,
    #[arg(long, default_value = "1")]
    seed: u64,
    #[command(flatten)]
    thresholds: Thresholds,
    /// Timed repetitions per algorithm (minimum is reported).
    #[arg(long, default_value = "3")]
    reps: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    #[arg(long, hide = true)]
    inject_mismatch: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Planted-rules CSV (`antecedent,consequent,support,confidence`).
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "0")]
    noise_items: usize,
    #[arg(long, default_value = "1")]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum KgCommand {
    /// Build a graph document from triples and optional mined rules.
    Build {
        #[arg(long)]
        triples: PathBuf,
        /// Rules JSON written by `mine --format json`.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// `alias<TAB>canonical` name merges applied to the triples.
        #[arg(long)]
        aliases: Option<PathBuf>,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the neighborhood of a node as triples.
    Query {
        #[arg(long)]
        graph: PathBuf,
        /// Start node as `label:name`.
        #[arg(long)]
        start: String,
        #[arg(long, default_value = "1")]
        depth: usize,
        /// Restrict visited nodes to these labels (repeatable).
        #[arg(long = "label")]
        labels: Vec<String>,
        /// Restrict traversed edges to these relations (repeatable).
        #[arg(long = "relation")]
        relations: Vec<String>,
    },
    /// Export the graph to DOT or GraphML.
    Export {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) => m,
        }
    }
}

fn data<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Data(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(data(path))
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("stdout: {e}"))),
    }
}

fn load_transactions(path: &Path, stderr: &mut dyn Write) -> Result<TransactionDatabase, Failure> {
    let file = fs::File::open(path).map_err(data(path))?;
    let parsed = parse_transactions_csv(file).map_err(data(path))?;
    for w in &parsed.warnings {
        let _ = writeln!(stderr, "warning: {}: {w}", path.display());
    }
    Ok(parsed.db)
}

fn cmd_mine(args: MineArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let db = load_transactions(&args.csv, stderr)?;
    let config = args.thresholds.config();
    let threads = args.thresholds.threads;
    let frequent = match args.algorithm {
        Algorithm::Fpgrowth => FpGrowth {
            single_path: true,
            threads,
        }
        .mine(&db, &config),
        Algorithm::Apriori => Apriori { threads }.mine(&db, &config),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let rules = derive_rules(&frequent, &config, db.n()).map_err(|e| Failure::Data(e.to_string()))?;
    let mut named = rank_rules(rules.iter().map(|r| r.to_named(db.catalog())).collect());
    if let Some(max) = args.max_rule_size {
        named = filter_max_rule_size(named, max);
    }
    let text = match args.format {
        RuleFormat::Json => rules_to_json(&named),
        RuleFormat::Table => render_table(&named),
    };
    let _ = writeln!(
        stderr,
        "{} transactions, {} frequent itemsets, {} rules written",
        db.n(),
        frequent.len(),
        named.len()
    );
    emit(args.out.as_deref(), stdout, &text)
}

fn cmd_bench(args: BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let db = if let Some(csv) = &args.csv {
        load_transactions(csv, stderr)?
    } else if let Some(spec) = &args.synthetic {
        let rules = parse_planted_rules(read(spec)?.as_bytes()).map_err(data(spec))?;
        generate_synthetic(&SyntheticSpec {
            rules,
            n: args.n,
            noise_items: args.noise_items,
            seed: args.seed,
        })
        .map_err(|e| Failure::Usage(e.to_string()))?
    } else if args.dense {
        generate_dense(args.n, args.items, args.mean_len, args.seed).map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        return Err(Failure::Usage("bench needs a CSV path, --synthetic FILE or --dense".into()));
    };
    let bench = Benchmark {
        repetitions: args.reps,
        threads: args.thresholds.threads,
        corrupt_fpgrowth: args.inject_mismatch,
    };
    let report = bench.run(&db, &args.thresholds.config()).map_err(|e| match e {
        BenchError::Rules(e) => Failure::Data(e.to_string()),
        other => Failure::Usage(other.to_string()),
    })?;
    let text = match args.format {
        ReportFormat::Text => report.render_text(),
        ReportFormat::Json => report.to_json(),
    };
    emit(None, stdout, &text)
}

fn cmd_gen(args: GenArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let rules = parse_planted_rules(read(&args.rules)?.as_bytes()).map_err(data(&args.rules))?;
    let db = generate_synthetic(&SyntheticSpec {
        rules,
        n: args.n,
        noise_items: args.noise_items,
        seed: args.seed,
    })
    .map_err(|e| Failure::Usage(e.to_string()))?;
    emit(args.out.as_deref(), stdout, &write_transactions_csv(&db))
}

fn cmd_kg(cmd: KgCommand, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        KgCommand::Build {
            triples,
            rules,
            aliases,
            graph,
        } => {
            let mut parsed = parse_triples(&read(&triples)?).map_err(data(&triples))?;
            if let Some(path) = &aliases {
                parsed = AliasMap::parse(&read(path)?).map_err(data(path))?.apply(&parsed);
            }
            let mut g = PropertyGraph::new();
            let report = ingest_triples(&mut g, &parsed);
            let _ = writeln!(
                stderr,
                "triples: {} nodes added, {} edges added, {} duplicates skipped",
                report.nodes_added, report.edges_added, report.duplicates_skipped
            );
            if let Some(path) = &rules {
                let named = rules_from_json(&read(path)?).map_err(data(path))?;
                let report = rules_to_graph(&mut g, &named);
                let _ = writeln!(
                    stderr,
                    "rules: {} nodes added, {} edges added, {} edges updated",
                    report.nodes_added, report.edges_added, report.edges_updated
                );
            }
            emit(Some(&graph), stdout, &save_graph(&g))
        }
        KgCommand::Query {
            graph,
            start,
            depth,
            labels,
            relations,
        } => {
            let g = load_graph(&read(&graph)?).map_err(data(&graph))?;
            let start: NodeKey = start.parse().map_err(Failure::Usage)?;
            let labels = if labels.is_empty() {
                None
            } else {
                Some(
                    labels
                        .iter()
                        .map(|l| l.parse::<NodeLabel>())
                        .collect::<Result<_, _>>()
                        .map_err(Failure::Usage)?,
                )
            };
            let relations = (!relations.is_empty()).then(|| relations.into_iter().collect());
            let sub = query_neighbors(&g, &start, depth, &QueryFilter { labels, relations })
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let mut text = String::new();
            for (key, _) in sub.nodes() {
                text.push_str(&format!("# node\t{}\t{}\n", key.label, key.name));
            }
            for t in sub.triples() {
                text.push_str(&format!("{t}\n"));
            }
            emit(None, stdout, &text)
        }
        KgCommand::Export { graph, format, out } => {
            let g = load_graph(&read(&graph)?).map_err(data(&graph))?;
            let text = match format {
                GraphFormat::Dot => export_dot(&g),
                GraphFormat::Graphml => export_graphml(&g),
            };
            emit(out.as_deref(), stdout, &text)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                1
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Mine(args) => cmd_mine(args, stdout, stderr),
        Command::Bench(args) => cmd_bench(args, stdout, stderr),
        Command::Gen(args) => cmd_gen(args, stdout),
        Command::Kg(cmd) => cmd_kg(cmd, stdout, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}
