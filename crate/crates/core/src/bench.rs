//! Wall-clock comparison of FP-Growth and Apriori on one database.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::apriori::Apriori;
use crate::fpgrowth::FpGrowth;
use crate::itemset::{to_count_map, FrequentItemset, MiningError};
use crate::rules::{derive_rules, RuleError};
use crate::txdb::{MiningConfig, TransactionDatabase};

/// Published single-run reference times (seconds) on the original
/// inspection dataset; informational only.
pub const REFERENCE_APRIORI_SECONDS: f64 = 0.68;
pub const REFERENCE_FPGROWTH_SECONDS: f64 = 0.08;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("FP-Growth and Apriori disagree: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Mining(#[from] MiningError),
    #[error(transparent)]
    Rules(#[from] RuleError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub transactions: usize,
    pub items: usize,
    pub avg_transaction_len: f64,
    pub min_support: f64,
    pub min_confidence: f64,
    pub repetitions: usize,
    pub threads: usize,
    pub apriori_seconds: f64,
    pub fpgrowth_seconds: f64,
    /// Apriori time divided by FP-Growth time.
    pub speedup: f64,
    pub results_equal: bool,
    pub frequent_itemsets: usize,
    pub strong_rules: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Benchmark {
    pub repetitions: usize,
    pub threads: usize,
    /// Drops one itemset from the FP-Growth result before comparison, to
    /// exercise the mismatch path.
    #[doc(hidden)]
    pub corrupt_fpgrowth: bool,
}

impl Default for Benchmark {
    fn default() -> Self {
        Benchmark {
            repetitions: 3,
            threads: 1,
            corrupt_fpgrowth: false,
        }
    }
}

fn timed<T>(reps: usize, mut f: impl FnMut() -> Result<T, MiningError>) -> Result<(T, Duration), MiningError> {
    let warm = f()?;
    let mut best = Duration::MAX;
    for _ in 0..reps {
        let start = Instant::now();
        let out = f()?;
        best = best.min(start.elapsed());
        drop(out);
    }
    Ok((warm, best))
}

impl Benchmark {
    /// Runs each miner once to warm up, then `repetitions` timed runs,
    /// keeping the minimum. Fails if the two itemset->count mappings differ.
    pub fn run(&self, db: &TransactionDatabase, config: &MiningConfig) -> Result<BenchReport, BenchError> {
        if self.repetitions == 0 {
            return Err(BenchError::Argument("repetitions must be at least 1".into()));
        }
        if db.is_empty() {
            return Err(BenchError::Argument("cannot benchmark an empty database".into()));
        }
        let apriori = Apriori { threads: self.threads };
        let fpgrowth = FpGrowth {
            single_path: true,
            threads: self.threads,
        };
        let (a_sets, a_time) = timed(self.repetitions, || apriori.mine(db, config))?;
        let (mut f_sets, f_time) = timed(self.repetitions, || fpgrowth.mine(db, config))?;
        if self.corrupt_fpgrowth {
            f_sets.pop();
        }
        check_equal(&a_sets, &f_sets)?;

        let rules = derive_rules(&f_sets, config, db.n())?;
        let secs = |d: Duration| d.as_secs_f64().max(1e-9);
        let (a, f) = (secs(a_time), secs(f_time));
        Ok(BenchReport {
            transactions: db.n(),
            items: db.catalog().len(),
            avg_transaction_len: db.avg_transaction_len(),
            min_support: config.min_support.value(),
            min_confidence: config.min_confidence.value(),
            repetitions: self.repetitions,
            threads: self.threads,
            apriori_seconds: a,
            fpgrowth_seconds: f,
            speedup: a / f,
            results_equal: true,
            frequent_itemsets: f_sets.len(),
            strong_rules: rules.len(),
        })
    }
}

fn check_equal(apriori: &[FrequentItemset], fpgrowth: &[FrequentItemset]) -> Result<(), BenchError> {
    let a = to_count_map(apriori);
    let f = to_count_map(fpgrowth);
    if a == f {
        return Ok(());
    }
    let only_a = a.iter().filter(|(k, v)| f.get(*k) != Some(v)).count();
    let only_f = f.iter().filter(|(k, v)| a.get(*k) != Some(v)).count();
    Err(BenchError::Mismatch(format!(
        "{only_a} Apriori entries and {only_f} FP-Growth entries have no exact counterpart"
    )))
}

/// Sequential benchmark with `repetitions` timed runs per miner.
pub fn run_benchmark(
    db: &TransactionDatabase,
    config: &MiningConfig,
    repetitions: usize,
) -> Result<BenchReport, BenchError> {
    Benchmark {
        repetitions,
        ..Benchmark::default()
    }
    .run(db, config)
}

impl BenchReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mode = if self.threads == 1 {
            "sequential".to_string()
        } else {
            format!("parallel ({} threads)", self.threads)
        };
        let rows = [
            ("transactions", self.transactions.to_string()),
            ("items", self.items.to_string()),
            ("avg transaction length", format!("{:.2}", self.avg_transaction_len)),
            ("min support", format!("{}", self.min_support)),
            ("min confidence", format!("{}", self.min_confidence)),
            ("mode", mode),
            ("repetitions (min of)", self.repetitions.to_string()),
            ("apriori time (s)", format!("{:.4}", self.apriori_seconds)),
            ("fp-growth time (s)", format!("{:.4}", self.fpgrowth_seconds)),
            ("speedup (apriori / fp-growth)", format!("{:.2}x", self.speedup)),
            ("results equal", self.results_equal.to_string()),
            ("frequent itemsets", self.frequent_itemsets.to_string()),
            ("strong rules", self.strong_rules.to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v}").expect("writing to a String cannot fail");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report always serializes");
        out.push('\n');
        out
    }
}
