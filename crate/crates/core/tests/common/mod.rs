#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use freqkg::rules::NamedRule;
use freqkg::txdb::{parse_planted_rules, PlantedRule, TransactionDatabase};
use freqkg::{ItemId, MiningConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

pub fn planted(name: &str) -> Vec<PlantedRule> {
    parse_planted_rules(read_data(name).as_bytes()).unwrap()
}

/// The reference rule table as rule records over 10,000 transactions.
pub fn reference_rules_named() -> Vec<NamedRule> {
    planted("reference_rules.csv")
        .into_iter()
        .map(|r| NamedRule::from_metrics(r.antecedent, r.consequent, r.support, r.confidence, 10_000).unwrap())
        .collect()
}

/// Random database over `items` items named `i0..`, up to `max_tx` transactions.
pub fn random_db(rng: &mut impl Rng, items: usize, max_tx: usize) -> TransactionDatabase {
    let n = rng.gen_range(0..=max_tx);
    let rows: Vec<Vec<String>> = (0..n)
        .map(|_| {
            let p = rng.gen_range(0.1..0.7);
            (0..items).filter(|_| rng.gen_bool(p)).map(|i| format!("i{i}")).collect()
        })
        .collect();
    TransactionDatabase::from_names(rows).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exhaustive rule enumeration: every frequent itemset, every non-empty
/// proper subset as antecedent, kept iff the exact confidence passes.
pub fn enumerate_rules(
    counts: &BTreeMap<Vec<ItemId>, u64>,
    config: &MiningConfig,
) -> BTreeSet<(Vec<ItemId>, Vec<ItemId>, u64, u64)> {
    let mut out = BTreeSet::new();
    for (items, &count) in counts.iter().filter(|(k, _)| k.len() >= 2) {
        let k = items.len();
        for mask in 1..(1u32 << k) - 1 {
            let a: Vec<ItemId> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| items[b]).collect();
            let b: Vec<ItemId> = (0..k).filter(|b| mask & (1 << b) == 0).map(|b| items[b]).collect();
            let count_a = counts[&a];
            if config.min_confidence.admits(count, count_a) {
                out.insert((a, b, count, count_a));
            }
        }
    }
    out
}
