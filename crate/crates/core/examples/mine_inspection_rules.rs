//! Mines ranked association rules from the bundled inspection sample.
//!
//! Run with `cargo run --example mine_inspection_rules [CSV] [MIN_SUPPORT] [MIN_CONFIDENCE]`.

use std::path::PathBuf;

use freqkg::rules::{rank_rules, render_table};
use freqkg::txdb::{parse_transactions_csv, Threshold};
use freqkg::{derive_rules, mine_fpgrowth, MiningConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/inspection_sample.csv"));
    let min_support = Threshold::parse(&args.next().unwrap_or_else(|| "0.1".into()))?;
    let min_confidence = Threshold::parse(&args.next().unwrap_or_else(|| "0.5".into()))?;

    let parsed = parse_transactions_csv(std::fs::File::open(&path)?)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    let db = parsed.db;
    let config = MiningConfig { min_support, min_confidence, max_itemset_size: None };

    let frequent = mine_fpgrowth(&db, &config)?;
    println!(
        "{} transactions, {} distinct items, {} frequent itemsets (min count {})",
        db.n(),
        db.catalog().len(),
        frequent.len(),
        config.min_count(db.n())
    );
    for set in &frequent {
        println!("  {}", set.display(db.catalog()));
    }

    let rules = derive_rules(&frequent, &config, db.n())?;
    let named = rank_rules(rules.iter().map(|r| r.to_named(db.catalog())).collect());
    println!();
    print!("{}", render_table(&named));
    Ok(())
}
