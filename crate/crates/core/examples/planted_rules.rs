//! Plants the fifteen inspection-item rules in 10,000 synthetic
//! transactions, mines them back and reports the deviation per rule.

use freqkg::rules::rank_rules;
use freqkg::txdb::{generate_synthetic, parse_planted_rules, PlantedRule, SyntheticSpec};
use freqkg::{derive_rules, mine_fpgrowth, MiningConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/planted_rules.csv");
    let planted = parse_planted_rules(std::fs::File::open(path)?)?;
    let db = generate_synthetic(&SyntheticSpec { rules: planted.clone(), n: 10_000, noise_items: 10, seed: 2017 })?;

    let config = MiningConfig::new(0.01, 0.6)?;
    let frequent = mine_fpgrowth(&db, &config)?;
    let mined = rank_rules(
        derive_rules(&frequent, &config, db.n())?
            .iter()
            .map(|r| r.to_named(db.catalog()))
            .collect(),
    );
    println!("{} transactions, {} frequent itemsets, {} rules\n", db.n(), frequent.len(), mined.len());

    let label = |r: &PlantedRule| format!("{} => {}", r.antecedent.join(" & "), r.consequent.join(" & "));
    let w = planted.iter().map(|r| label(r).len()).max().unwrap_or(0);
    println!("{:<w$} {:>9} {:>9} {:>11} {:>11}", "planted rule", "support", "mined", "confidence", "mined");
    for want in &planted {
        let label = label(want);
        match mined.iter().find(|r| r.antecedent == want.antecedent && r.consequent == want.consequent) {
            Some(got) => println!(
                "{label:<w$} {:>8.2}% {:>8.2}% {:>10.2}% {:>10.2}%",
                want.support * 100.0,
                got.support * 100.0,
                want.confidence * 100.0,
                got.confidence * 100.0
            ),
            None => println!("{label:<w$} not recovered"),
        }
    }
    Ok(())
}
