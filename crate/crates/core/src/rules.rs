//! Support, confidence and lift, strong-rule derivation, ranking and
//! rendering.
//!
//! Rules keep their integer counts; decimals are produced only when a rule
//! is rendered or serialized.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apriori::{join_candidates, prune_candidates};
use crate::itemset::FrequentItemset;
use crate::txdb::{Catalog, ItemId, MiningConfig};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("frequent itemsets are not downward closed: no count for {0}")]
    MissingSubset(String),
    #[error("malformed rule document: {0}")]
    Format(String),
}

/// Fraction of all `n` transactions that contain `A ∪ B`.
pub fn support(count_ab: u64, n: u64) -> Result<f64, RuleError> {
    if n == 0 {
        return Err(RuleError::Argument("support needs at least one transaction".into()));
    }
    if count_ab > n {
        return Err(RuleError::Argument(format!("count {count_ab} exceeds transaction total {n}")));
    }
    Ok(count_ab as f64 / n as f64)
}

/// Fraction of `A`-transactions that also contain `B`, i.e. P(B|A).
pub fn confidence(count_ab: u64, count_a: u64) -> Result<f64, RuleError> {
    if count_a == 0 {
        return Err(RuleError::Argument("confidence needs a non-zero antecedent count".into()));
    }
    if count_ab > count_a {
        return Err(RuleError::Argument(format!(
            "joint count {count_ab} exceeds antecedent count {count_a}"
        )));
    }
    Ok(count_ab as f64 / count_a as f64)
}

/// `confidence(A⇒B) / support(B)`; 1.0 means A and B are independent.
pub fn lift(confidence_ab: f64, support_b: f64) -> Result<f64, RuleError> {
    if support_b <= 0.0 || !support_b.is_finite() {
        return Err(RuleError::Argument("lift needs a positive consequent support".into()));
    }
    Ok(confidence_ab / support_b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationRule {
    pub antecedent: Vec<ItemId>,
    pub consequent: Vec<ItemId>,
    /// Transactions containing `A ∪ B`.
    pub count_ab: u64,
    pub count_a: u64,
    pub count_b: u64,
    pub n: u64,
}

impl AssociationRule {
    pub fn support(&self) -> f64 {
        self.count_ab as f64 / self.n as f64
    }

    pub fn confidence(&self) -> f64 {
        self.count_ab as f64 / self.count_a as f64
    }

    /// Computed as `count_ab * n / (count_a * count_b)`, which equals
    /// `confidence / support(B)` without the intermediate rounding.
    pub fn lift(&self) -> f64 {
        (self.count_ab as f64 * self.n as f64) / (self.count_a as f64 * self.count_b as f64)
    }

    pub fn to_named(&self, catalog: &Catalog) -> NamedRule {
        NamedRule {
            antecedent: catalog.names_of(&self.antecedent).iter().map(|s| s.to_string()).collect(),
            consequent: catalog.names_of(&self.consequent).iter().map(|s| s.to_string()).collect(),
            support: self.support(),
            confidence: self.confidence(),
            lift: Some(self.lift()),
            count_ab: self.count_ab,
            count_a: self.count_a,
            n: self.n,
        }
    }
}

/// Derives every rule `A ⇒ I \ A` with confidence >= `min_confidence` from
/// each frequent itemset `I` of size >= 2.
///
/// Consequents grow level-wise per itemset. A consequent is only extended
/// when the rule it forms passes, since moving items from antecedent to
/// consequent can only lower confidence.
pub fn derive_rules(
    frequent: &[FrequentItemset],
    config: &MiningConfig,
    n: usize,
) -> Result<Vec<AssociationRule>, RuleError> {
    let counts: HashMap<&[ItemId], u64> = frequent.iter().map(|f| (f.items(), f.count)).collect();
    let lookup = |items: &[ItemId]| -> Result<u64, RuleError> {
        counts
            .get(items)
            .copied()
            .ok_or_else(|| RuleError::MissingSubset(format!("{items:?}")))
    };

    let mut rules = Vec::new();
    for itemset in frequent.iter().filter(|f| f.len() >= 2) {
        let items = itemset.items();
        let mut level: Vec<Vec<ItemId>> = items.iter().map(|&i| vec![i]).collect();
        while !level.is_empty() && level[0].len() < items.len() {
            let mut passed = Vec::new();
            for consequent in level {
                let antecedent: Vec<ItemId> = items.iter().copied().filter(|i| !consequent.contains(i)).collect();
                let count_a = lookup(&antecedent)?;
                if config.min_confidence.admits(itemset.count, count_a) {
                    rules.push(AssociationRule {
                        antecedent,
                        count_b: lookup(&consequent)?,
                        consequent: consequent.clone(),
                        count_ab: itemset.count,
                        count_a,
                        n: n as u64,
                    });
                    passed.push(consequent);
                }
            }
            if passed.is_empty() {
                break;
            }
            let joined = join_candidates(&passed).expect("consequents of one level share a size");
            level = prune_candidates(joined, &passed);
        }
    }
    rules.sort_by(|a, b| (&a.antecedent, &a.consequent).cmp(&(&b.antecedent, &b.consequent)));
    Ok(rules)
}

/// A rule with item names resolved; the JSON record of the rules file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedRule {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
    /// Absent when the consequent count is unknown.
    pub lift: Option<f64>,
    pub count_ab: u64,
    pub count_a: u64,
    pub n: u64,
}

impl NamedRule {
    /// Builds a record from published percentages, realizing them as counts
    /// over `n` transactions. Lift is left unknown.
    pub fn from_metrics(
        antecedent: Vec<String>,
        consequent: Vec<String>,
        support: f64,
        confidence: f64,
        n: u64,
    ) -> Result<Self, RuleError> {
        if n == 0 || !(support > 0.0 && support <= confidence && confidence <= 1.0) {
            return Err(RuleError::Argument("need n > 0 and 0 < support <= confidence <= 1".into()));
        }
        let count_ab = (support * n as f64).round() as u64;
        let count_a = ((count_ab as f64) / confidence).round() as u64;
        Ok(NamedRule {
            antecedent,
            consequent,
            support: count_ab as f64 / n as f64,
            confidence: count_ab as f64 / count_a.max(1) as f64,
            lift: None,
            count_ab,
            count_a: count_a.max(1),
            n,
        })
    }

    pub fn size(&self) -> usize {
        self.antecedent.len() + self.consequent.len()
    }

    fn compare(&self, other: &Self) -> Ordering {
        let conf = |r: &Self, o: &Self| (r.count_ab as u128) * (o.count_a as u128);
        let sup = |r: &Self, o: &Self| (r.count_ab as u128) * (o.n as u128);
        conf(other, self)
            .cmp(&conf(self, other))
            .then_with(|| sup(other, self).cmp(&sup(self, other)))
            .then_with(|| self.antecedent.cmp(&other.antecedent))
            .then_with(|| self.consequent.cmp(&other.consequent))
    }
}

/// Orders by descending confidence, descending support, then antecedent and
/// consequent names. Metrics are compared exactly through their counts.
pub fn rank_rules(mut rules: Vec<NamedRule>) -> Vec<NamedRule> {
    rules.sort_by(NamedRule::compare);
    rules
}

/// Drops rules whose antecedent plus consequent exceed `max_items`.
pub fn filter_max_rule_size(rules: Vec<NamedRule>, max_items: usize) -> Vec<NamedRule> {
    rules.into_iter().filter(|r| r.size() <= max_items).collect()
}

pub fn percent(value: f64) -> String {
    format!("{:.2}%", value * 100.0)
}

pub fn rules_to_json(rules: &[NamedRule]) -> String {
    let mut out = serde_json::to_string_pretty(rules).expect("rule records always serialize");
    out.push('\n');
    out
}

pub fn rules_from_json(text: &str) -> Result<Vec<NamedRule>, RuleError> {
    let rules: Vec<NamedRule> = serde_json::from_str(text).map_err(|e| RuleError::Format(e.to_string()))?;
    for r in &rules {
        if r.antecedent.is_empty() || r.consequent.is_empty() {
            return Err(RuleError::Format("rule with an empty side".into()));
        }
    }
    Ok(rules)
}

/// Aligned text table: lead term, follow-ups, support, confidence, lift.
pub fn render_table(rules: &[NamedRule]) -> String {
    let header = ["Rule lead term", "Rule follow-ups", "Support", "Confidence", "Lift"];
    let rows: Vec<[String; 5]> = rules
        .iter()
        .map(|r| {
            [
                r.antecedent.join(", "),
                r.consequent.join(", "),
                percent(r.support),
                percent(r.confidence),
                r.lift.map_or_else(|| "-".to_string(), |l| format!("{l:.2}")),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: [&str; 5]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            let pad = w - cell.chars().count();
            if i < 2 {
                s.push_str(cell);
                s.push_str(&" ".repeat(pad));
            } else {
                s.push_str(&" ".repeat(pad));
                s.push_str(cell);
            }
            if i < 4 {
                s.push_str("  ");
            }
        }
        writeln!(out, "{}", s.trim_end()).expect("writing to a String cannot fail");
    };
    line(header);
    line(widths.map(|w| "-".repeat(w)).each_ref().map(String::as_str));
    for row in &rows {
        line(row.each_ref().map(String::as_str));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgrowth::mine_fpgrowth;
    use crate::txdb::TransactionDatabase;

    #[test]
    fn metric_examples() {
        assert_eq!(support(2, 4).unwrap(), 0.5);
        assert_eq!(support(0, 5).unwrap(), 0.0);
        assert_eq!(percent(support(53, 149).unwrap()), "35.57%");
        assert!(support(1, 0).is_err());
        assert!(support(6, 5).is_err());

        assert_eq!(confidence(3, 4).unwrap(), 0.75);
        assert_eq!(confidence(7, 7).unwrap(), 1.0);
        assert!(confidence(0, 0).is_err());

        assert_eq!(lift(0.5, 0.5).unwrap(), 1.0);
        assert!((lift(0.9, 0.3).unwrap() - 3.0).abs() < 1e-12);
        assert!(lift(0.9, 0.0).is_err());
    }

    #[test]
    fn derives_pair_rules() {
        let frequent = vec![
            FrequentItemset::new([ItemId(0)], 3),
            FrequentItemset::new([ItemId(1)], 3),
            FrequentItemset::new([ItemId(0), ItemId(1)], 3),
        ];
        let cfg = MiningConfig::new(0.0, 0.8).unwrap();
        let rules = derive_rules(&frequent, &cfg, 4).unwrap();
        assert_eq!(rules.len(), 2);
        for r in &rules {
            assert_eq!(r.support(), 0.75);
            assert_eq!(r.confidence(), 1.0);
            assert!((r.lift() - 4.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(rules[0].antecedent, [ItemId(0)]);
        assert_eq!(rules[1].antecedent, [ItemId(1)]);

        assert!(derive_rules(&frequent[..2], &cfg, 4).unwrap().is_empty());
        assert!(matches!(
            derive_rules(&frequent[1..], &cfg, 4),
            Err(RuleError::MissingSubset(_))
        ));
    }

    #[test]
    fn multi_item_consequents() {
        let db = TransactionDatabase::from_names([
            vec!["a", "b", "c"],
            vec!["a", "b", "c"],
            vec!["a", "b", "c"],
            vec!["a", "b"],
            vec!["c"],
        ])
        .unwrap();
        let cfg = MiningConfig::new(0.4, 0.7).unwrap();
        let frequent = mine_fpgrowth(&db, &cfg).unwrap();
        let rules = derive_rules(&frequent, &cfg, db.n()).unwrap();
        let named: Vec<String> = rank_rules(rules.iter().map(|r| r.to_named(db.catalog())).collect())
            .iter()
            .map(|r| format!("{:?}=>{:?}", r.antecedent, r.consequent))
            .collect();
        assert!(named.contains(&r#"["c"]=>["a", "b"]"#.to_string()));
        assert!(named.contains(&r#"["a", "c"]=>["b"]"#.to_string()));
        assert_eq!(named[0], r#"["a"]=>["b"]"#);
    }

    fn rule(a: &str, conf: (u64, u64), n: u64) -> NamedRule {
        NamedRule {
            antecedent: vec![a.into()],
            consequent: vec!["Z".into()],
            support: conf.0 as f64 / n as f64,
            confidence: conf.0 as f64 / conf.1 as f64,
            lift: None,
            count_ab: conf.0,
            count_a: conf.1,
            n,
        }
    }

    #[test]
    fn ranking() {
        let lower = rule("A", (9521, 10000), 100_000);
        let higher = rule("B", (956, 1000), 10_000);
        let ranked = rank_rules(vec![lower.clone(), higher.clone()]);
        assert_eq!(ranked, [higher.clone(), lower.clone()]);

        let x = rule("B", (3, 4), 10);
        let y = rule("A", (3, 4), 10);
        assert_eq!(rank_rules(vec![x.clone(), y.clone()]), [y.clone(), x.clone()]);

        // Equal confidence, larger support first.
        let small = rule("A", (3, 4), 10);
        let big = rule("B", (6, 8), 10);
        assert_eq!(rank_rules(vec![small.clone(), big.clone()]), [big, small]);
    }

    #[test]
    fn table_rendering() {
        let r = NamedRule::from_metrics(
            vec!["External pressure test".into()],
            vec!["Lightning impact test".into()],
            0.355,
            0.956,
            10_000,
        )
        .unwrap();
        let text = render_table(&[r]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("Rule lead term"));
        assert!(lines[2].contains("35.50%"));
        assert!(lines[2].contains("95.61%")); // 3550 / 3713
        assert!(lines[2].ends_with('-'));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let r = NamedRule::from_metrics(vec!["a".into()], vec!["b".into()], 0.25, 0.5, 100).unwrap();
        let text = rules_to_json(std::slice::from_ref(&r));
        assert!(text.contains("\"lift\": null"));
        assert_eq!(rules_from_json(&text).unwrap(), [r]);
        assert!(rules_from_json("{").is_err());
        assert!(rules_from_json(r#"[{"antecedent":[],"consequent":["b"],"support":0.1,"confidence":0.2,"lift":null,"count_ab":1,"count_a":5,"n":10}]"#).is_err());
    }
}
