//! Items, transactions and the transaction database.
//!
//! A transaction is the set of failed inspection items recorded for one
//! sampled device. Item names are interned into dense ids in order of first
//! appearance, so the catalog doubles as the column order for every miner.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::Read;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TxdbError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("invalid argument: {0}")]
    Argument(String),
}

/// Dense item identifier, assigned in first-appearance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Trims the name and collapses internal whitespace runs to a single space.
/// Case is preserved.
pub fn normalize_name(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Bidirectional item-name interner.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    names: Vec<String>,
    index: HashMap<String, ItemId>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `name`, allocating the next id if unseen.
    /// Empty names (after normalization) are rejected.
    pub fn intern(&mut self, name: &str) -> Option<ItemId> {
        let name = normalize_name(name);
        if name.is_empty() {
            return None;
        }
        if let Some(&id) = self.index.get(&name) {
            return Some(id);
        }
        let id = ItemId(self.names.len() as u32);
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Some(id)
    }

    pub fn id(&self, name: &str) -> Option<ItemId> {
        self.index.get(&normalize_name(name)).copied()
    }

    pub fn name(&self, id: ItemId) -> &str {
        &self.names[id.index()]
    }

    pub fn get_name(&self, id: ItemId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ItemId> {
        (0..self.names.len() as u32).map(ItemId)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn names_of<'a>(&'a self, items: &'a [ItemId]) -> Vec<&'a str> {
        items.iter().map(|&id| self.name(id)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub source_id: String,
    items: Vec<ItemId>,
}

impl Transaction {
    /// Builds a transaction, sorting and deduplicating `items`.
    pub fn new(source_id: impl Into<String>, items: impl IntoIterator<Item = ItemId>) -> Self {
        let mut items: Vec<ItemId> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        Self {
            source_id: source_id.into(),
            items,
        }
    }

    /// Items in ascending id order, duplicate-free.
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.items.binary_search(&item).is_ok()
    }

    /// True when every item of the sorted slice `itemset` is present.
    pub fn contains_all(&self, itemset: &[ItemId]) -> bool {
        let mut it = self.items.iter();
        'outer: for want in itemset {
            for have in it.by_ref() {
                if have == want {
                    continue 'outer;
                }
                if have > want {
                    return false;
                }
            }
            return false;
        }
        true
    }
}

/// Immutable collection of transactions over an interned item catalog.
#[derive(Debug)]
pub struct TransactionDatabase {
    catalog: Catalog,
    transactions: Vec<Transaction>,
    scans: AtomicUsize,
}

impl Clone for TransactionDatabase {
    fn clone(&self) -> Self {
        Self {
            catalog: self.catalog.clone(),
            transactions: self.transactions.clone(),
            scans: AtomicUsize::new(0),
        }
    }
}

impl PartialEq for TransactionDatabase {
    fn eq(&self, other: &Self) -> bool {
        self.catalog == other.catalog && self.transactions == other.transactions
    }
}

impl Eq for TransactionDatabase {}

impl TransactionDatabase {
    /// Assembles a database, checking that every item id is cataloged.
    pub fn new(catalog: Catalog, transactions: Vec<Transaction>) -> Result<Self, TxdbError> {
        for (i, t) in transactions.iter().enumerate() {
            if let Some(bad) = t.items.iter().find(|id| id.index() >= catalog.len()) {
                return Err(TxdbError::Argument(format!(
                    "transaction {} references uncataloged item {bad}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            catalog,
            transactions,
            scans: AtomicUsize::new(0),
        })
    }

    /// Convenience constructor from item-name lists; source ids are `T1..TN`.
    pub fn from_names<I, T, S>(rows: I) -> Result<Self, TxdbError>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = DatabaseBuilder::new();
        for (i, row) in rows.into_iter().enumerate() {
            builder.push(format!("T{}", i + 1), row)?;
        }
        Ok(builder.build())
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// Transaction count, the |D| of the support formula.
    pub fn n(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    /// Starts a full pass over the transactions and records it in the
    /// scan counter.
    pub fn scan(&self) -> std::slice::Iter<'_, Transaction> {
        self.scans.fetch_add(1, Ordering::Relaxed);
        self.transactions.iter()
    }

    /// Number of full passes started through [`TransactionDatabase::scan`].
    pub fn scan_count(&self) -> usize {
        self.scans.load(Ordering::Relaxed)
    }

    pub fn avg_transaction_len(&self) -> f64 {
        if self.transactions.is_empty() {
            return 0.0;
        }
        let total: usize = self.transactions.iter().map(Transaction::len).sum();
        total as f64 / self.transactions.len() as f64
    }
}

/// Incremental constructor that interns names in first-appearance order.
#[derive(Debug, Default)]
pub struct DatabaseBuilder {
    catalog: Catalog,
    transactions: Vec<Transaction>,
}

impl DatabaseBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push<I, S>(&mut self, source_id: impl Into<String>, names: I) -> Result<(), TxdbError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut items = Vec::new();
        for name in names {
            let name = name.as_ref();
            let id = self.catalog.intern(name).ok_or_else(|| {
                TxdbError::Argument(format!("empty item name in transaction {}", self.transactions.len() + 1))
            })?;
            items.push(id);
        }
        self.transactions.push(Transaction::new(source_id, items));
        Ok(())
    }

    pub fn build(self) -> TransactionDatabase {
        TransactionDatabase {
            catalog: self.catalog,
            transactions: self.transactions,
            scans: AtomicUsize::new(0),
        }
    }
}

/// An exact decimal threshold in `[0, 1]`, kept as a reduced-free
/// `numerator / 10^k` pair so that count comparisons never round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    pub const ZERO: Threshold = Threshold { num: 0, den: 1 };
    pub const ONE: Threshold = Threshold { num: 1, den: 1 };

    /// Parses `"0.01"`, `".6"`, `"1"` or a percentage such as `"1%"` / `"35.5%"`.
    pub fn parse(text: &str) -> Result<Self, TxdbError> {
        let raw = text.trim();
        let (digits, percent) = match raw.strip_suffix('%') {
            Some(rest) => (rest.trim_end(), true),
            None => (raw, false),
        };
        let bad = || TxdbError::Argument(format!("threshold {text:?} is not a decimal number"));
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_part = frac_part.trim_end_matches('0');
        let scale = frac_part.len() as u32 + if percent { 2 } else { 0 };
        if scale > 18 {
            return Err(TxdbError::Argument(format!("threshold {text:?} has too many decimal places")));
        }
        let int_value: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac_value: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let den = 10u64.pow(scale);
        let num = int_value
            .checked_mul(10u64.pow(frac_part.len() as u32))
            .and_then(|v| v.checked_add(frac_value))
            .ok_or_else(bad)?;
        let t = Threshold { num, den };
        if t.num > t.den {
            return Err(TxdbError::Argument(format!("threshold {text:?} is outside [0, 1]")));
        }
        Ok(t)
    }

    /// Converts through the shortest decimal representation of `value`,
    /// rounded to 18 places when that representation is longer.
    pub fn from_f64(value: f64) -> Result<Self, TxdbError> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(TxdbError::Argument(format!("threshold {value} is outside [0, 1]")));
        }
        let shortest = format!("{value}");
        match shortest.split_once('.') {
            Some((_, frac)) if frac.len() > 18 => Self::parse(&format!("{value:.18}")),
            _ => Self::parse(&shortest),
        }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `count / total >= self`, compared exactly.
    pub fn admits(self, count: u64, total: u64) -> bool {
        count as u128 * self.den as u128 >= self.num as u128 * total as u128
    }

    /// Smallest integer `c` with `c / n >= self`.
    pub fn min_count(self, n: usize) -> u64 {
        let prod = self.num as u128 * n as u128;
        prod.div_ceil(self.den as u128) as u64
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Support and confidence thresholds plus an optional itemset-size cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningConfig {
    pub min_support: Threshold,
    pub min_confidence: Threshold,
    pub max_itemset_size: Option<usize>,
}

impl MiningConfig {
    pub fn new(min_support: f64, min_confidence: f64) -> Result<Self, TxdbError> {
        Ok(Self {
            min_support: Threshold::from_f64(min_support)?,
            min_confidence: Threshold::from_f64(min_confidence)?,
            max_itemset_size: None,
        })
    }

    pub fn with_max_itemset_size(mut self, size: usize) -> Result<Self, TxdbError> {
        if size == 0 {
            return Err(TxdbError::Argument("max itemset size must be positive".into()));
        }
        self.max_itemset_size = Some(size);
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), TxdbError> {
        if self.max_itemset_size == Some(0) {
            return Err(TxdbError::Argument("max itemset size must be positive".into()));
        }
        for (what, t) in [("min_support", self.min_support), ("min_confidence", self.min_confidence)] {
            if t.num > t.den || t.den == 0 {
                return Err(TxdbError::Argument(format!("{what} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Minimum absolute count for `n` transactions. A zero threshold clamps
    /// to 1 so that itemsets which never occur are not reported.
    pub fn min_count(&self, n: usize) -> u64 {
        self.min_support.min_count(n).max(1)
    }

    pub fn allows_size(&self, size: usize) -> bool {
        self.max_itemset_size.is_none_or(|max| size <= max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug)]
pub struct ParsedTransactions {
    pub db: TransactionDatabase,
    pub warnings: Vec<ParseWarning>,
}

/// Reads the `device_number,failed_items` CSV format. Items in the second
/// field are `;`-separated. Every data line is its own transaction; a repeated
/// device number only produces a warning.
pub fn parse_transactions_csv<R: Read>(input: R) -> Result<ParsedTransactions, TxdbError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let mut builder = DatabaseBuilder::new();
    let mut warnings = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();

    for record in reader.records() {
        let record = record.map_err(|e| TxdbError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() < 2 {
            return Err(TxdbError::Parse {
                line,
                message: format!("expected 2 fields (device number, failed items), found {}", record.len()),
            });
        }
        let device = record[0].trim().to_string();
        let field = record[1].trim();
        let names: Vec<&str> = if field.is_empty() { Vec::new() } else { field.split(';').collect() };
        if names.iter().any(|n| normalize_name(n).is_empty()) {
            return Err(TxdbError::Parse {
                line,
                message: "empty item name between ';' separators".into(),
            });
        }
        if let Some(first) = seen.get(&device) {
            warnings.push(ParseWarning {
                line,
                message: format!("device number {device} repeats line {first}; kept as a separate transaction"),
            });
        } else {
            seen.insert(device.clone(), line);
        }
        builder.push(device, names)?;
    }
    Ok(ParsedTransactions {
        db: builder.build(),
        warnings,
    })
}

/// Serializes to the CSV format read by [`parse_transactions_csv`], LF endings.
pub fn write_transactions_csv(db: &TransactionDatabase) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record(["device_number", "failed_items"])
        .expect("writing to a Vec cannot fail");
    for t in db.transactions() {
        let items = db.catalog().names_of(t.items()).join(";");
        writer
            .write_record([t.source_id.as_str(), items.as_str()])
            .expect("writing to a Vec cannot fail");
    }
    let bytes = writer.into_inner().expect("flush to a Vec cannot fail");
    String::from_utf8(bytes).expect("csv writer emits the UTF-8 it was given")
}

/// Count of transactions containing each item, indexed by item id.
pub fn item_frequencies(db: &TransactionDatabase) -> Vec<u64> {
    let mut counts = vec![0u64; db.catalog().len()];
    for t in db.transactions() {
        for &id in t.items() {
            counts[id.index()] += 1;
        }
    }
    counts
}

/// Items with count >= `min_count`, by descending count then ascending name.
/// This is the insertion order of the FP-tree.
pub fn frequency_order(db: &TransactionDatabase, min_count: u64) -> Vec<ItemId> {
    order_by_frequency(db.catalog(), &item_frequencies(db), min_count)
}

pub(crate) fn order_by_frequency(catalog: &Catalog, counts: &[u64], min_count: u64) -> Vec<ItemId> {
    let mut items: Vec<ItemId> = catalog.ids().filter(|id| counts[id.index()] >= min_count).collect();
    items.sort_by(|&a, &b| {
        counts[b.index()]
            .cmp(&counts[a.index()])
            .then_with(|| catalog.name(a).cmp(catalog.name(b)))
    });
    items
}

/// A rule to plant in a synthetic database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedRule {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub rules: Vec<PlantedRule>,
    pub n: usize,
    pub noise_items: usize,
    pub seed: u64,
}

/// Largest deviation between a planted target and the realized metric.
pub const PLANT_TOLERANCE: f64 = 0.005;

/// Reads planted rules from CSV with header `antecedent,consequent,support,confidence`.
/// Names inside a field are `;`-separated; metrics accept decimals or percentages.
pub fn parse_planted_rules<R: Read>(input: R) -> Result<Vec<PlantedRule>, TxdbError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut rules = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| TxdbError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() != 4 {
            return Err(TxdbError::Parse {
                line,
                message: format!("expected 4 fields, found {}", record.len()),
            });
        }
        let names = |field: &str| -> Result<Vec<String>, TxdbError> {
            let out: Vec<String> = field.split(';').map(normalize_name).collect();
            if out.iter().any(String::is_empty) {
                return Err(TxdbError::Parse {
                    line,
                    message: "empty item name".into(),
                });
            }
            Ok(out)
        };
        let metric = |field: &str| -> Result<f64, TxdbError> {
            Threshold::parse(field)
                .map(Threshold::value)
                .map_err(|e| TxdbError::Parse { line, message: e.to_string() })
        };
        rules.push(PlantedRule {
            antecedent: names(&record[0])?,
            consequent: names(&record[1])?,
            support: metric(&record[2])?,
            confidence: metric(&record[3])?,
        });
    }
    Ok(rules)
}

struct PlantGroup {
    antecedent: Vec<String>,
    antecedent_count: usize,
    consequents: Vec<(Vec<String>, usize)>,
}

/// Generates a database in which every planted rule is realized by exact
/// transaction counts: `round(support * n)` transactions hold `A ∪ B` and
/// `round(that / confidence)` transactions hold `A`. Each antecedent occupies
/// a seeded random subset of transactions, so unrelated rules co-occur only
/// by chance.
///
/// Planted rules must not share items, except that several rules may share an
/// identical antecedent whose implied antecedent counts agree. Each noise item
/// lands in `floor(0.25 * min_target_support * n)` random transactions, which
/// keeps any co-occurrence it creates below half the smallest planted support.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<TransactionDatabase, TxdbError> {
    let n = spec.n;
    if n == 0 {
        return Err(TxdbError::Argument("transaction count n must be positive".into()));
    }
    let mut groups: Vec<PlantGroup> = Vec::new();
    let mut owner: HashMap<String, (usize, bool)> = HashMap::new();

    for (ri, rule) in spec.rules.iter().enumerate() {
        let label = ri + 1;
        let antecedent: Vec<String> = rule.antecedent.iter().map(|s| normalize_name(s)).collect();
        let consequent: Vec<String> = rule.consequent.iter().map(|s| normalize_name(s)).collect();
        if antecedent.is_empty() || consequent.is_empty() || antecedent.iter().chain(&consequent).any(String::is_empty) {
            return Err(TxdbError::Argument(format!("planted rule {label} has an empty side or item name")));
        }
        let a_set: BTreeSet<&String> = antecedent.iter().collect();
        if consequent.iter().any(|c| a_set.contains(c)) {
            return Err(TxdbError::Argument(format!("planted rule {label}: antecedent and consequent overlap")));
        }
        let (s, c) = (rule.support, rule.confidence);
        if !(s > 0.0 && s <= 1.0 && c > 0.0 && c <= 1.0) {
            return Err(TxdbError::Argument(format!("planted rule {label}: targets must lie in (0, 1]")));
        }
        if s > c {
            return Err(TxdbError::Argument(format!(
                "planted rule {label}: support {s} exceeds confidence {c}, which no database can realize"
            )));
        }
        let joint = (s * n as f64).round() as usize;
        let ante = if joint == 0 { 0 } else { (joint as f64 / c).round() as usize };
        if joint == 0 || ante > n {
            return Err(TxdbError::Argument(format!(
                "planted rule {label}: n = {n} is too small to realize support {s} / confidence {c}"
            )));
        }
        let got_s = joint as f64 / n as f64;
        let got_c = joint as f64 / ante as f64;
        if (got_s - s).abs() > PLANT_TOLERANCE || (got_c - c).abs() > PLANT_TOLERANCE {
            return Err(TxdbError::Argument(format!(
                "planted rule {label}: n = {n} realizes support {got_s:.4} / confidence {got_c:.4}, outside ±{PLANT_TOLERANCE}"
            )));
        }

        let mut key = antecedent.clone();
        key.sort();
        let gi = match groups.iter().position(|g| {
            let mut k = g.antecedent.clone();
            k.sort();
            k == key
        }) {
            Some(gi) => {
                if groups[gi].antecedent_count != ante {
                    return Err(TxdbError::Argument(format!(
                        "planted rule {label} shares its antecedent with an earlier rule but implies {ante} antecedent \
                         transactions instead of {}; one database cannot hold both",
                        groups[gi].antecedent_count
                    )));
                }
                gi
            }
            None => {
                for name in &antecedent {
                    if owner.contains_key(name) {
                        return Err(TxdbError::Argument(format!(
                            "item {name:?} of planted rule {label} already belongs to another planted rule"
                        )));
                    }
                }
                groups.push(PlantGroup {
                    antecedent: antecedent.clone(),
                    antecedent_count: ante,
                    consequents: Vec::new(),
                });
                for name in &antecedent {
                    owner.insert(name.clone(), (groups.len() - 1, true));
                }
                groups.len() - 1
            }
        };
        for name in &consequent {
            if owner.contains_key(name) {
                return Err(TxdbError::Argument(format!(
                    "item {name:?} of planted rule {label} already belongs to another planted rule"
                )));
            }
            owner.insert(name.clone(), (gi, false));
        }
        groups[gi].consequents.push((consequent, joint));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows: Vec<Vec<String>> = vec![Vec::new(); n];
    for group in &groups {
        let slots = index::sample(&mut rng, n, group.antecedent_count).into_vec();
        for &t in &slots {
            rows[t].extend(group.antecedent.iter().cloned());
        }
        for (consequent, joint) in &group.consequents {
            for pick in index::sample(&mut rng, slots.len(), *joint).into_iter() {
                rows[slots[pick]].extend(consequent.iter().cloned());
            }
        }
    }

    let min_target = spec.rules.iter().map(|r| r.support).fold(1.0_f64, f64::min);
    let noise_count = ((0.25 * min_target * n as f64).floor() as usize).clamp(1, n);
    let width = spec.noise_items.to_string().len().max(2);
    for j in 0..spec.noise_items {
        let name = format!("Noise item {:0width$}", j + 1);
        for t in index::sample(&mut rng, n, noise_count).into_iter() {
            rows[t].push(name.clone());
        }
    }

    let width = n.to_string().len().max(6);
    let mut builder = DatabaseBuilder::new();
    for (i, row) in rows.into_iter().enumerate() {
        builder.push(format!("SYN{:0width$}", i + 1), row)?;
    }
    Ok(builder.build())
}

/// Uniform random baskets for benchmarking: `n` transactions over `items`
/// items, lengths uniform on `mean_len ± min(mean_len - 1, 4)`.
pub fn generate_dense(n: usize, items: usize, mean_len: usize, seed: u64) -> Result<TransactionDatabase, TxdbError> {
    if n == 0 || items == 0 || mean_len == 0 {
        return Err(TxdbError::Argument("n, items and mean length must be positive".into()));
    }
    if mean_len > items {
        return Err(TxdbError::Argument(format!("mean length {mean_len} exceeds the {items} available items")));
    }
    let spread = (mean_len - 1).min(4).min(items - mean_len);
    let names: Vec<String> = (1..=items).map(|i| format!("Item {i:03}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut catalog = Catalog::new();
    for name in &names {
        catalog.intern(name);
    }
    let mut transactions = Vec::with_capacity(n);
    for i in 0..n {
        let len = rand::Rng::gen_range(&mut rng, mean_len - spread..=mean_len + spread);
        let picks = index::sample(&mut rng, items, len);
        transactions.push(Transaction::new(
            format!("D{:07}", i + 1),
            picks.into_iter().map(|p| ItemId(p as u32)),
        ));
    }
    TransactionDatabase::new(catalog, transactions)
}
