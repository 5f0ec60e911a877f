//! Level-wise Apriori baseline and an exhaustive enumeration oracle.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::itemset::{sort_canonical, FrequentItemset, MiningError};
use crate::txdb::{ItemId, MiningConfig, TransactionDatabase};

/// Largest catalog [`mine_bruteforce`] will enumerate.
pub const BRUTEFORCE_ITEM_LIMIT: usize = 20;

/// Joins sorted k-itemsets that agree on their first k-1 items.
pub fn join_candidates(level: &[Vec<ItemId>]) -> Result<Vec<Vec<ItemId>>, MiningError> {
    let Some(k) = level.first().map(Vec::len) else {
        return Ok(Vec::new());
    };
    if k == 0 || level.iter().any(|s| s.len() != k) {
        return Err(MiningError::Argument("join needs non-empty itemsets of one size".into()));
    }
    let mut sorted: Vec<&Vec<ItemId>> = level.iter().collect();
    sorted.sort();
    sorted.dedup();

    let mut out = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let prefix = &sorted[start][..k - 1];
        let end = start + sorted[start..].iter().take_while(|s| &s[..k - 1] == prefix).count();
        for i in start..end {
            for j in i + 1..end {
                let mut cand = sorted[i].clone();
                cand.push(sorted[j][k - 1]);
                out.push(cand);
            }
        }
        start = end;
    }
    Ok(out)
}

/// Keeps candidates whose every k-subset is in `level`.
pub fn prune_candidates(candidates: Vec<Vec<ItemId>>, level: &[Vec<ItemId>]) -> Vec<Vec<ItemId>> {
    let known: HashSet<&[ItemId]> = level.iter().map(Vec::as_slice).collect();
    let mut sub = Vec::new();
    candidates
        .into_iter()
        .filter(|cand| {
            (0..cand.len()).all(|skip| {
                sub.clear();
                sub.extend(cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x));
                known.contains(sub.as_slice())
            })
        })
        .collect()
}

/// Item membership as packed bit words, one row per transaction.
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(db: &TransactionDatabase) -> Self {
        let words = db.catalog().len().div_ceil(64).max(1);
        let mut bits = vec![0u64; words * db.n()];
        for (row, t) in db.scan().enumerate() {
            for &id in t.items() {
                bits[row * words + id.index() / 64] |= 1 << (id.index() % 64);
            }
        }
        BitRows { words, bits }
    }

    fn mask(&self, itemset: &[ItemId]) -> Vec<u64> {
        let mut m = vec![0u64; self.words];
        for &id in itemset {
            if id.index() / 64 >= self.words {
                return Vec::new();
            }
            m[id.index() / 64] |= 1 << (id.index() % 64);
        }
        m
    }

    /// One pass over all rows, counting superset rows per candidate mask.
    fn count(&self, masks: &[Vec<u64>], threads: usize) -> Vec<u64> {
        let words = self.words;
        let count_rows = |rows: &[u64], counts: &mut [u64]| {
            for row in rows.chunks_exact(words) {
                for (mask, c) in masks.iter().zip(counts.iter_mut()) {
                    if !mask.is_empty() && mask.iter().zip(row).all(|(m, r)| m & !r == 0) {
                        *c += 1;
                    }
                }
            }
        };
        if threads <= 1 || self.bits.is_empty() {
            let mut counts = vec![0u64; masks.len()];
            count_rows(&self.bits, &mut counts);
            return counts;
        }
        let rows_per_chunk = (self.bits.len() / words).div_ceil(threads * 4).max(1);
        self.bits
            .par_chunks(rows_per_chunk * words)
            .map(|chunk| {
                let mut counts = vec![0u64; masks.len()];
                count_rows(chunk, &mut counts);
                counts
            })
            .reduce(
                || vec![0u64; masks.len()],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }
}

/// Counts, in one pass over `db`, the transactions containing each candidate.
pub fn count_support(db: &TransactionDatabase, candidates: &[Vec<ItemId>]) -> Vec<(Vec<ItemId>, u64)> {
    let rows = BitRows::new(db);
    let masks: Vec<Vec<u64>> = candidates.iter().map(|c| rows.mask(c)).collect();
    let counts = rows.count(&masks, 1);
    candidates.iter().cloned().zip(counts).collect()
}

/// Apriori miner settings.
#[derive(Debug, Clone, Copy)]
pub struct Apriori {
    /// Threads for per-level counting; 1 is the sequential reference mode.
    pub threads: usize,
}

impl Default for Apriori {
    fn default() -> Self {
        Apriori { threads: 1 }
    }
}

impl Apriori {
    pub fn mine(&self, db: &TransactionDatabase, config: &MiningConfig) -> Result<Vec<FrequentItemset>, MiningError> {
        config.validate()?;
        if self.threads == 0 {
            return Err(MiningError::Argument("thread count must be at least 1".into()));
        }
        let min_count = config.min_count(db.n());
        let rows = BitRows::new(db);
        let run = || {
            let mut out = Vec::new();
            let mut level: Vec<Vec<ItemId>> = db.catalog().ids().map(|id| vec![id]).collect();
            let mut k = 1;
            while !level.is_empty() && config.allows_size(k) {
                let masks: Vec<Vec<u64>> = level.iter().map(|c| rows.mask(c)).collect();
                let counts = rows.count(&masks, self.threads);
                let frequent: Vec<Vec<ItemId>> = level
                    .into_iter()
                    .zip(counts)
                    .filter(|&(_, c)| c >= min_count)
                    .map(|(items, c)| {
                        out.push(FrequentItemset::new(items.iter().copied(), c));
                        items
                    })
                    .collect();
                let joined = join_candidates(&frequent).expect("one level holds one itemset size");
                level = prune_candidates(joined, &frequent);
                k += 1;
            }
            out
        };
        let mut out = if self.threads > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .map_err(|e| MiningError::Argument(e.to_string()))?
                .install(run)
        } else {
            run()
        };
        sort_canonical(&mut out);
        Ok(out)
    }
}

pub fn mine_apriori(db: &TransactionDatabase, config: &MiningConfig) -> Result<Vec<FrequentItemset>, MiningError> {
    Apriori::default().mine(db, config)
}

/// Counts every non-empty subset of the catalog. Refuses catalogs larger
/// than [`BRUTEFORCE_ITEM_LIMIT`].
pub fn mine_bruteforce(db: &TransactionDatabase, config: &MiningConfig) -> Result<Vec<FrequentItemset>, MiningError> {
    config.validate()?;
    let p = db.catalog().len();
    if p > BRUTEFORCE_ITEM_LIMIT {
        return Err(MiningError::TooManyItems {
            items: p,
            limit: BRUTEFORCE_ITEM_LIMIT,
        });
    }
    let min_count = config.min_count(db.n());
    let rows: Vec<u32> = db
        .transactions()
        .iter()
        .map(|t| t.items().iter().fold(0u32, |m, id| m | 1 << id.0))
        .collect();
    let mut out = Vec::new();
    for subset in 1u32..(1u32 << p) {
        let size = subset.count_ones() as usize;
        if !config.allows_size(size) {
            continue;
        }
        let count = rows.iter().filter(|&&r| r & subset == subset).count() as u64;
        if count >= min_count {
            let items = (0..p as u32).filter(|b| subset & (1 << b) != 0).map(ItemId);
            out.push(FrequentItemset::new(items, count));
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(s: &str) -> Vec<ItemId> {
        s.bytes().map(|b| ItemId((b - b'a') as u32)).collect()
    }

    fn sets(list: &[&str]) -> Vec<Vec<ItemId>> {
        list.iter().map(|s| ids(s)).collect()
    }

    #[test]
    fn join_examples() {
        assert_eq!(join_candidates(&sets(&["ab", "ac", "bc"])).unwrap(), sets(&["abc"]));
        assert!(join_candidates(&sets(&["ab", "cd"])).unwrap().is_empty());
        assert_eq!(join_candidates(&sets(&["abc", "abd", "acd", "bcd"])).unwrap(), sets(&["abcd"]));
        assert!(join_candidates(&sets(&["ab", "abc"])).is_err());
        assert!(join_candidates(&[]).unwrap().is_empty());
    }

    #[test]
    fn join_matches_pair_enumeration() {
        let level = sets(&["abc", "abd", "abe", "acd", "ace", "bcd"]);
        let mut want = Vec::new();
        for (i, x) in level.iter().enumerate() {
            for y in &level[i + 1..] {
                if x[..2] == y[..2] {
                    let mut u = x.clone();
                    u.push(y[2]);
                    u.sort();
                    want.push(u);
                }
            }
        }
        want.sort();
        let mut got = join_candidates(&level).unwrap();
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn prune_examples() {
        assert_eq!(prune_candidates(sets(&["abc"]), &sets(&["ab", "ac", "bc"])), sets(&["abc"]));
        assert!(prune_candidates(sets(&["abc"]), &sets(&["ab", "ac"])).is_empty());
        assert!(prune_candidates(Vec::new(), &sets(&["ab"])).is_empty());
    }

    #[test]
    fn counting() {
        let db = TransactionDatabase::from_names([vec!["a", "b"], vec!["a"]]).unwrap();
        let a = db.catalog().id("a").unwrap();
        let b = db.catalog().id("b").unwrap();
        let got = count_support(&db, &[vec![a], vec![a, b], vec![a, b, ItemId(7)]]);
        assert_eq!(got.iter().map(|(_, c)| *c).collect::<Vec<_>>(), [2, 1, 0]);
    }

    #[test]
    fn apriori_and_bruteforce_examples() {
        let db = TransactionDatabase::from_names([vec!["a", "b"], vec!["a", "b"], vec!["a", "b", "c"], vec!["c"]])
            .unwrap();
        let cfg = MiningConfig::new(0.5, 0.0).unwrap();
        let shown = |v: Vec<FrequentItemset>| v.iter().map(|f| f.display(db.catalog())).collect::<Vec<_>>();
        let want = ["{a}:3", "{b}:3", "{c}:2", "{a, b}:3"];
        assert_eq!(shown(mine_apriori(&db, &cfg).unwrap()), want);
        assert_eq!(shown(mine_bruteforce(&db, &cfg).unwrap()), want);
        assert_eq!(shown(Apriori { threads: 3 }.mine(&db, &cfg).unwrap()), want);

        let empty = TransactionDatabase::from_names(Vec::<Vec<&str>>::new()).unwrap();
        assert!(mine_apriori(&empty, &cfg).unwrap().is_empty());
    }

    #[test]
    fn bruteforce_half_support() {
        // 1/2 >= 0.5, so a single occurrence is enough.
        let db = TransactionDatabase::from_names([vec!["a", "b"], vec!["c"]]).unwrap();
        let got = mine_bruteforce(&db, &MiningConfig::new(0.5, 0.0).unwrap()).unwrap();
        let shown: Vec<String> = got.iter().map(|f| f.display(db.catalog())).collect();
        assert_eq!(shown, ["{a}:1", "{b}:1", "{c}:1", "{a, b}:1"]);
    }

    #[test]
    fn bruteforce_guard_and_zero_support() {
        let row: Vec<String> = (0..21).map(|i| format!("i{i}")).collect();
        let db = TransactionDatabase::from_names([row]).unwrap();
        assert!(matches!(
            mine_bruteforce(&db, &MiningConfig::new(0.5, 0.5).unwrap()),
            Err(MiningError::TooManyItems { items: 21, .. })
        ));

        let db = TransactionDatabase::from_names([vec!["a", "b"], vec!["c"], vec![]]).unwrap();
        let got = mine_bruteforce(&db, &MiningConfig::new(0.0, 0.0).unwrap()).unwrap();
        // {a},{b},{c},{a,b}; never-occurring sets such as {a,c} are excluded.
        assert_eq!(got.len(), 4);
        assert_eq!(got, mine_apriori(&db, &MiningConfig::new(0.0, 0.0).unwrap()).unwrap());
    }
}
