use std::collections::BTreeMap;

use thiserror::Error;

use crate::txdb::{Catalog, ItemId, TxdbError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MiningError {
    #[error(transparent)]
    Config(#[from] TxdbError),
    #[error("item {0} is not in the header table")]
    UnknownItem(ItemId),
    #[error("{0}")]
    Argument(String),
    #[error("catalog has {items} items; exhaustive enumeration is limited to {limit}")]
    TooManyItems { items: usize, limit: usize },
}

/// An itemset with its absolute occurrence count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequentItemset {
    items: Vec<ItemId>,
    pub count: u64,
}

impl FrequentItemset {
    /// Sorts and deduplicates `items` into canonical form.
    pub fn new(items: impl IntoIterator<Item = ItemId>, count: u64) -> Self {
        let mut items: Vec<ItemId> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        Self { items, count }
    }

    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn display(&self, catalog: &Catalog) -> String {
        format!("{{{}}}:{}", catalog.names_of(&self.items).join(", "), self.count)
    }
}

/// Canonical result order: by size, then lexicographically by item id.
pub fn sort_canonical(itemsets: &mut [FrequentItemset]) {
    itemsets.sort_unstable_by(|a, b| a.items.len().cmp(&b.items.len()).then_with(|| a.items.cmp(&b.items)));
}

/// Itemset -> count mapping, the form used for cross-algorithm comparison.
pub fn to_count_map(itemsets: &[FrequentItemset]) -> BTreeMap<Vec<ItemId>, u64> {
    itemsets.iter().map(|f| (f.items.clone(), f.count)).collect()
}
