//! FP-tree construction and pattern-growth mining.
//!
//! The tree is an arena of nodes. Each frequent item has a header row that
//! holds its total count and the head of a node-link chain threading every
//! node carrying that item, in insertion order.


use rayon::prelude::*;

use crate::itemset::{sort_canonical, FrequentItemset, MiningError};
use crate::txdb::{order_by_frequency, ItemId, MiningConfig, TransactionDatabase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct FpNode {
    pub item: Option<ItemId>,
    pub count: u64,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub next_same_item: Option<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderRow {
    pub item: ItemId,
    pub total: u64,
    pub head: Option<NodeId>,
    tail: Option<NodeId>,
}

/// Ancestors of one node occurrence, weighted by that node's count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixPath {
    pub items: Vec<ItemId>,
    pub weight: u64,
}

const NO_RANK: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct FpTree {
    nodes: Vec<FpNode>,
    header: Vec<HeaderRow>,
    /// Header position by item id; `NO_RANK` for items not in the header.
    rank: Vec<u32>,
    min_count: u64,
    data_passes: usize,
}

impl FpTree {
    fn with_order(order: Vec<ItemId>, totals: impl Fn(ItemId) -> u64, min_count: u64) -> Self {
        let len = order.iter().map(|i| i.index() + 1).max().unwrap_or(0);
        let mut rank = vec![NO_RANK; len];
        for (r, &item) in order.iter().enumerate() {
            rank[item.index()] = r as u32;
        }
        let header = order
            .into_iter()
            .map(|item| HeaderRow {
                item,
                total: totals(item),
                head: None,
                tail: None,
            })
            .collect();
        FpTree {
            nodes: vec![FpNode {
                item: None,
                count: 0,
                parent: None,
                children: Vec::new(),
                next_same_item: None,
            }],
            header,
            rank,
            min_count,
            data_passes: 0,
        }
    }

    /// Inserts a path already filtered and sorted into header order.
    fn insert(&mut self, path: &[ItemId], weight: u64) {
        let mut cur = NodeId::ROOT;
        for &item in path {
            let existing = self.nodes[cur.index()]
                .children
                .iter()
                .copied()
                .find(|c| self.nodes[c.index()].item == Some(item));
            cur = match existing {
                Some(child) => {
                    self.nodes[child.index()].count += weight;
                    child
                }
                None => {
                    let id = NodeId(self.nodes.len() as u32);
                    self.nodes.push(FpNode {
                        item: Some(item),
                        count: weight,
                        parent: Some(cur),
                        children: Vec::new(),
                        next_same_item: None,
                    });
                    self.nodes[cur.index()].children.push(id);
                    let row = &mut self.header[self.rank[item.index()] as usize];
                    match row.tail {
                        Some(tail) => self.nodes[tail.index()].next_same_item = Some(id),
                        None => row.head = Some(id),
                    }
                    row.tail = Some(id);
                    id
                }
            };
        }
    }

    fn filter_sorted(&self, items: &[ItemId], buf: &mut Vec<ItemId>) {
        buf.clear();
        buf.extend(items.iter().copied().filter(|i| self.rank_of(*i).is_some()));
        buf.sort_unstable_by_key(|i| self.rank[i.index()]);
    }

    fn rank_of(&self, item: ItemId) -> Option<usize> {
        match self.rank.get(item.index()) {
            Some(&r) if r != NO_RANK => Some(r as usize),
            _ => None,
        }
    }

    pub fn root(&self) -> &FpNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &FpNode {
        &self.nodes[id.index()]
    }

    /// Every node id, root first.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Header rows in frequency order.
    pub fn header(&self) -> &[HeaderRow] {
        &self.header
    }

    /// Items in header (insertion) order.
    pub fn order(&self) -> Vec<ItemId> {
        self.header.iter().map(|r| r.item).collect()
    }

    pub fn header_row(&self, item: ItemId) -> Option<&HeaderRow> {
        self.rank_of(item).map(|r| &self.header[r])
    }

    /// Nodes on `item`'s node-link chain.
    pub fn chain(&self, item: ItemId) -> impl Iterator<Item = NodeId> + '_ {
        let head = self.header_row(item).and_then(|r| r.head);
        std::iter::successors(head, move |id| self.nodes[id.index()].next_same_item)
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    /// Full passes over the source data made while building this tree.
    pub fn data_passes(&self) -> usize {
        self.data_passes
    }

    /// True when only the root exists.
    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Items on the root-to-`id` path, excluding the root.
    pub fn path_to(&self, id: NodeId) -> Vec<ItemId> {
        let mut items = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            let node = &self.nodes[c.index()];
            if let Some(item) = node.item {
                items.push(item);
            }
            cur = node.parent;
        }
        items.reverse();
        items
    }

    /// The nodes of the tree as a single chain, if it is one.
    fn single_chain(&self) -> Option<Vec<(ItemId, u64)>> {
        let mut chain = Vec::new();
        let mut cur = &self.nodes[0];
        loop {
            match cur.children.as_slice() {
                [] => return Some(chain),
                [only] => {
                    cur = &self.nodes[only.index()];
                    chain.push((cur.item.expect("non-root node carries an item"), cur.count));
                }
                _ => return None,
            }
        }
    }
}

/// Builds the FP-tree in two passes: the first counts items, the second
/// inserts each transaction's frequent items in frequency order.
pub fn build_fptree(db: &TransactionDatabase, min_count: u64) -> FpTree {
    let min_count = min_count.max(1);

    let mut counts = vec![0u64; db.catalog().len()];
    for t in db.scan() {
        for &id in t.items() {
            counts[id.index()] += 1;
        }
    }
    let order = order_by_frequency(db.catalog(), &counts, min_count);
    let mut tree = FpTree::with_order(order, |item| counts[item.index()], min_count);
    tree.data_passes = 1;

    let mut buf = Vec::new();
    for t in db.scan() {
        tree.filter_sorted(t.items(), &mut buf);
        if !buf.is_empty() {
            tree.insert(&buf, 1);
        }
    }
    tree.data_passes += 1;
    tree
}

/// Expands the tree back into the filtered, frequency-ordered transactions
/// it encodes, as a sorted multiset.
pub fn reconstruct_filtered(tree: &FpTree) -> Vec<Vec<ItemId>> {
    let mut out = Vec::new();
    for id in tree.node_ids().skip(1) {
        let node = tree.node(id);
        let below: u64 = node.children.iter().map(|c| tree.node(*c).count).sum();
        let ending_here = node.count - below;
        if ending_here > 0 {
            let path = tree.path_to(id);
            out.extend(std::iter::repeat_n(path, ending_here as usize));
        }
    }
    out.sort();
    out
}

/// Prefix paths above each occurrence of `item`, weighted by the
/// occurrence count. Empty prefixes are dropped.
pub fn conditional_pattern_base(tree: &FpTree, item: ItemId) -> Result<Vec<PrefixPath>, MiningError> {
    if tree.header_row(item).is_none() {
        return Err(MiningError::UnknownItem(item));
    }
    Ok(tree
        .chain(item)
        .filter_map(|id| {
            let node = tree.node(id);
            let parent = node.parent?;
            let items = tree.path_to(parent);
            (!items.is_empty()).then_some(PrefixPath {
                items,
                weight: node.count,
            })
        })
        .collect())
}

/// Builds a tree from weighted paths. Items are ordered by descending
/// weighted count, ties by ascending item id.
pub fn build_conditional_tree(base: &[PrefixPath], min_count: u64) -> FpTree {
    let min_count = min_count.max(1);
    let len = base.iter().flat_map(|p| p.items.iter()).map(|i| i.index() + 1).max().unwrap_or(0);
    let mut counts = vec![0u64; len];
    for path in base {
        for &item in &path.items {
            counts[item.index()] += path.weight;
        }
    }
    let mut order: Vec<ItemId> = (0..len as u32)
        .map(ItemId)
        .filter(|i| counts[i.index()] >= min_count)
        .collect();
    order.sort_by(|a, b| counts[b.index()].cmp(&counts[a.index()]));
    let mut tree = FpTree::with_order(order, |item| counts[item.index()], min_count);
    tree.data_passes = 1;

    let mut buf = Vec::new();
    for path in base {
        tree.filter_sorted(&path.items, &mut buf);
        if !buf.is_empty() {
            tree.insert(&buf, path.weight);
        }
    }
    tree.data_passes += 1;
    tree
}

/// FP-Growth miner settings.
#[derive(Debug, Clone, Copy)]
pub struct FpGrowth {
    /// Enumerate subsets directly when a conditional tree is a single chain.
    pub single_path: bool,
    /// Worker threads for the top-level header items; 1 is the sequential
    /// reference mode.
    pub threads: usize,
}

impl Default for FpGrowth {
    fn default() -> Self {
        FpGrowth {
            single_path: true,
            threads: 1,
        }
    }
}

struct Ctx {
    min_count: u64,
    max_size: Option<usize>,
    single_path: bool,
}

impl Ctx {
    fn allows(&self, size: usize) -> bool {
        self.max_size.is_none_or(|m| size <= m)
    }
}

impl FpGrowth {
    pub fn mine(&self, db: &TransactionDatabase, config: &MiningConfig) -> Result<Vec<FrequentItemset>, MiningError> {
        config.validate()?;
        if self.threads == 0 {
            return Err(MiningError::Argument("thread count must be at least 1".into()));
        }
        let ctx = Ctx {
            min_count: config.min_count(db.n()),
            max_size: config.max_itemset_size,
            single_path: self.single_path,
        };
        let tree = build_fptree(db, ctx.min_count);

        let mut out = if self.threads == 1 {
            let mut out = Vec::new();
            mine_tree(&tree, &mut Vec::new(), &ctx, &mut out);
            out
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .map_err(|e| MiningError::Argument(e.to_string()))?;
            pool.install(|| {
                if ctx.single_path && tree.single_chain().is_some() {
                    let mut out = Vec::new();
                    mine_tree(&tree, &mut Vec::new(), &ctx, &mut out);
                    return out;
                }
                tree.header
                    .par_iter()
                    .flat_map_iter(|row| {
                        let mut out = Vec::new();
                        grow_row(&tree, row, &mut Vec::new(), &ctx, &mut out);
                        out
                    })
                    .collect()
            })
        };
        sort_canonical(&mut out);
        Ok(out)
    }
}

/// Mines every frequent itemset with the default (sequential) settings.
pub fn mine_fpgrowth(db: &TransactionDatabase, config: &MiningConfig) -> Result<Vec<FrequentItemset>, MiningError> {
    FpGrowth::default().mine(db, config)
}

fn mine_tree(tree: &FpTree, suffix: &mut Vec<ItemId>, ctx: &Ctx, out: &mut Vec<FrequentItemset>) {
    if ctx.single_path {
        if let Some(chain) = tree.single_chain() {
            enumerate_chain(&chain, 0, u64::MAX, suffix, ctx, out);
            return;
        }
    }
    for row in tree.header.iter().rev() {
        grow_row(tree, row, suffix, ctx, out);
    }
}

fn grow_row(tree: &FpTree, row: &HeaderRow, suffix: &mut Vec<ItemId>, ctx: &Ctx, out: &mut Vec<FrequentItemset>) {
    if !ctx.allows(suffix.len() + 1) {
        return;
    }
    suffix.push(row.item);
    out.push(FrequentItemset::new(suffix.iter().copied(), row.total));
    if ctx.allows(suffix.len() + 1) {
        let base = conditional_pattern_base(tree, row.item).expect("row comes from this tree's header");
        let conditional = build_conditional_tree(&base, ctx.min_count);
        if !conditional.is_empty() {
            mine_tree(&conditional, suffix, ctx, out);
        }
    }
    suffix.pop();
}

/// Emits every non-empty subset of `chain[from..]` joined with the suffix.
/// Counts along a chain never increase, so a subset's count is the count of
/// its deepest node.
fn enumerate_chain(
    chain: &[(ItemId, u64)],
    from: usize,
    count: u64,
    suffix: &mut Vec<ItemId>,
    ctx: &Ctx,
    out: &mut Vec<FrequentItemset>,
) {
    for i in from..chain.len() {
        if !ctx.allows(suffix.len() + 1) {
            return;
        }
        let (item, c) = chain[i];
        let c = c.min(count);
        suffix.push(item);
        out.push(FrequentItemset::new(suffix.iter().copied(), c));
        enumerate_chain(chain, i + 1, c, suffix, ctx, out);
        suffix.pop();
    }
}
