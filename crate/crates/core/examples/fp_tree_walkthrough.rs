//! Builds an FP-tree for a five-transaction toy database and prints its
//! header table, node links, conditional pattern bases and mined itemsets.

use freqkg::fpgrowth::{build_conditional_tree, conditional_pattern_base, FpTree, NodeId};
use freqkg::{build_fptree, mine_fpgrowth, MiningConfig, TransactionDatabase};

fn print_tree(tree: &FpTree, db: &TransactionDatabase, id: NodeId, depth: usize) {
    let node = tree.node(id);
    if let Some(item) = node.item {
        println!("{}{}:{}", "  ".repeat(depth), db.catalog().name(item), node.count);
    }
    for &child in &node.children {
        print_tree(tree, db, child, depth + usize::from(node.item.is_some()));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let db = TransactionDatabase::from_names([
        vec!["bread", "milk"],
        vec!["bread", "diapers", "beer", "eggs"],
        vec!["milk", "diapers", "beer", "cola"],
        vec!["bread", "milk", "diapers", "beer"],
        vec!["bread", "milk", "diapers", "cola"],
    ])?;
    let config = MiningConfig::new(0.6, 0.7)?;
    let min_count = config.min_count(db.n());

    let tree = build_fptree(&db, min_count);
    println!("min count {min_count}, {} data passes, {} nodes", tree.data_passes(), tree.node_count());
    println!("\ntree:");
    print_tree(&tree, &db, NodeId::ROOT, 0);

    println!("\nheader table (insertion order):");
    for row in tree.header() {
        let chain: Vec<u64> = tree.chain(row.item).map(|id| tree.node(id).count).collect();
        println!("  {:<8} total {}  node-link counts {:?}", db.catalog().name(row.item), row.total, chain);
    }

    println!("\nconditional pattern bases:");
    for row in tree.header().iter().rev() {
        let base = conditional_pattern_base(&tree, row.item)?;
        let paths: Vec<String> = base
            .iter()
            .map(|p| format!("{{{}}}:{}", db.catalog().names_of(&p.items).join(", "), p.weight))
            .collect();
        let cond = build_conditional_tree(&base, min_count);
        let kept: Vec<&str> = cond.header().iter().map(|r| db.catalog().name(r.item)).collect();
        println!("  {:<8} {:<40} frequent in conditional tree: {:?}", db.catalog().name(row.item), paths.join(" "), kept);
    }

    println!("\nfrequent itemsets:");
    for set in mine_fpgrowth(&db, &config)? {
        println!("  {}", set.display(db.catalog()));
    }
    Ok(())
}
