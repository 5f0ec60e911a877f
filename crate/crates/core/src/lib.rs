//! Frequent-itemset and association-rule mining for equipment-inspection
//! records, plus an embedded property graph that turns mined rules and
//! curated triples into a queryable inspection knowledge base.
//!
//! The pipeline, end to end:
//!
//! 1. [`txdb`] reads transactions (the failed inspection items of each
//!    sampled device) or generates synthetic ones.
//! 2. [`fpgrowth`] mines frequent itemsets with an FP-tree; [`apriori`]
//!    provides the level-wise baseline and an exhaustive oracle.
//! 3. [`rules`] derives strong rules with support, confidence and lift.
//! 4. [`kgraph`] stores triples and rule edges and exports them.
//! 5. [`bench`] compares the two miners' wall-clock time.
//!
//! ```
//! use freqkg::{derive_rules, mine_fpgrowth, MiningConfig, TransactionDatabase};
//!
//! let db = TransactionDatabase::from_names([
//!     vec!["External pressure test", "Lightning impact test"],
//!     vec!["External pressure test", "Lightning impact test"],
//!     vec!["Insulating oil test"],
//! ])
//! .unwrap();
//! let config = MiningConfig::new(0.5, 0.6).unwrap();
//! let frequent = mine_fpgrowth(&db, &config).unwrap();
//! let rules = derive_rules(&frequent, &config, db.n()).unwrap();
//! assert_eq!(rules.len(), 2);
//! ```

pub mod apriori;
pub mod bench;
pub mod cli;
pub mod fpgrowth;
pub mod itemset;
pub mod kgraph;
pub mod rules;
pub mod txdb;

pub use apriori::{mine_apriori, mine_bruteforce, Apriori};
pub use bench::{run_benchmark, BenchReport, Benchmark};
pub use fpgrowth::{build_fptree, mine_fpgrowth, FpGrowth, FpTree};
pub use itemset::{FrequentItemset, MiningError};
pub use kgraph::{NodeKey, NodeLabel, PropertyGraph, Triple};
pub use rules::{derive_rules, rank_rules, AssociationRule, NamedRule};
pub use txdb::{ItemId, MiningConfig, Threshold, Transaction, TransactionDatabase};
