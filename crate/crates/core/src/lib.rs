//! High-utility itemset mining over a prefix utility tree.
//!
//! The pipeline: filter items by transaction-weighted utility and sort the
//! database ([`succinct`]), thread it into a prefix tree ([`putree`]), derive
//! per-itemset node lists from the tree ([`punlist`]), and search the itemset
//! lattice depth first with those lists ([`miner`]). [`baselines`] holds an
//! exhaustive oracle and a utility-list miner to compare against.

pub mod amount;
pub mod baselines;
pub mod datagen;
pub mod error;
pub mod io;
pub mod miner;
pub mod model;
pub mod punlist;
pub mod putree;
pub mod succinct;

pub use amount::{Amount, MinUtility, Precision, Threshold};
pub use error::{Error, Result};
pub use miner::{mine, mine_with, HighUtilityItemset, MinerConfig, MiningOutcome, SearchObserver};
pub use model::{ItemCatalog, ItemId, RawTransaction, TransactionDatabase, UtilityDatabase, UtilityTable};
pub use succinct::ItemOrder;
