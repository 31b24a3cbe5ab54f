//! Side-by-side list sizes of the node-list and utility-list miners.

use std::collections::HashMap;
use std::time::Duration;

use num_rational::Ratio;

use crate::amount::Amount;
use crate::error::{Error, Result};
use crate::miner::{mine_with, MinerConfig, SearchObserver};
use crate::model::{ItemId, UtilityDatabase};
use crate::punlist::PunList;

use super::utility_list::{utility_list_mine_with, ListObserver, UtilityList};

/// Which itemsets the averages are taken over.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Population {
    /// High utility itemsets of length ≥ 2.
    #[default]
    Emitted,
    /// Every k ≥ 2 itemset whose list was materialized.
    Explored,
}

impl Population {
    pub fn name(self) -> &'static str {
        match self {
            Population::Emitted => "emitted",
            Population::Explored => "explored",
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ListTotals {
    pub itemsets: u64,
    pub punlist_entries: u64,
    pub utility_list_entries: u64,
}

impl ListTotals {
    pub fn avg_punlist_len(&self) -> Option<Ratio<u64>> {
        (self.itemsets > 0).then(|| Ratio::new(self.punlist_entries, self.itemsets))
    }

    pub fn avg_utility_list_len(&self) -> Option<Ratio<u64>> {
        (self.itemsets > 0).then(|| Ratio::new(self.utility_list_entries, self.itemsets))
    }

    /// Σ utility-list length over Σ PUN-list length.
    pub fn reduction_ratio(&self) -> Option<Ratio<u64>> {
        (self.punlist_entries > 0).then(|| Ratio::new(self.utility_list_entries, self.punlist_entries))
    }

    fn add(&mut self, pun: usize, ul: usize) {
        self.itemsets += 1;
        self.punlist_entries += pun as u64;
        self.utility_list_entries += ul as u64;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureStats {
    pub emitted: ListTotals,
    pub explored: ListTotals,
    /// High utility itemsets of every length.
    pub emitted_count: u64,
    pub explored_count: u64,
    pub joins: u64,
    pub join_comparisons: u64,
    pub two_itemset_time: Duration,
    pub total_time: Duration,
    pub utility_list_time: Duration,
}

impl StructureStats {
    pub fn population(&self, p: Population) -> &ListTotals {
        match p {
            Population::Emitted => &self.emitted,
            Population::Explored => &self.explored,
        }
    }
}

#[derive(Default)]
struct PunLengths(HashMap<Vec<ItemId>, usize>);

impl SearchObserver for PunLengths {
    fn on_list(&mut self, itemset: &[ItemId], list: &PunList, _: Amount, _: Amount, _: bool) {
        self.0.insert(sorted(itemset), list.len());
    }
}

#[derive(Default)]
struct UtilityListLengths(HashMap<Vec<ItemId>, usize>);

impl ListObserver for UtilityListLengths {
    fn on_list(&mut self, itemset: &[ItemId], list: &UtilityList, _: Amount, _: Amount) {
        self.0.insert(sorted(itemset), list.len());
    }
}

fn sorted(itemset: &[ItemId]) -> Vec<ItemId> {
    let mut v = itemset.to_vec();
    v.sort_unstable();
    v
}

/// Runs both miners and compares their list sizes itemset by itemset.
///
/// Fails if the two searches did not materialize the same itemsets or did
/// not agree on the results.
pub fn collect_stats(db: &UtilityDatabase, cfg: &MinerConfig) -> Result<StructureStats> {
    let mut pun = PunLengths::default();
    let outcome = mine_with(db, cfg, &mut pun)?;
    let mut ul = UtilityListLengths::default();
    let ul_outcome = utility_list_mine_with(db, cfg, &mut ul)?;

    if outcome.itemsets != ul_outcome.itemsets || pun.0.len() != ul.0.len() {
        return Err(Error::invalid("node-list and utility-list searches disagree"));
    }

    let mut stats = StructureStats {
        emitted_count: outcome.stats.emitted,
        explored_count: outcome.stats.explored_total(),
        joins: outcome.stats.joins,
        join_comparisons: outcome.stats.join_comparisons,
        two_itemset_time: outcome.stats.two_itemset_time,
        total_time: outcome.stats.total_time,
        utility_list_time: ul_outcome.stats.elapsed,
        ..StructureStats::default()
    };
    for (itemset, &pun_len) in &pun.0 {
        let ul_len = *ul
            .0
            .get(itemset)
            .ok_or_else(|| Error::invalid("node-list and utility-list searches disagree"))?;
        stats.explored.add(pun_len, ul_len);
    }
    for h in outcome.itemsets.iter().filter(|h| h.items.len() >= 2) {
        stats.emitted.add(pun.0[&h.items], ul.0[&h.items]);
    }
    Ok(stats)
}
