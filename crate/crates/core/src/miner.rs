//! Depth-first search over the set-enumeration tree, driven by PUN-list joins.
//!
//! Each itemset is extended only by prepending items ranked above its top
//! item. A branch is explored further while `u + au` reaches the threshold.

use std::time::{Duration, Instant};

use crate::amount::{Amount, MinUtility, Threshold};
use crate::error::Result;
use crate::model::{ItemId, UtilityDatabase};
use crate::punlist::{build_two_item_punlists, join_counted, PairScanCounters, PunList};
use crate::putree::{build_pu_tree, PuTree};
use crate::succinct::{build_succinct, resolve_threshold, ItemOrder, SuccinctDatabase};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinerConfig {
    pub order: ItemOrder,
    pub threshold: Threshold,
    /// Skip the 2-extensions of an item whose `u + au` misses the threshold.
    pub prune_singletons: bool,
    pub use_mark_optimization: bool,
}

impl MinerConfig {
    pub fn new(threshold: Threshold) -> Self {
        MinerConfig {
            order: ItemOrder::SupportDesc,
            threshold,
            prune_singletons: false,
            use_mark_optimization: true,
        }
    }

    pub fn with_order(mut self, order: ItemOrder) -> Self {
        self.order = order;
        self
    }
}

/// An itemset meeting the threshold, items in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HighUtilityItemset {
    pub items: Vec<ItemId>,
    pub utility: Amount,
}

impl HighUtilityItemset {
    /// Builds an entry from items in any order.
    pub fn new(mut items: Vec<ItemId>, utility: Amount) -> Self {
        items.sort_unstable();
        HighUtilityItemset { items, utility }
    }
}

/// Sorts by length, then lexicographically by item id.
pub fn sort_canonical(itemsets: &mut [HighUtilityItemset]) {
    itemsets.sort_by(|a, b| a.items.len().cmp(&b.items.len()).then_with(|| a.items.cmp(&b.items)));
}

/// Hooks into the search, for statistics and for checking invariants from tests.
///
/// Itemsets are passed top item first, the order in which they are built.
pub trait SearchObserver {
    /// A 1-itemset from the header table; `expanded` is false only when
    /// singleton pruning skipped its extensions.
    fn on_singleton(&mut self, _item: ItemId, _utility: Amount, _anterior: Amount, _expanded: bool) {}

    /// A materialized, non-empty PUN-list of a k ≥ 2 itemset.
    fn on_list(&mut self, _itemset: &[ItemId], _list: &PunList, _utility: Amount, _anterior: Amount, _promising: bool) {
    }

    /// One join, with the lengths of its inputs and the comparisons it made.
    fn on_join(&mut self, _y_len: usize, _z_len: usize, _comparisons: u64) {}
}

impl SearchObserver for () {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinerStats {
    /// Passes over the input: one to build the succinct database, one to build the tree.
    pub database_scans: u32,
    pub tree_nodes: usize,
    /// Materialized itemsets by length; index 0 is unused.
    pub explored: Vec<u64>,
    pub emitted: u64,
    pub joins: u64,
    pub join_comparisons: u64,
    pub pair_scan: PairScanCounters,
    /// Time spent building 2-itemset PUN-lists.
    pub two_itemset_time: Duration,
    pub total_time: Duration,
}

impl MinerStats {
    fn explore(&mut self, len: usize) {
        if self.explored.len() <= len {
            self.explored.resize(len + 1, 0);
        }
        self.explored[len] += 1;
    }

    pub fn explored_total(&self) -> u64 {
        self.explored.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct MiningOutcome {
    /// Canonically sorted results.
    pub itemsets: Vec<HighUtilityItemset>,
    pub minutility: MinUtility,
    pub stats: MinerStats,
}

/// `u + au ≥ minutility`: whether any extension can still qualify.
pub fn is_promising(utility: Amount, anterior: Amount, minutility: MinUtility) -> Result<bool> {
    minutility.admits_sum(utility, anterior)
}

/// Mines every itemset whose utility meets the configured threshold.
pub fn mine(db: &UtilityDatabase, cfg: &MinerConfig) -> Result<MiningOutcome> {
    mine_with(db, cfg, &mut ())
}

/// [`mine`], reporting every search step to `observer`.
pub fn mine_with<O: SearchObserver>(
    db: &UtilityDatabase,
    cfg: &MinerConfig,
    observer: &mut O,
) -> Result<MiningOutcome> {
    let start = Instant::now();
    let minutility = resolve_threshold(&cfg.threshold, db)?;
    let succinct = build_succinct(db, minutility, cfg.order)?;
    let mut tree = build_pu_tree(&succinct);

    let mut search = Search {
        minutility,
        found: Vec::new(),
        stats: MinerStats {
            database_scans: 2,
            tree_nodes: tree.len(),
            ..MinerStats::default()
        },
        observer,
    };
    search.run(&succinct, &mut tree, cfg)?;

    let mut itemsets = search.found;
    sort_canonical(&mut itemsets);
    let mut stats = search.stats;
    stats.emitted = itemsets.len() as u64;
    stats.total_time = start.elapsed();
    Ok(MiningOutcome {
        itemsets,
        minutility,
        stats,
    })
}

struct Search<'o, O> {
    minutility: MinUtility,
    found: Vec<HighUtilityItemset>,
    stats: MinerStats,
    observer: &'o mut O,
}

/// A freshly built extension of the current prefix.
struct Child {
    item: ItemId,
    list: PunList,
    promising: bool,
}

impl<O: SearchObserver> Search<'_, O> {
    fn run(&mut self, db: &SuccinctDatabase, tree: &mut PuTree, cfg: &MinerConfig) -> Result<()> {
        let ranking = db.ranking();
        for &item in ranking.items() {
            self.stats.explore(1);
            let utility = db.item_utility(item);
            if self.minutility.admits(utility) {
                self.found.push(HighUtilityItemset::new(vec![item], utility));
            }
            let anterior = tree.item_anterior(item);
            if cfg.prune_singletons && !is_promising(utility, anterior, self.minutility)? {
                self.observer.on_singleton(item, utility, anterior, false);
                continue;
            }
            self.observer.on_singleton(item, utility, anterior, true);

            let phase = Instant::now();
            let pairs = build_two_item_punlists(
                tree,
                item,
                ranking,
                cfg.use_mark_optimization,
                &mut self.stats.pair_scan,
            )?;
            self.stats.two_itemset_time += phase.elapsed();

            let base = [item];
            let mut children = Vec::with_capacity(pairs.len());
            for (x, list) in pairs {
                children.push(self.visit(x, &base, list)?);
            }
            self.descend(&base, &children)?;
        }
        Ok(())
    }

    /// Scores the list of `top · prefix`, emitting it when it qualifies.
    fn visit(&mut self, top: ItemId, prefix: &[ItemId], list: PunList) -> Result<Child> {
        let (utility, anterior) = list.totals()?;
        let promising = is_promising(utility, anterior, self.minutility)?;
        let mut itemset = Vec::with_capacity(prefix.len() + 1);
        itemset.push(top);
        itemset.extend_from_slice(prefix);
        self.stats.explore(itemset.len());
        self.observer.on_list(&itemset, &list, utility, anterior, promising);
        if self.minutility.admits(utility) {
            self.found.push(HighUtilityItemset::new(itemset, utility));
        }
        Ok(Child {
            item: top,
            list,
            promising,
        })
    }

    /// Recurses into each promising child, offering it the siblings ranked above it.
    fn descend(&mut self, prefix: &[ItemId], children: &[Child]) -> Result<()> {
        for (k, child) in children.iter().enumerate() {
            if !child.promising || k == 0 {
                continue;
            }
            let mut itemset = Vec::with_capacity(prefix.len() + 1);
            itemset.push(child.item);
            itemset.extend_from_slice(prefix);
            self.shui(&itemset, &child.list, &children[..k])?;
        }
        Ok(())
    }

    /// Extends `prefix` (= y·A) by every sibling z·A, z ranked above y.
    fn shui(&mut self, prefix: &[ItemId], prefix_list: &PunList, siblings: &[Child]) -> Result<()> {
        let mut children = Vec::with_capacity(siblings.len());
        for sibling in siblings {
            let mut comparisons = 0;
            let joined = join_counted(prefix_list, &sibling.list, &mut comparisons)?;
            self.stats.joins += 1;
            self.stats.join_comparisons += comparisons;
            self.observer
                .on_join(prefix_list.len(), sibling.list.len(), comparisons);
            if joined.is_empty() {
                continue;
            }
            children.push(self.visit(sibling.item, prefix, joined)?);
        }
        self.descend(prefix, &children)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample;

    fn sample_run(order: ItemOrder, marks: bool, prune: bool) -> (crate::model::ItemCatalog, MiningOutcome) {
        let db = sample::database().to_utility_database().unwrap();
        let mut cfg = MinerConfig::new(Threshold::Absolute(Amount::new(500))).with_order(order);
        cfg.use_mark_optimization = marks;
        cfg.prune_singletons = prune;
        let out = mine(&db, &cfg).unwrap();
        (db.catalog().clone(), out)
    }

    fn render(catalog: &crate::model::ItemCatalog, out: &MiningOutcome) -> Vec<String> {
        out.itemsets
            .iter()
            .map(|h| {
                let names: Vec<&str> = h.items.iter().map(|&i| catalog.name(i)).collect();
                format!("{}:{}", names.join(""), h.utility)
            })
            .collect()
    }

    #[test]
    fn sample_results() {
        for order in [ItemOrder::SupportDesc, ItemOrder::TwuDesc] {
            for marks in [true, false] {
                for prune in [true, false] {
                    let (catalog, out) = sample_run(order, marks, prune);
                    assert_eq!(render(&catalog, &out), ["ac:510", "bc:660", "acf:600"]);
                    assert_eq!(out.stats.database_scans, 2);
                }
            }
        }
    }

    #[test]
    fn threshold_above_total_finds_nothing() {
        let db = sample::database().to_utility_database().unwrap();
        let cfg = MinerConfig::new(Threshold::Absolute(Amount::new(1511)));
        assert!(mine(&db, &cfg).unwrap().itemsets.is_empty());
    }

    #[test]
    fn promising_bound() {
        let m = MinUtility::absolute(Amount::new(500));
        assert!(is_promising(Amount::new(240), Amount::new(360), m).unwrap());
        assert!(!is_promising(Amount::ZERO, Amount::ZERO, MinUtility::absolute(Amount::new(1))).unwrap());
        assert!(is_promising(Amount::new(i64::MAX), Amount::new(1), m).is_err());
    }

    #[derive(Default)]
    struct Recorder {
        lists: Vec<(Vec<ItemId>, Amount, Amount, bool)>,
    }

    impl SearchObserver for Recorder {
        fn on_list(&mut self, itemset: &[ItemId], _list: &PunList, u: Amount, au: Amount, promising: bool) {
            self.lists.push((itemset.to_vec(), u, au, promising));
        }
    }

    #[test]
    fn fb_is_extended_but_cfb_is_not_emitted() {
        let db = sample::database().to_utility_database().unwrap();
        let c = db.catalog();
        let cfg = MinerConfig::new(Threshold::Absolute(Amount::new(500)));
        let mut rec = Recorder::default();
        let out = mine_with(&db, &cfg, &mut rec).unwrap();
        let fb = vec![c.id("f").unwrap(), c.id("b").unwrap()];
        let cfb = vec![c.id("c").unwrap(), c.id("f").unwrap(), c.id("b").unwrap()];
        let fb_entry = rec.lists.iter().find(|l| l.0 == fb).unwrap();
        assert_eq!(
            (fb_entry.1, fb_entry.2, fb_entry.3),
            (Amount::new(300), Amount::new(240), true)
        );
        let cfb_entry = rec.lists.iter().find(|l| l.0 == cfb).unwrap();
        assert_eq!(cfb_entry.1, Amount::new(390));
        assert!(!out
            .itemsets
            .iter()
            .any(|h| h.items.len() == 3 && h.utility == Amount::new(390)));
    }
}
