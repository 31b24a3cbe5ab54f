//! A utility-list miner over the same succinct database and search order.
//!
//! Each itemset keeps one entry per containing transaction. `rutil` uses the
//! same convention as the node lists: the utility of the items ranked above
//! the itemset's top item, so both miners prune identically and differ only
//! in list length.

use std::fmt;
use std::time::Instant;

use crate::amount::{Amount, MinUtility};
use crate::error::Result;
use crate::miner::{is_promising, sort_canonical, HighUtilityItemset, MinerConfig};
use crate::model::{ItemId, UtilityDatabase};
use crate::succinct::{build_succinct, resolve_threshold, SuccinctDatabase};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct UtilityListEntry {
    pub tid: u32,
    pub iutil: Amount,
    pub rutil: Amount,
}

impl UtilityListEntry {
    pub const fn new(tid: u32, iutil: i64, rutil: i64) -> Self {
        UtilityListEntry {
            tid,
            iutil: Amount::new(iutil),
            rutil: Amount::new(rutil),
        }
    }
}

/// Entries in ascending tid order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UtilityList {
    entries: Vec<UtilityListEntry>,
}

impl UtilityList {
    pub fn entries(&self) -> &[UtilityListEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(Σ iutil, Σ rutil)`.
    pub fn totals(&self) -> Result<(Amount, Amount)> {
        self.entries.iter().try_fold((Amount::ZERO, Amount::ZERO), |(u, r), e| {
            Ok((u.checked_add(e.iutil)?, r.checked_add(e.rutil)?))
        })
    }
}

impl fmt::Display for UtilityList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "(T{}: {}, {})", e.tid, e.iutil, e.rutil)?;
        }
        f.write_str("}")
    }
}

/// Single-item lists, in rank order.
pub fn item_utility_lists(db: &SuccinctDatabase) -> Vec<(ItemId, UtilityList)> {
    let ranking = db.ranking();
    let mut lists: Vec<UtilityList> = vec![UtilityList::default(); ranking.len()];
    for t in db.transactions() {
        let mut anterior = Amount::ZERO;
        for &(item, u) in t.entries() {
            lists[ranking.rank_of(item) as usize].entries.push(UtilityListEntry {
                tid: t.tid(),
                iutil: u,
                rutil: anterior,
            });
            // bounded by tu
            anterior = Amount::new(anterior.get() + u.get());
        }
    }
    ranking.items().iter().copied().zip(lists).collect()
}

/// Joins the lists of `y·A` and `z·A` into the list of `z·y·A`.
///
/// `base` is the list of `A`; `None` when `A` is empty, i.e. when joining
/// two single items.
pub fn join_utility_lists(y: &UtilityList, z: &UtilityList, base: Option<&UtilityList>) -> Result<UtilityList> {
    let (ys, zs) = (&y.entries, &z.entries);
    let mut out = Vec::new();
    let (mut a, mut b, mut c) = (0, 0, 0);
    while a < ys.len() && b < zs.len() {
        let (ey, ez) = (&ys[a], &zs[b]);
        match ey.tid.cmp(&ez.tid) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                let mut iutil = ey.iutil.checked_add(ez.iutil)?;
                if let Some(base) = base {
                    while base.entries[c].tid < ey.tid {
                        c += 1;
                    }
                    iutil = iutil.checked_sub(base.entries[c].iutil)?;
                }
                out.push(UtilityListEntry {
                    tid: ey.tid,
                    iutil,
                    rutil: ez.rutil,
                });
                a += 1;
                b += 1;
            }
        }
    }
    Ok(UtilityList { entries: out })
}

/// Hook for per-itemset list statistics. Itemsets are top item first.
pub trait ListObserver {
    fn on_list(&mut self, itemset: &[ItemId], list: &UtilityList, utility: Amount, anterior: Amount);
}

impl ListObserver for () {
    fn on_list(&mut self, _: &[ItemId], _: &UtilityList, _: Amount, _: Amount) {}
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UtilityListStats {
    /// Lists built for k ≥ 2 itemsets (empty ones excluded).
    pub lists_built: u64,
    /// Σ length of those lists.
    pub total_length: u64,
    pub elapsed: std::time::Duration,
}

#[derive(Clone, Debug)]
pub struct UtilityListOutcome {
    pub itemsets: Vec<HighUtilityItemset>,
    pub minutility: MinUtility,
    pub stats: UtilityListStats,
}

pub fn utility_list_mine(db: &UtilityDatabase, cfg: &MinerConfig) -> Result<UtilityListOutcome> {
    utility_list_mine_with(db, cfg, &mut ())
}

pub fn utility_list_mine_with<O: ListObserver>(
    db: &UtilityDatabase,
    cfg: &MinerConfig,
    observer: &mut O,
) -> Result<UtilityListOutcome> {
    let start = Instant::now();
    let minutility = resolve_threshold(&cfg.threshold, db)?;
    let succinct = build_succinct(db, minutility, cfg.order)?;
    let singles = item_utility_lists(&succinct);

    let mut search = Search {
        minutility,
        found: Vec::new(),
        stats: UtilityListStats::default(),
        observer,
    };
    for (k, (item, list)) in singles.iter().enumerate() {
        let (utility, anterior) = list.totals()?;
        if minutility.admits(utility) {
            search.found.push(HighUtilityItemset::new(vec![*item], utility));
        }
        if cfg.prune_singletons && !is_promising(utility, anterior, minutility)? {
            continue;
        }
        // items ranked above `item` come first in `singles`
        let mut children = Vec::with_capacity(k);
        for (x, x_list) in &singles[..k] {
            let joined = join_utility_lists(list, x_list, None)?;
            if let Some(child) = search.visit(*x, &[*item], joined)? {
                children.push(child);
            }
        }
        search.descend(&[*item], list, &children)?;
    }

    let mut itemsets = search.found;
    sort_canonical(&mut itemsets);
    let mut stats = search.stats;
    stats.elapsed = start.elapsed();
    Ok(UtilityListOutcome {
        itemsets,
        minutility,
        stats,
    })
}

struct Child {
    item: ItemId,
    list: UtilityList,
    promising: bool,
}

struct Search<'o, O> {
    minutility: MinUtility,
    found: Vec<HighUtilityItemset>,
    stats: UtilityListStats,
    observer: &'o mut O,
}

impl<O: ListObserver> Search<'_, O> {
    fn visit(&mut self, top: ItemId, prefix: &[ItemId], list: UtilityList) -> Result<Option<Child>> {
        if list.is_empty() {
            return Ok(None);
        }
        let (utility, anterior) = list.totals()?;
        let mut itemset = Vec::with_capacity(prefix.len() + 1);
        itemset.push(top);
        itemset.extend_from_slice(prefix);
        self.stats.lists_built += 1;
        self.stats.total_length += list.len() as u64;
        self.observer.on_list(&itemset, &list, utility, anterior);
        if self.minutility.admits(utility) {
            self.found.push(HighUtilityItemset::new(itemset, utility));
        }
        Ok(Some(Child {
            item: top,
            promising: is_promising(utility, anterior, self.minutility)?,
            list,
        }))
    }

    /// `suffix_list` is the list of `suffix`, shared by every child.
    fn descend(&mut self, suffix: &[ItemId], suffix_list: &UtilityList, children: &[Child]) -> Result<()> {
        for (k, child) in children.iter().enumerate() {
            if !child.promising || k == 0 {
                continue;
            }
            let mut prefix = Vec::with_capacity(suffix.len() + 1);
            prefix.push(child.item);
            prefix.extend_from_slice(suffix);
            let mut grandchildren = Vec::with_capacity(k);
            for sibling in &children[..k] {
                let joined = join_utility_lists(&child.list, &sibling.list, Some(suffix_list))?;
                if let Some(g) = self.visit(sibling.item, &prefix, joined)? {
                    grandchildren.push(g);
                }
            }
            self.descend(&prefix, &child.list, &grandchildren)?;
        }
        Ok(())
    }
}
