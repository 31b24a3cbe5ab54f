//! TWU filtering, item ordering, and the succinct database the tree is built from.

use std::cmp::Ordering;

use crate::amount::{Amount, MinUtility, Threshold};
use crate::error::{Error, Result};
use crate::model::{ItemId, UtilityDatabase, UtilityTransaction};

/// Which statistic ranks items; higher values come first.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum ItemOrder {
    #[default]
    SupportDesc,
    TwuDesc,
}

impl ItemOrder {
    pub fn name(self) -> &'static str {
        match self {
            ItemOrder::SupportDesc => "support",
            ItemOrder::TwuDesc => "twu",
        }
    }
}

/// A total order on the retained items. Rank 0 is the highest-ranked item;
/// `x` precedes `y` when `rank(x) < rank(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemRanking {
    order: Vec<ItemId>,
    rank: Vec<Option<u32>>,
}

impl ItemRanking {
    /// Items from highest to lowest rank.
    pub fn items(&self) -> &[ItemId] {
        &self.order
    }

    pub fn rank(&self, item: ItemId) -> Option<u32> {
        self.rank.get(item.index()).copied().flatten()
    }

    /// Rank of an item known to be ranked.
    #[inline]
    pub(crate) fn rank_of(&self, item: ItemId) -> u32 {
        self.rank[item.index()].expect("item is not ranked")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Compares two item sequences (each already in rank order) lexicographically,
    /// a strict prefix first.
    pub(crate) fn cmp_sequences(&self, a: &[ItemId], b: &[ItemId]) -> Ordering {
        let ra = a.iter().map(|&i| self.rank_of(i));
        let rb = b.iter().map(|&i| self.rank_of(i));
        ra.cmp(rb)
    }
}

/// Ranks every item with nonzero support in `db` by descending support or
/// twu, ties broken by ascending item id.
pub fn compute_isdo(db: &UtilityDatabase, strategy: ItemOrder) -> Result<ItemRanking> {
    let support = db.item_supports();
    let twu = db.item_twu()?;
    let mut order: Vec<ItemId> = db.catalog().ids().filter(|i| support[i.index()] > 0).collect();
    match strategy {
        ItemOrder::SupportDesc => order.sort_by(|a, b| support[b.index()].cmp(&support[a.index()]).then(a.cmp(b))),
        ItemOrder::TwuDesc => order.sort_by(|a, b| twu[b.index()].cmp(&twu[a.index()]).then(a.cmp(b))),
    }
    let mut rank = vec![None; db.catalog().len()];
    for (r, item) in order.iter().enumerate() {
        rank[item.index()] = Some(r as u32);
    }
    Ok(ItemRanking { order, rank })
}

/// u(i, T) annotated transaction with items in rank order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccinctTransaction {
    tid: u32,
    source_tid: u32,
    entries: Vec<(ItemId, Amount)>,
    tu: Amount,
}

impl SuccinctTransaction {
    /// Builds a transaction directly; `entries` must already be in rank order.
    pub fn new(tid: u32, entries: Vec<(ItemId, Amount)>) -> Result<Self> {
        let tu = Amount::try_sum(entries.iter().map(|&(_, u)| u))?;
        Ok(SuccinctTransaction {
            tid,
            source_tid: tid,
            entries,
            tu,
        })
    }

    /// Position in the sorted database, starting at 1.
    pub fn tid(&self) -> u32 {
        self.tid
    }

    /// Tid of the input transaction this one was derived from.
    pub fn source_tid(&self) -> u32 {
        self.source_tid
    }

    /// Entries from the highest-ranked item down.
    pub fn entries(&self) -> &[(ItemId, Amount)] {
        &self.entries
    }

    pub fn tu(&self) -> Amount {
        self.tu
    }

    pub fn utility_of(&self, item: ItemId) -> Option<Amount> {
        self.entries.iter().find(|&&(i, _)| i == item).map(|&(_, u)| u)
    }

    pub fn contains_all(&self, items: &[ItemId]) -> bool {
        items.iter().all(|&i| self.utility_of(i).is_some())
    }
}

/// The filtered, sorted database: the only input the tree and the baselines see.
#[derive(Clone, Debug)]
pub struct SuccinctDatabase {
    transactions: Vec<SuccinctTransaction>,
    ranking: ItemRanking,
    support: Vec<u32>,
    item_utility: Vec<Amount>,
    total_utility: Amount,
    minutility: MinUtility,
}

impl SuccinctDatabase {
    pub fn transactions(&self) -> &[SuccinctTransaction] {
        &self.transactions
    }

    pub fn ranking(&self) -> &ItemRanking {
        &self.ranking
    }

    /// Support of an item among the succinct transactions.
    pub fn support(&self, item: ItemId) -> u32 {
        self.support[item.index()]
    }

    /// u({i}).
    pub fn item_utility(&self, item: ItemId) -> Amount {
        self.item_utility[item.index()]
    }

    /// Σ tu(T) over the original, unfiltered database.
    pub fn total_utility(&self) -> Amount {
        self.total_utility
    }

    pub fn minutility(&self) -> MinUtility {
        self.minutility
    }

    /// u(A) recomputed from the succinct entries.
    pub fn itemset_utility(&self, items: &[ItemId]) -> Result<Amount> {
        let mut sum = Amount::ZERO;
        for t in self.transactions.iter().filter(|t| t.contains_all(items)) {
            for &i in items {
                sum = sum.checked_add(t.utility_of(i).unwrap_or_default())?;
            }
        }
        Ok(sum)
    }

    /// twu of an item over the succinct transactions (a statistic only; the
    /// filter itself uses the original database).
    pub fn item_twu(&self, item: ItemId) -> Result<Amount> {
        Amount::try_sum(
            self.transactions
                .iter()
                .filter(|t| t.utility_of(item).is_some())
                .map(|t| t.tu),
        )
    }
}

/// Resolves a threshold against the total utility of `db`.
pub fn resolve_threshold(threshold: &Threshold, db: &UtilityDatabase) -> Result<MinUtility> {
    Ok(threshold.resolve(db.total_utility()?))
}

/// Drops items whose twu falls below `minutility`, annotates and sorts what
/// remains, and renumbers transactions 1..n in sorted order.
pub fn build_succinct(db: &UtilityDatabase, minutility: MinUtility, strategy: ItemOrder) -> Result<SuccinctDatabase> {
    let total_utility = db.total_utility()?;
    let twu = db.item_twu()?;
    let retained: Vec<bool> = twu.iter().map(|&w| w.get() > 0 && minutility.admits(w)).collect();

    let filtered = db
        .transactions()
        .iter()
        .filter_map(|t| {
            let entries: Vec<(ItemId, Amount)> = t
                .entries()
                .iter()
                .copied()
                .filter(|&(i, _)| retained[i.index()])
                .collect();
            (!entries.is_empty()).then(|| UtilityTransaction::new(t.tid(), entries))
        })
        .collect::<Result<Vec<_>>>()?;
    let filtered = UtilityDatabase::new(db.catalog().clone(), db.precision(), filtered)?;
    let ranking = compute_isdo(&filtered, strategy)?;

    let mut transactions = filtered
        .transactions()
        .iter()
        .map(|t| {
            let mut entries = t.entries().to_vec();
            entries.sort_by_key(|&(i, _)| ranking.rank_of(i));
            Ok(SuccinctTransaction {
                tid: 0,
                source_tid: t.tid(),
                tu: t.utility()?,
                entries,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    transactions.sort_by(|a, b| {
        let ia: Vec<ItemId> = a.entries.iter().map(|&(i, _)| i).collect();
        let ib: Vec<ItemId> = b.entries.iter().map(|&(i, _)| i).collect();
        ranking.cmp_sequences(&ia, &ib)
    });
    for (k, t) in transactions.iter_mut().enumerate() {
        t.tid = k as u32 + 1;
    }

    let support = filtered.item_supports();
    let mut item_utility = vec![Amount::ZERO; db.catalog().len()];
    for t in &transactions {
        for &(i, u) in &t.entries {
            item_utility[i.index()] = item_utility[i.index()].checked_add(u)?;
        }
    }

    Ok(SuccinctDatabase {
        transactions,
        ranking,
        support,
        item_utility,
        total_utility,
        minutility,
    })
}

/// prii(A, T): the items of `t` ranked above the highest-ranked item of `items`.
pub fn prii_set(items: &[ItemId], t: &SuccinctTransaction, ranking: &ItemRanking) -> Result<Vec<ItemId>> {
    if items.is_empty() {
        return Err(Error::invalid("prii of the empty itemset is undefined"));
    }
    if !t.contains_all(items) {
        return Err(Error::invalid(format!(
            "itemset is not contained in transaction {}",
            t.tid
        )));
    }
    let first = items.iter().map(|&i| ranking.rank_of(i)).min().unwrap_or(0);
    Ok(t.entries
        .iter()
        .map(|&(i, _)| i)
        .take_while(|&i| ranking.rank_of(i) < first)
        .collect())
}

/// au(A, T): summed utility of prii(A, T).
pub fn tx_anterior_utility(items: &[ItemId], t: &SuccinctTransaction, ranking: &ItemRanking) -> Result<Amount> {
    let prior = prii_set(items, t, ranking)?;
    Amount::try_sum(prior.iter().map(|&i| t.utility_of(i).unwrap_or_default()))
}

/// au(A): anterior utility summed over every succinct transaction containing `items`.
pub fn anterior_utility(items: &[ItemId], db: &SuccinctDatabase) -> Result<Amount> {
    let mut sum = Amount::ZERO;
    for t in db.transactions.iter().filter(|t| t.contains_all(items)) {
        sum = sum.checked_add(tx_anterior_utility(items, t, &db.ranking)?)?;
    }
    Ok(sum)
}
