//! Input data model: items, utility tables, transactions, and the scan-based
//! utility definitions that the rest of the crate is tested against.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::amount::{Amount, Precision};
use crate::error::{Error, Result};

/// Dense index of an item in an [`ItemCatalog`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(u32);

impl ItemId {
    pub const fn new(index: u32) -> Self {
        ItemId(index)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Natural ordering of item names: integers compare numerically and sort
/// before non-numeric names, which compare bytewise.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u128>(), b.parse::<u128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Bijection between item names and dense ids.
///
/// Ids are assigned in natural name order, so ascending id order is also the
/// canonical output order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemCatalog {
    names: Vec<String>,
    ids: HashMap<String, ItemId>,
}

impl ItemCatalog {
    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort_by(|a, b| natural_cmp(a, b));
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate item `{}`", w[0])));
        }
        if names.len() > u32::MAX as usize {
            return Err(Error::invalid("too many items"));
        }
        let ids = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), ItemId(i as u32)))
            .collect();
        Ok(ItemCatalog { names, ids })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, item: ItemId) -> &str {
        &self.names[item.index()]
    }

    pub fn id(&self, name: &str) -> Option<ItemId> {
        self.ids.get(name).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = ItemId> + '_ {
        (0..self.names.len() as u32).map(ItemId)
    }

    /// Looks up several names at once; panics on unknown names.
    pub fn itemset(&self, names: &[&str]) -> Vec<ItemId> {
        let mut items: Vec<ItemId> = names
            .iter()
            .map(|n| self.id(n).unwrap_or_else(|| panic!("unknown item `{n}`")))
            .collect();
        items.sort_unstable();
        items
    }
}

/// External utility v(i) of every item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityTable {
    external: Vec<Amount>,
    precision: Precision,
}

impl UtilityTable {
    pub fn new(external: Vec<Amount>, precision: Precision) -> Result<Self> {
        if let Some(pos) = external.iter().position(|v| v.get() <= 0) {
            return Err(Error::invalid(format!(
                "external utility of item #{pos} must be positive"
            )));
        }
        Ok(UtilityTable { external, precision })
    }

    pub fn get(&self, item: ItemId) -> Amount {
        self.external[item.index()]
    }

    pub fn len(&self) -> usize {
        self.external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }
}

/// Sorts entries by item and merges repeated items with `merge`.
fn normalize_entries<V: Copy>(entries: &mut Vec<(ItemId, V)>, mut merge: impl FnMut(V, V) -> Result<V>) -> Result<()> {
    entries.sort_by_key(|&(item, _)| item);
    let mut merged: Vec<(ItemId, V)> = Vec::with_capacity(entries.len());
    for &(item, value) in entries.iter() {
        match merged.last_mut() {
            Some(last) if last.0 == item => last.1 = merge(last.1, value)?,
            _ => merged.push((item, value)),
        }
    }
    *entries = merged;
    Ok(())
}

/// A transaction of `(item, count)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTransaction {
    tid: u32,
    entries: Vec<(ItemId, u32)>,
}

impl RawTransaction {
    /// Builds a transaction, summing the counts of repeated items.
    pub fn new(tid: u32, mut entries: Vec<(ItemId, u32)>) -> Result<Self> {
        if tid == 0 {
            return Err(Error::invalid("transaction ids start at 1"));
        }
        if entries.iter().any(|&(_, c)| c == 0) {
            return Err(Error::invalid(format!("transaction {tid} has an item with count 0")));
        }
        normalize_entries(&mut entries, |a, b| {
            a.checked_add(b).ok_or(Error::Overflow("item count"))
        })?;
        Ok(RawTransaction { tid, entries })
    }

    pub fn tid(&self) -> u32 {
        self.tid
    }

    /// Entries sorted by item id.
    pub fn entries(&self) -> &[(ItemId, u32)] {
        &self.entries
    }

    pub fn count(&self, item: ItemId) -> Option<u32> {
        self.entries
            .binary_search_by_key(&item, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.count(item).is_some()
    }
}

/// u(i, T) = c(i, T) × v(i).
pub fn tx_item_utility(t: &RawTransaction, item: ItemId, ut: &UtilityTable) -> Result<Amount> {
    let count = t.count(item).ok_or_else(|| Error::ItemNotInTransaction {
        item: item.to_string(),
        tid: t.tid,
    })?;
    ut.get(item).times(count)
}

/// u(A, T): the summed utility of `items` in `t`, or zero when `t` lacks one of them.
pub fn tx_itemset_utility(t: &RawTransaction, items: &[ItemId], ut: &UtilityTable) -> Result<Amount> {
    if !items.iter().all(|&i| t.contains(i)) {
        return Ok(Amount::ZERO);
    }
    items
        .iter()
        .try_fold(Amount::ZERO, |acc, &i| acc.checked_add(tx_item_utility(t, i, ut)?))
}

/// u(A): utility of `items` summed over every transaction containing them.
pub fn db_itemset_utility(db: &TransactionDatabase, items: &[ItemId]) -> Result<Amount> {
    db.transactions.iter().try_fold(Amount::ZERO, |acc, t| {
        acc.checked_add(tx_itemset_utility(t, items, &db.utilities)?)
    })
}

/// tu(T): the utility of every item in `t`.
pub fn tx_utility(t: &RawTransaction, ut: &UtilityTable) -> Result<Amount> {
    t.entries
        .iter()
        .try_fold(Amount::ZERO, |acc, &(i, c)| acc.checked_add(ut.get(i).times(c)?))
}

/// twu({i}) for every item, indexed by item id.
pub fn item_twu(db: &TransactionDatabase) -> Result<Vec<Amount>> {
    let mut twu = vec![Amount::ZERO; db.catalog.len()];
    for t in &db.transactions {
        let tu = tx_utility(t, &db.utilities)?;
        for &(i, _) in &t.entries {
            twu[i.index()] = twu[i.index()].checked_add(tu)?;
        }
    }
    Ok(twu)
}

/// Transactions with counts plus the utility table that prices them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransactionDatabase {
    catalog: ItemCatalog,
    utilities: UtilityTable,
    transactions: Vec<RawTransaction>,
}

impl TransactionDatabase {
    pub fn new(catalog: ItemCatalog, utilities: UtilityTable, transactions: Vec<RawTransaction>) -> Result<Self> {
        if catalog.len() != utilities.len() {
            return Err(Error::invalid(format!(
                "{} items but {} external utilities",
                catalog.len(),
                utilities.len()
            )));
        }
        for t in &transactions {
            if let Some(&(i, _)) = t.entries.iter().find(|(i, _)| i.index() >= catalog.len()) {
                return Err(Error::invalid(format!(
                    "transaction {} references unknown item {i}",
                    t.tid
                )));
            }
        }
        Ok(TransactionDatabase {
            catalog,
            utilities,
            transactions,
        })
    }

    pub fn catalog(&self) -> &ItemCatalog {
        &self.catalog
    }

    pub fn utilities(&self) -> &UtilityTable {
        &self.utilities
    }

    pub fn transactions(&self) -> &[RawTransaction] {
        &self.transactions
    }

    /// Prices every entry, producing the form the miners consume.
    pub fn to_utility_database(&self) -> Result<UtilityDatabase> {
        let transactions = self
            .transactions
            .iter()
            .map(|t| {
                let entries = t
                    .entries
                    .iter()
                    .map(|&(i, c)| Ok((i, self.utilities.get(i).times(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                UtilityTransaction::new(t.tid, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        UtilityDatabase::new(self.catalog.clone(), self.utilities.precision, transactions)
    }
}

/// A transaction whose entries already carry u(i, T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityTransaction {
    tid: u32,
    entries: Vec<(ItemId, Amount)>,
}

impl UtilityTransaction {
    pub fn new(tid: u32, mut entries: Vec<(ItemId, Amount)>) -> Result<Self> {
        if tid == 0 {
            return Err(Error::invalid("transaction ids start at 1"));
        }
        if entries.iter().any(|&(_, u)| u.get() <= 0) {
            return Err(Error::invalid(format!(
                "transaction {tid} has an item with nonpositive utility"
            )));
        }
        normalize_entries(&mut entries, Amount::checked_add)?;
        Ok(UtilityTransaction { tid, entries })
    }

    pub fn tid(&self) -> u32 {
        self.tid
    }

    /// Entries sorted by item id.
    pub fn entries(&self) -> &[(ItemId, Amount)] {
        &self.entries
    }

    pub fn utility_of(&self, item: ItemId) -> Option<Amount> {
        self.entries
            .binary_search_by_key(&item, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn contains_all(&self, items: &[ItemId]) -> bool {
        items.iter().all(|&i| self.utility_of(i).is_some())
    }

    /// tu(T).
    pub fn utility(&self) -> Result<Amount> {
        Amount::try_sum(self.entries.iter().map(|&(_, u)| u))
    }

    /// u(A, T), zero when the transaction does not contain every item.
    pub fn itemset_utility(&self, items: &[ItemId]) -> Result<Amount> {
        let mut sum = Amount::ZERO;
        for &i in items {
            match self.utility_of(i) {
                Some(u) => sum = sum.checked_add(u)?,
                None => return Ok(Amount::ZERO),
            }
        }
        Ok(sum)
    }
}

/// Transactions with per-entry utilities; the common input of every miner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityDatabase {
    catalog: ItemCatalog,
    precision: Precision,
    transactions: Vec<UtilityTransaction>,
}

impl UtilityDatabase {
    pub fn new(catalog: ItemCatalog, precision: Precision, transactions: Vec<UtilityTransaction>) -> Result<Self> {
        for t in &transactions {
            if let Some(&(i, _)) = t.entries.iter().find(|(i, _)| i.index() >= catalog.len()) {
                return Err(Error::invalid(format!(
                    "transaction {} references unknown item {i}",
                    t.tid
                )));
            }
        }
        let db = UtilityDatabase {
            catalog,
            precision,
            transactions,
        };
        // every later sum is bounded by the total, so checking it here is enough
        // to rule out overflow in the search
        db.total_utility()?;
        Ok(db)
    }

    pub fn catalog(&self) -> &ItemCatalog {
        &self.catalog
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn transactions(&self) -> &[UtilityTransaction] {
        &self.transactions
    }

    /// Σ tu(T) over all transactions.
    pub fn total_utility(&self) -> Result<Amount> {
        self.transactions
            .iter()
            .try_fold(Amount::ZERO, |acc, t| acc.checked_add(t.utility()?))
    }

    /// u(A) by a full scan.
    pub fn itemset_utility(&self, items: &[ItemId]) -> Result<Amount> {
        self.transactions
            .iter()
            .try_fold(Amount::ZERO, |acc, t| acc.checked_add(t.itemset_utility(items)?))
    }

    /// Number of transactions containing every item of `items`.
    pub fn itemset_support(&self, items: &[ItemId]) -> usize {
        self.transactions.iter().filter(|t| t.contains_all(items)).count()
    }

    /// twu(A) by a full scan.
    pub fn itemset_twu(&self, items: &[ItemId]) -> Result<Amount> {
        self.transactions
            .iter()
            .filter(|t| t.contains_all(items))
            .try_fold(Amount::ZERO, |acc, t| acc.checked_add(t.utility()?))
    }

    /// Per-item supports, indexed by item id.
    pub fn item_supports(&self) -> Vec<u32> {
        let mut support = vec![0u32; self.catalog.len()];
        for t in &self.transactions {
            for &(i, _) in &t.entries {
                support[i.index()] += 1;
            }
        }
        support
    }

    /// Per-item twu, indexed by item id.
    pub fn item_twu(&self) -> Result<Vec<Amount>> {
        let mut twu = vec![Amount::ZERO; self.catalog.len()];
        for t in &self.transactions {
            let tu = t.utility()?;
            for &(i, _) in &t.entries {
                twu[i.index()] = twu[i.index()].checked_add(tu)?;
            }
        }
        Ok(twu)
    }

    /// The database concatenated with itself `copies` times, tids renumbered.
    pub fn replicate(&self, copies: u32) -> Result<Self> {
        let n = self.transactions.len() as u64;
        if n * u64::from(copies) > u64::from(u32::MAX) {
            return Err(Error::invalid("replicated database has too many transactions"));
        }
        let mut transactions = Vec::with_capacity((n * u64::from(copies)) as usize);
        for copy in 0..u64::from(copies) {
            for (k, t) in self.transactions.iter().enumerate() {
                transactions.push(UtilityTransaction {
                    tid: (copy * n + k as u64 + 1) as u32,
                    entries: t.entries.clone(),
                });
            }
        }
        UtilityDatabase::new(self.catalog.clone(), self.precision, transactions)
    }
}
