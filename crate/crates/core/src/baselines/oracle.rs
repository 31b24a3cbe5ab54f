//! Exhaustive miner: enumerates item subsets and scores each by full scans.
//!
//! Shares nothing with the tree-based search beyond the input types. The only
//! pruning is dropping subsets that no transaction contains.

use crate::amount::{Amount, Threshold};
use crate::error::{Error, Result};
use crate::miner::{sort_canonical, HighUtilityItemset};
use crate::model::{ItemId, UtilityDatabase};

pub const DEFAULT_ENUMERATION_BOUND: usize = 20;

/// Every itemset contained in at least one transaction, with its utility.
pub fn enumerate_occurring(db: &UtilityDatabase, bound: usize) -> Result<Vec<(Vec<ItemId>, Amount)>> {
    let supports = db.item_supports();
    let mut items: Vec<ItemId> = db.catalog().ids().filter(|i| supports[i.index()] > 0).collect();
    if items.len() > bound {
        return Err(Error::EnumerationBound {
            items: items.len(),
            bound,
        });
    }
    items.sort_by(|a, b| supports[b.index()].cmp(&supports[a.index()]).then(a.cmp(b)));

    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(db, &items, 0, &mut current, &mut out)?;
    Ok(out)
}

fn extend(
    db: &UtilityDatabase,
    items: &[ItemId],
    from: usize,
    current: &mut Vec<ItemId>,
    out: &mut Vec<(Vec<ItemId>, Amount)>,
) -> Result<()> {
    for k in from..items.len() {
        current.push(items[k]);
        if db.itemset_support(current) > 0 {
            out.push((current.clone(), db.itemset_utility(current)?));
            extend(db, items, k + 1, current, out)?;
        }
        current.pop();
    }
    Ok(())
}

/// All itemsets whose utility meets `threshold`, canonically sorted.
///
/// Refuses databases with more than `bound` occurring items.
pub fn brute_force_mine(db: &UtilityDatabase, threshold: &Threshold, bound: usize) -> Result<Vec<HighUtilityItemset>> {
    let minutility = threshold.resolve(db.total_utility()?);
    let mut found: Vec<HighUtilityItemset> = enumerate_occurring(db, bound)?
        .into_iter()
        .filter(|(_, u)| minutility.admits(*u))
        .map(|(items, u)| HighUtilityItemset::new(items, u))
        .collect();
    sort_canonical(&mut found);
    Ok(found)
}
