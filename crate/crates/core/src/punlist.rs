//! PUN-lists: per-itemset summaries of utility information on tree nodes.
//!
//! A 2-itemset `x·i` gets one quadruple per node `N` labeled `i` that has an
//! ancestor labeled `x`. Longer itemsets are formed by merge-joining two
//! lists on node code.

use std::fmt;

use crate::amount::Amount;
use crate::error::Result;
use crate::model::ItemId;
use crate::putree::{NodeId, PuTree};
use crate::succinct::ItemRanking;

/// `(Nd_id, Nd_u, Nd_au, Nd_aux)` for one tree node.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PunQuad {
    /// `n_code` of the node labeled with the itemset's lowest-ranked item.
    pub node: u32,
    /// Utility of the itemset over the transactions registered on the node.
    pub utility: Amount,
    /// Anterior utility of the itemset over the same transactions.
    pub anterior: Amount,
    /// Utility of the itemset without its top item, used by the next join.
    pub aux: Amount,
}

impl PunQuad {
    pub const fn new(node: u32, utility: i64, anterior: i64, aux: i64) -> Self {
        PunQuad {
            node,
            utility: Amount::new(utility),
            anterior: Amount::new(anterior),
            aux: Amount::new(aux),
        }
    }
}

/// Quadruples in strictly ascending node order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PunList {
    quads: Vec<PunQuad>,
}

impl PunList {
    pub fn from_quads(quads: Vec<PunQuad>) -> Self {
        debug_assert!(quads.windows(2).all(|w| w[0].node < w[1].node));
        PunList { quads }
    }

    pub fn quads(&self) -> &[PunQuad] {
        &self.quads
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// `(Σ Nd_u, Σ Nd_au)`: the itemset's utility and anterior utility.
    pub fn totals(&self) -> Result<(Amount, Amount)> {
        self.quads.iter().try_fold((Amount::ZERO, Amount::ZERO), |(u, au), q| {
            Ok((u.checked_add(q.utility)?, au.checked_add(q.anterior)?))
        })
    }
}

impl fmt::Display for PunList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, q) in self.quads.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({}, {}, {}, {})", q.node, q.utility, q.anterior, q.aux)?;
        }
        f.write_str("}")
    }
}

/// Work done by [`build_two_item_punlists`].
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct PairScanCounters {
    /// Ancestor triples inspected while matching tids.
    pub triple_comparisons: u64,
    /// (node, ancestor) pairs visited.
    pub ancestor_visits: u64,
}

/// Builds the PUN-list of every 2-itemset `x·item` with `x` ranked above `item`.
///
/// Walks the header chain of `item`; for each node, climbs its parent links and
/// merges its `Tr_list` with each ancestor's. With `use_marks`, each ancestor
/// keeps a cursor so that its triples are scanned at most once per call.
/// Marks are zero on entry and are reset before returning.
///
/// Returns the non-empty lists ordered by rank of `x`, highest first.
pub fn build_two_item_punlists(
    tree: &mut PuTree,
    item: ItemId,
    ranking: &ItemRanking,
    use_marks: bool,
    counters: &mut PairScanCounters,
) -> Result<Vec<(ItemId, PunList)>> {
    let limit = ranking.rank_of(item) as usize;
    let mut by_rank: Vec<Vec<PunQuad>> = vec![Vec::new(); limit];
    let mut touched: Vec<NodeId> = Vec::new();
    let chain: Vec<NodeId> = tree.chain(item).collect();

    for node_id in chain {
        let node = tree.node(node_id);
        let n_code = node.n_code();
        let aux = Amount::try_sum(node.tr_list().iter().map(|t| t.utility))?;
        let ancestors: Vec<NodeId> = tree.ancestors(node_id).collect();
        for anc_id in ancestors {
            counters.ancestor_visits += 1;
            let own = tree.node(node_id).tr_list();
            let anc = tree.node(anc_id);
            let anc_tr = anc.tr_list();
            let mut j = if use_marks { anc.mark } else { 0 };
            let mut anc_utility = Amount::ZERO;
            let mut anterior = Amount::ZERO;
            for t in own {
                loop {
                    let a = anc_tr
                        .get(j)
                        .unwrap_or_else(|| panic!("tid {} missing from ancestor node {}", t.tid, anc.n_code()));
                    counters.triple_comparisons += 1;
                    if a.tid >= t.tid {
                        assert_eq!(a.tid, t.tid, "tid missing from ancestor node {}", anc.n_code());
                        break;
                    }
                    j += 1;
                }
                anc_utility = anc_utility.checked_add(anc_tr[j].utility)?;
                anterior = anterior.checked_add(anc_tr[j].anterior)?;
                j += 1;
            }
            let label = anc.label().expect("ancestor below the root has a label");
            by_rank[ranking.rank_of(label) as usize].push(PunQuad {
                node: n_code,
                utility: aux.checked_add(anc_utility)?,
                anterior,
                aux,
            });
            if use_marks {
                tree.node_mut(anc_id).mark = j;
                touched.push(anc_id);
            }
        }
    }
    for id in touched {
        tree.node_mut(id).mark = 0;
    }

    Ok(by_rank
        .into_iter()
        .enumerate()
        .filter(|(_, quads)| !quads.is_empty())
        .map(|(r, quads)| (ranking.items()[r], PunList::from_quads(quads)))
        .collect())
}

/// Joins the lists of `y·A` and `z·A` (z ranked above y) into the list of `z·y·A`.
///
/// The argument order matters: `aux` is taken from `y_list`.
pub fn join(y_list: &PunList, z_list: &PunList) -> Result<PunList> {
    let mut comparisons = 0;
    join_counted(y_list, z_list, &mut comparisons)
}

/// [`join`], adding the number of node-code comparisons to `comparisons`.
pub fn join_counted(y_list: &PunList, z_list: &PunList, comparisons: &mut u64) -> Result<PunList> {
    let (ys, zs) = (&y_list.quads, &z_list.quads);
    let mut out = Vec::with_capacity(ys.len().min(zs.len()));
    let (mut a, mut b) = (0, 0);
    while a < ys.len() && b < zs.len() {
        *comparisons += 1;
        let (tp, tz) = (&ys[a], &zs[b]);
        match tp.node.cmp(&tz.node) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                // tz.utility - tp.aux is z's own utility on this node, never negative
                let gain = tz.utility.checked_sub(tp.aux)?;
                out.push(PunQuad {
                    node: tp.node,
                    utility: tp.utility.checked_add(gain)?,
                    anterior: tz.anterior,
                    aux: tp.utility,
                });
                a += 1;
                b += 1;
            }
        }
    }
    Ok(PunList { quads: out })
}
