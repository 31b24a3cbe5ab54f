//! Prefix utility tree.
//!
//! Every succinct transaction is threaded from the root along its items;
//! each node it touches records a `(tid, utility, anterior utility)` triple.
//! Nodes live in a flat arena, carry pre-order `n_code`s, and nodes with the
//! same label are chained from the header table in `n_code` order.

use std::fmt::{self, Write as _};

use crate::amount::Amount;
use crate::model::{ItemCatalog, ItemId};
use crate::succinct::{ItemRanking, SuccinctDatabase, SuccinctTransaction};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One transaction's contribution to a node.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TrTriple {
    pub tid: u32,
    pub utility: Amount,
    pub anterior: Amount,
}

impl TrTriple {
    pub fn new(tid: u32, utility: i64, anterior: i64) -> Self {
        TrTriple {
            tid,
            utility: Amount::new(utility),
            anterior: Amount::new(anterior),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PuNode {
    label: Option<ItemId>,
    n_code: u32,
    tr_list: Vec<TrTriple>,
    parent: Option<NodeId>,
    next_same_label: Option<NodeId>,
    children: Vec<NodeId>,
    /// Scan cursor into `tr_list`, owned by the 2-itemset construction pass.
    pub(crate) mark: usize,
}

impl PuNode {
    /// `None` only for the root.
    pub fn label(&self) -> Option<ItemId> {
        self.label
    }

    pub fn n_code(&self) -> u32 {
        self.n_code
    }

    pub fn tr_list(&self) -> &[TrTriple] {
        &self.tr_list
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn next_same_label(&self) -> Option<NodeId> {
        self.next_same_label
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }
}

#[derive(Copy, Clone, Debug)]
struct HeaderEntry {
    item: ItemId,
    first: Option<NodeId>,
    last: Option<NodeId>,
}

#[derive(Clone, Debug)]
pub struct PuTree {
    nodes: Vec<PuNode>,
    header: Vec<HeaderEntry>,
    /// header slot per item id
    slot: Vec<Option<usize>>,
    numbered: bool,
}

impl PuTree {
    /// An empty tree whose header lists the ranked items in rank order.
    pub fn new(ranking: &ItemRanking) -> Self {
        let root = PuNode {
            label: None,
            n_code: 0,
            tr_list: Vec::new(),
            parent: None,
            next_same_label: None,
            children: Vec::new(),
            mark: 0,
        };
        let header: Vec<HeaderEntry> = ranking
            .items()
            .iter()
            .map(|&item| HeaderEntry {
                item,
                first: None,
                last: None,
            })
            .collect();
        let max_id = ranking.items().iter().map(|i| i.index() + 1).max().unwrap_or(0);
        let mut slot = vec![None; max_id];
        for (k, e) in header.iter().enumerate() {
            slot[e.item.index()] = Some(k);
        }
        PuTree {
            nodes: vec![root],
            header,
            slot,
            numbered: true,
        }
    }

    /// Threads one transaction into the tree. Entries must be in rank order.
    pub fn insert_transaction(&mut self, t: &SuccinctTransaction) {
        let mut current = NodeId::ROOT;
        let mut anterior = Amount::ZERO;
        for &(item, utility) in t.entries() {
            let child = self
                .child_with_label(current, item)
                .unwrap_or_else(|| self.add_child(current, item));
            self.nodes[child.index()].tr_list.push(TrTriple {
                tid: t.tid(),
                utility,
                anterior,
            });
            // bounded by tu, which fits
            anterior = Amount::new(anterior.get() + utility.get());
            current = child;
        }
        self.numbered = false;
    }

    fn child_with_label(&self, parent: NodeId, item: ItemId) -> Option<NodeId> {
        // with sorted input the match, if any, is the newest child
        self.nodes[parent.index()]
            .children
            .iter()
            .rev()
            .copied()
            .find(|c| self.nodes[c.index()].label == Some(item))
    }

    fn add_child(&mut self, parent: NodeId, item: ItemId) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(PuNode {
            label: Some(item),
            n_code: 0,
            tr_list: Vec::new(),
            parent: Some(parent),
            next_same_label: None,
            children: Vec::new(),
            mark: 0,
        });
        self.nodes[parent.index()].children.push(id);
        let slot = self.slot[item.index()].expect("item is not in the header table");
        let entry = &mut self.header[slot];
        match entry.last {
            Some(last) => self.nodes[last.index()].next_same_label = Some(id),
            None => entry.first = Some(id),
        }
        entry.last = Some(id);
        id
    }

    /// Assigns pre-order `n_code`s, children visited in creation order.
    pub fn assign_n_codes(&mut self) {
        let mut stack = vec![NodeId::ROOT];
        let mut next = 0u32;
        while let Some(id) = stack.pop() {
            self.nodes[id.index()].n_code = next;
            next += 1;
            stack.extend(self.nodes[id.index()].children.iter().rev());
        }
        self.numbered = true;
    }

    pub fn node(&self, id: NodeId) -> &PuNode {
        &self.nodes[id.index()]
    }

    /// Number of item nodes, excluding the root.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Header items in rank order.
    pub fn header_items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.header.iter().map(|e| e.item)
    }

    /// Nodes labeled `item`, following the header chain.
    pub fn chain(&self, item: ItemId) -> Chain<'_> {
        let first = self
            .slot
            .get(item.index())
            .copied()
            .flatten()
            .and_then(|k| self.header[k].first);
        Chain {
            tree: self,
            next: first,
        }
    }

    /// Proper ancestors of `id`, nearest first, excluding the root.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.nodes[id.index()].parent, move |p| self.nodes[p.index()].parent)
            .filter(|&p| p != NodeId::ROOT)
    }

    /// Node ids in pre-order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![NodeId::ROOT];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id.index()].children.iter().rev());
        }
        out
    }

    /// Looks a node up by its `n_code`.
    pub fn by_n_code(&self, n_code: u32) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|n| n.n_code == n_code)
            .map(|k| NodeId(k as u32))
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut PuNode {
        &mut self.nodes[id.index()]
    }

    /// Σ r_u over every triple of the nodes labeled `item`.
    pub fn item_utility(&self, item: ItemId) -> Amount {
        self.chain(item)
            .flat_map(|n| self.nodes[n.index()].tr_list.iter().map(|t| t.utility))
            .sum()
    }

    /// Σ r_au over every triple of the nodes labeled `item`: au({item}).
    pub fn item_anterior(&self, item: ItemId) -> Amount {
        self.chain(item)
            .flat_map(|n| self.nodes[n.index()].tr_list.iter().map(|t| t.anterior))
            .sum()
    }

    /// Deterministic text dump: one node per line in pre-order,
    /// `n_code label parent_n_code {(tid: u, au), ...}`.
    pub fn render(&self, catalog: &ItemCatalog) -> String {
        let mut out = String::new();
        for id in self.preorder().into_iter().skip(1) {
            let node = &self.nodes[id.index()];
            let parent = node.parent.map_or(0, |p| self.nodes[p.index()].n_code);
            let label = node.label.map_or("root", |l| catalog.name(l));
            let triples: Vec<String> = node
                .tr_list
                .iter()
                .map(|t| format!("(T{}: {}, {})", t.tid, t.utility, t.anterior))
                .collect();
            let _ = writeln!(out, "{} {} {} {{{}}}", node.n_code, label, parent, triples.join(", "));
        }
        out
    }

    /// Checks the structural properties the 2-itemset pass relies on.
    pub fn verify(&self) -> Vec<TreeViolation> {
        let mut found = Vec::new();
        if !self.numbered {
            found.push(TreeViolation::NotNumbered);
            return found;
        }
        for (k, node) in self.nodes.iter().enumerate() {
            let code = node.n_code;
            if node.tr_list.windows(2).any(|w| w[0].tid >= w[1].tid) {
                found.push(TreeViolation::TidsNotAscending { n_code: code });
            }
            if let Some(p) = node.parent {
                let parent = &self.nodes[p.index()];
                if parent.n_code >= code {
                    found.push(TreeViolation::ParentNotBefore { n_code: code });
                }
                if p != NodeId::ROOT {
                    let covered = node
                        .tr_list
                        .iter()
                        .all(|t| parent.tr_list.binary_search_by_key(&t.tid, |x| x.tid).is_ok());
                    if !covered {
                        found.push(TreeViolation::TidMissingFromParent { n_code: code });
                    }
                }
            } else if k != 0 {
                found.push(TreeViolation::Orphan { n_code: code });
            }
        }
        for entry in &self.header {
            let chain: Vec<&PuNode> = self.chain(entry.item).map(|n| &self.nodes[n.index()]).collect();
            if chain.iter().any(|n| n.label != Some(entry.item)) {
                found.push(TreeViolation::ChainLabelMismatch { item: entry.item });
            }
            for pair in chain.windows(2) {
                if pair[0].n_code >= pair[1].n_code {
                    found.push(TreeViolation::ChainNotAscending { item: entry.item });
                }
                let max_before = pair[0].tr_list.last().map(|t| t.tid);
                let min_after = pair[1].tr_list.first().map(|t| t.tid);
                if let (Some(a), Some(b)) = (max_before, min_after) {
                    if b <= a {
                        found.push(TreeViolation::TidRangesOverlap { item: entry.item });
                    }
                }
            }
            let labeled = self.nodes.iter().filter(|n| n.label == Some(entry.item)).count();
            if labeled != chain.len() {
                found.push(TreeViolation::ChainIncomplete { item: entry.item });
            }
        }
        found
    }
}

pub struct Chain<'a> {
    tree: &'a PuTree,
    next: Option<NodeId>,
}

impl Iterator for Chain<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let id = self.next?;
        self.next = self.tree.nodes[id.index()].next_same_label;
        Some(id)
    }
}

/// A broken structural property, as reported by [`PuTree::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    NotNumbered,
    TidsNotAscending { n_code: u32 },
    ParentNotBefore { n_code: u32 },
    TidMissingFromParent { n_code: u32 },
    Orphan { n_code: u32 },
    ChainLabelMismatch { item: ItemId },
    ChainNotAscending { item: ItemId },
    TidRangesOverlap { item: ItemId },
    ChainIncomplete { item: ItemId },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::NotNumbered => write!(f, "n_codes not assigned"),
            TreeViolation::TidsNotAscending { n_code } => {
                write!(f, "node {n_code}: Tr_list tids not strictly ascending")
            }
            TreeViolation::ParentNotBefore { n_code } => {
                write!(f, "node {n_code}: parent n_code is not smaller")
            }
            TreeViolation::TidMissingFromParent { n_code } => {
                write!(f, "node {n_code}: tid missing from the parent's Tr_list")
            }
            TreeViolation::Orphan { n_code } => write!(f, "node {n_code}: no parent"),
            TreeViolation::ChainLabelMismatch { item } => write!(f, "chain of {item}: foreign label"),
            TreeViolation::ChainNotAscending { item } => {
                write!(f, "chain of {item}: n_codes not ascending")
            }
            TreeViolation::TidRangesOverlap { item } => {
                write!(f, "chain of {item}: later node has a tid not above an earlier one")
            }
            TreeViolation::ChainIncomplete { item } => {
                write!(f, "chain of {item}: does not reach every labeled node")
            }
        }
    }
}

/// Inserts every transaction in database order and numbers the nodes.
pub fn build_pu_tree(db: &SuccinctDatabase) -> PuTree {
    let mut tree = PuTree::new(db.ranking());
    for t in db.transactions() {
        tree.insert_transaction(t);
    }
    tree.assign_n_codes();
    tree
}
