//! Shared fixtures and an invariant checker for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use mip_core::baselines::{brute_force_mine, enumerate_occurring, utility_list_mine};
use mip_core::io::{parse_native, render_itemsets};
use mip_core::model::UtilityTransaction;
use mip_core::punlist::PunList;
use mip_core::putree::build_pu_tree;
use mip_core::succinct::{build_succinct, resolve_threshold, ItemRanking};
use mip_core::{
    mine_with, Amount, HighUtilityItemset, ItemCatalog, ItemId, ItemOrder, MinUtility, MinerConfig, Precision,
    SearchObserver, Threshold, UtilityDatabase,
};
use rand::Rng;

pub const SAMPLE_TABLE: &str = "a\t30\nb\t50\nc\t40\nd\t30\ne\t10\nf\t10\ng\t20\n";
pub const SAMPLE_TXS: &str = "a:1 c:1 d:1 f:3\na:2 b:2 c:6 f:5\nb:2 f:5 g:5\nb:4 c:3 e:2\na:2 c:2 d:6 e:1 f:1\n";

pub fn sample() -> UtilityDatabase {
    parse_native(SAMPLE_TABLE, SAMPLE_TXS, None)
        .unwrap()
        .to_utility_database()
        .unwrap()
}

/// Up to 10 items and 25 transactions, counts 1–10, external utilities 1–50.
pub fn random_db<R: Rng>(rng: &mut R) -> UtilityDatabase {
    let n_items = rng.random_range(1..=10u32);
    let n_tx = rng.random_range(1..=25u32);
    let external: Vec<i64> = (0..n_items).map(|_| rng.random_range(1..=50)).collect();
    let density = rng.random_range(0.15..0.9);
    let rows: Vec<Vec<(u32, u32)>> = (0..n_tx)
        .map(|_| {
            let mut row = Vec::new();
            for i in 0..n_items {
                if rng.random_bool(density) {
                    row.push((i, rng.random_range(1..=10)));
                }
            }
            if row.is_empty() {
                row.push((rng.random_range(0..n_items), rng.random_range(1..=10)));
            }
            row
        })
        .collect();
    build_db(&external, &rows)
}

/// Items are named `i0`, `i1`, …; `rows` hold `(item index, count)`.
pub fn build_db(external: &[i64], rows: &[Vec<(u32, u32)>]) -> UtilityDatabase {
    let names: Vec<String> = (0..external.len()).map(|k| format!("i{k}")).collect();
    let catalog = ItemCatalog::from_names(names.iter().cloned()).unwrap();
    let id = |k: u32| catalog.id(&names[k as usize]).unwrap();
    let txs = rows
        .iter()
        .enumerate()
        .map(|(t, row)| {
            let entries = row
                .iter()
                .map(|&(i, c)| (id(i), Amount::new(external[i as usize] * c as i64)))
                .collect();
            UtilityTransaction::new(t as u32 + 1, entries).unwrap()
        })
        .collect();
    UtilityDatabase::new(catalog, Precision::new(0).unwrap(), txs).unwrap()
}

#[derive(Default)]
pub struct Recorder {
    /// item → (u, au)
    pub singles: Vec<(ItemId, Amount, Amount)>,
    /// top-first itemset → list with its reported totals
    pub lists: HashMap<Vec<ItemId>, (PunList, Amount, Amount)>,
    pub joins: Vec<(usize, usize, u64)>,
}

impl SearchObserver for Recorder {
    fn on_singleton(&mut self, item: ItemId, utility: Amount, anterior: Amount, _: bool) {
        self.singles.push((item, utility, anterior));
    }

    fn on_list(&mut self, itemset: &[ItemId], list: &PunList, utility: Amount, anterior: Amount, _: bool) {
        let previous = self.lists.insert(itemset.to_vec(), (list.clone(), utility, anterior));
        assert!(previous.is_none(), "itemset {itemset:?} materialized twice");
    }

    fn on_join(&mut self, y_len: usize, z_len: usize, comparisons: u64) {
        self.joins.push((y_len, z_len, comparisons));
    }
}

/// Failures grouped by the property they violate.
#[derive(Default, Debug)]
pub struct Findings {
    pub agreement: Vec<String>,
    pub list_totals: Vec<String>,
    pub aux: Vec<String>,
    pub lemma1: Vec<String>,
    pub order: Vec<String>,
    pub join_bound: Vec<String>,
    pub lists_checked: u64,
    pub pruned_checked: u64,
    pub extensions_checked: u64,
    pub joins_checked: u64,
}

impl Findings {
    pub fn merge(&mut self, other: Findings) {
        self.agreement.extend(other.agreement);
        self.list_totals.extend(other.list_totals);
        self.aux.extend(other.aux);
        self.lemma1.extend(other.lemma1);
        self.order.extend(other.order);
        self.join_bound.extend(other.join_bound);
        self.lists_checked += other.lists_checked;
        self.pruned_checked += other.pruned_checked;
        self.extensions_checked += other.extensions_checked;
        self.joins_checked += other.joins_checked;
    }

    pub fn is_clean(&self) -> bool {
        self.agreement.is_empty()
            && self.list_totals.is_empty()
            && self.aux.is_empty()
            && self.lemma1.is_empty()
            && self.order.is_empty()
            && self.join_bound.is_empty()
    }
}

/// Anterior utility by direct scan: utility of retained items ranked above
/// the itemset's top item, over transactions containing the itemset.
fn scan_anterior(db: &UtilityDatabase, ranking: &ItemRanking, items: &[ItemId]) -> i64 {
    let top = items.iter().map(|&i| ranking.rank(i).unwrap()).min().unwrap();
    db.transactions()
        .iter()
        .filter(|t| t.contains_all(items))
        .map(|t| {
            t.entries()
                .iter()
                .filter(|(i, _)| ranking.rank(*i).is_some_and(|r| r < top))
                .map(|(_, u)| u.get())
                .sum::<i64>()
        })
        .sum()
}

fn sorted(items: &[ItemId]) -> Vec<ItemId> {
    let mut v = items.to_vec();
    v.sort_unstable();
    v
}

fn describe(h: &[HighUtilityItemset]) -> String {
    h.iter()
        .map(|h| {
            format!(
                "{:?}:{}",
                h.items.iter().map(|i| i.index()).collect::<Vec<_>>(),
                h.utility
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs every miner on `db` and checks them against each other and the scans.
pub fn check_database(db: &UtilityDatabase, threshold: &Threshold) -> Findings {
    let mut f = Findings::default();
    let minutility = resolve_threshold(threshold, db).unwrap();
    let oracle = brute_force_mine(db, threshold, 20).unwrap();
    let occurring: HashMap<Vec<ItemId>, Amount> = enumerate_occurring(db, 20)
        .unwrap()
        .into_iter()
        .map(|(items, u)| (sorted(&items), u))
        .collect();

    let mut rendered = Vec::new();
    for order in [ItemOrder::SupportDesc, ItemOrder::TwuDesc] {
        let cfg = MinerConfig::new(threshold.clone()).with_order(order);
        let mut rec = Recorder::default();
        let outcome = mine_with(db, &cfg, &mut rec).unwrap();
        if outcome.itemsets != oracle {
            f.agreement.push(format!(
                "{}: mine [{}] vs oracle [{}]",
                order.name(),
                describe(&outcome.itemsets),
                describe(&oracle)
            ));
        }
        let ul = utility_list_mine(db, &cfg).unwrap();
        if ul.itemsets != oracle {
            f.agreement.push(format!(
                "{}: utility-list [{}] vs oracle",
                order.name(),
                describe(&ul.itemsets)
            ));
        }
        for variant in [
            MinerConfig {
                use_mark_optimization: false,
                ..cfg.clone()
            },
            MinerConfig {
                prune_singletons: true,
                ..cfg.clone()
            },
        ] {
            let other = mip_core::mine(db, &variant).unwrap();
            if other.itemsets != oracle {
                f.agreement
                    .push(format!("{}: variant {variant:?} disagrees", order.name()));
            }
        }
        rendered.push(render_itemsets(&outcome.itemsets, db.catalog(), db.precision()));

        let succinct = build_succinct(db, minutility, order).unwrap();
        let ranking = succinct.ranking().clone();
        let tree = build_pu_tree(&succinct);
        check_lists(db, &ranking, &tree, &rec, &mut f);
        check_lemma1(&ranking, minutility, &rec, &occurring, &mut f);
        for &(y, z, c) in &rec.joins {
            f.joins_checked += 1;
            if c > (y + z) as u64 {
                f.join_bound
                    .push(format!("join of {y} and {z} quads made {c} comparisons"));
            }
        }
    }
    if rendered[0] != rendered[1] {
        f.order.push(format!("support:\n{}twu:\n{}", rendered[0], rendered[1]));
    }
    f
}

fn check_lists(
    db: &UtilityDatabase,
    ranking: &ItemRanking,
    tree: &mip_core::putree::PuTree,
    rec: &Recorder,
    f: &mut Findings,
) {
    for (itemset, (list, u, au)) in &rec.lists {
        f.lists_checked += 1;
        let (lu, lau) = list.totals().unwrap();
        let expected_u = db.itemset_utility(itemset).unwrap();
        let expected_au = scan_anterior(db, ranking, itemset);
        if lu != expected_u || lu != *u {
            f.list_totals.push(format!(
                "{itemset:?}: list utility {lu}, reported {u}, scan {expected_u}"
            ));
        }
        if lau.get() != expected_au || lau != *au {
            f.list_totals.push(format!(
                "{itemset:?}: list anterior {lau}, reported {au}, scan {expected_au}"
            ));
        }
        let quads = list.quads();
        if quads.windows(2).any(|w| w[0].node >= w[1].node) {
            f.list_totals.push(format!("{itemset:?}: node ids not ascending"));
        }
        for q in quads {
            if !(q.utility >= q.aux && q.aux.get() >= 0 && q.anterior.get() >= 0) {
                f.list_totals.push(format!("{itemset:?}: quad {q:?} out of range"));
            }
            let expected_aux = if itemset.len() == 2 {
                let node = tree.node(tree.by_n_code(q.node).unwrap());
                Some(node.tr_list().iter().map(|t| t.utility.get()).sum::<i64>())
            } else {
                rec.lists[&itemset[1..]]
                    .0
                    .quads()
                    .iter()
                    .find(|p| p.node == q.node)
                    .map(|p| p.utility.get())
            };
            if expected_aux != Some(q.aux.get()) {
                f.aux
                    .push(format!("{itemset:?}: quad {q:?} expected aux {expected_aux:?}"));
            }
        }
    }
}

/// Every extension of a materialized itemset obeys `u(P) ≤ u(A) + au(A)`, and
/// no extension of a pruned itemset qualifies.
fn check_lemma1(
    ranking: &ItemRanking,
    minutility: MinUtility,
    rec: &Recorder,
    occurring: &HashMap<Vec<ItemId>, Amount>,
    f: &mut Findings,
) {
    let mut bounds: HashMap<Vec<ItemId>, (i64, bool)> = HashMap::new();
    for &(item, u, au) in &rec.singles {
        bounds.insert(vec![item], (u.get() + au.get(), minutility.admits_sum(u, au).unwrap()));
    }
    for (itemset, (_, u, au)) in &rec.lists {
        bounds.insert(
            sorted(itemset),
            (u.get() + au.get(), minutility.admits_sum(*u, *au).unwrap()),
        );
    }
    f.pruned_checked += bounds.values().filter(|b| !b.1).count() as u64;

    for (p, u) in occurring {
        let Some(mut ranks) = p
            .iter()
            .map(|&i| ranking.rank(i).map(|r| (r, i)))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        // lowest-ranked items last; every proper suffix is an itemset P extends
        ranks.sort_unstable();
        for cut in 1..ranks.len() {
            let a = sorted(&ranks[cut..].iter().map(|&(_, i)| i).collect::<Vec<_>>());
            let Some(&(bound, promising)) = bounds.get(&a) else {
                continue;
            };
            f.extensions_checked += 1;
            if u.get() > bound {
                f.lemma1
                    .push(format!("u({p:?}) = {u} exceeds u + au = {bound} of {a:?}"));
            }
            if !promising && minutility.admits(*u) {
                f.lemma1
                    .push(format!("{p:?} qualifies but its subset {a:?} was pruned"));
            }
        }
    }
}
