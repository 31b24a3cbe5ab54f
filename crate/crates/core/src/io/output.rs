use std::fmt::Write as _;

use num_rational::Ratio;

use crate::amount::Precision;
use crate::baselines::{Population, StructureStats};
use crate::miner::HighUtilityItemset;
use crate::model::ItemCatalog;
use crate::succinct::ItemOrder;

/// One `a c #UTIL: 510` line per itemset, in the order given.
pub fn render_itemsets(itemsets: &[HighUtilityItemset], catalog: &ItemCatalog, precision: Precision) -> String {
    let mut out = String::new();
    for h in itemsets {
        let names: Vec<&str> = h.items.iter().map(|&i| catalog.name(i)).collect();
        let _ = writeln!(out, "{} #UTIL: {}", names.join(" "), precision.render(h.utility));
    }
    out
}

pub const STATS_CSV_HEADER: &str =
    "dataset,threshold,order,explored,emitted,avg_punlist,avg_utillist,reduction_ratio,t2_ms,total_ms,peak_rss_kb";

pub struct StatsRow<'a> {
    pub dataset: &'a str,
    pub threshold: &'a str,
    pub order: ItemOrder,
    pub population: Population,
    pub stats: &'a StructureStats,
    pub peak_rss_kb: u64,
}

/// A rational rounded half up to four decimals, or `NA`.
pub fn format_ratio(r: Option<Ratio<u64>>) -> String {
    match r {
        None => "NA".to_string(),
        Some(r) => {
            let (n, d) = (u128::from(*r.numer()), u128::from(*r.denom()));
            let scaled = (n * 20_000 + d) / (2 * d);
            format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn stats_csv_row(row: &StatsRow<'_>) -> String {
    let s = row.stats;
    let totals = s.population(row.population);
    let ms = |d: std::time::Duration| format!("{:.3}", d.as_secs_f64() * 1000.0);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        csv_field(row.dataset),
        csv_field(row.threshold),
        row.order.name(),
        s.explored_count,
        s.emitted_count,
        format_ratio(totals.avg_punlist_len()),
        format_ratio(totals.avg_utility_list_len()),
        format_ratio(totals.reduction_ratio()),
        ms(s.two_itemset_time),
        ms(s.total_time),
        row.peak_rss_kb
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amount::Amount;
    use crate::baselines::ListTotals;
    use crate::model::ItemId;

    #[test]
    fn itemset_lines() {
        let catalog = ItemCatalog::from_names(["b", "a", "10", "9"]).unwrap();
        let sets = vec![
            HighUtilityItemset::new(catalog.itemset(&["a", "9"]), Amount::new(51000)),
            HighUtilityItemset::new(vec![ItemId::new(1)], Amount::new(5)),
        ];
        assert_eq!(
            render_itemsets(&sets, &catalog, Precision::new(2).unwrap()),
            "9 a #UTIL: 510.00\n10 #UTIL: 0.05\n"
        );
        assert_eq!(render_itemsets(&[], &catalog, Precision::default()), "");
    }

    #[test]
    fn ratios_round_half_up() {
        assert_eq!(format_ratio(Some(Ratio::new(8, 3))), "2.6667");
        assert_eq!(format_ratio(Some(Ratio::new(1, 8))), "0.1250");
        assert_eq!(format_ratio(Some(Ratio::new(1, 20_000))), "0.0001");
        assert_eq!(format_ratio(Some(Ratio::new(2045, 1))), "2045.0000");
        assert_eq!(format_ratio(None), "NA");
    }

    #[test]
    fn csv_row_has_every_column() {
        let stats = StructureStats {
            emitted: ListTotals {
                itemsets: 3,
                punlist_entries: 4,
                utility_list_entries: 8,
            },
            emitted_count: 3,
            explored_count: 20,
            ..StructureStats::default()
        };
        let line = stats_csv_row(&StatsRow {
            dataset: "a,b",
            threshold: "500",
            order: ItemOrder::SupportDesc,
            population: Population::Emitted,
            stats: &stats,
            peak_rss_kb: 0,
        });
        assert_eq!(line, "\"a,b\",500,support,20,3,1.3333,2.6667,2.0000,0.000,0.000,0");
        assert_eq!(line.matches(',').count(), STATS_CSV_HEADER.matches(',').count() + 1);
    }
}
