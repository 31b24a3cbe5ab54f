//! Dataset formats and result rendering.

mod native;
mod output;
mod spmf;

pub use native::{
    parse_native, parse_transactions, parse_utility_table, read_native, write_transactions, write_utility_table,
};
pub use output::{format_ratio, render_itemsets, stats_csv_row, StatsRow, STATS_CSV_HEADER};
pub use spmf::{parse_spmf, read_spmf, write_spmf};
