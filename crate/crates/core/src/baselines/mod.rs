//! Reference miners used to check results and to compare list sizes.

mod oracle;
mod stats;
mod utility_list;

pub use oracle::{brute_force_mine, enumerate_occurring, DEFAULT_ENUMERATION_BOUND};
pub use stats::{collect_stats, ListTotals, Population, StructureStats};
pub use utility_list::{
    item_utility_lists, join_utility_lists, utility_list_mine, utility_list_mine_with, ListObserver, UtilityList,
    UtilityListEntry, UtilityListOutcome, UtilityListStats,
};
