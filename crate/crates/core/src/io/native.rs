//! The two-file native format.
//!
//! Utility table: `item<TAB>decimal` per line. Transactions: space-separated
//! `item:count` tokens per line, numbered from 1 in file order. In both files
//! `#` starts a comment line and blank lines are skipped.

use std::fmt::Write as _;
use std::path::Path;

use crate::amount::{Amount, Precision};
use crate::error::{Error, Result};
use crate::model::{ItemCatalog, RawTransaction, TransactionDatabase, UtilityTable};

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Attaches a line number to validation errors; overflow passes through.
pub(crate) fn at_line(line: usize) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::Invalid(message) => Error::parse(line, message),
        other => other,
    }
}

/// Parses both files. `precision` of `None` uses the fewest digits that
/// represent every utility literal exactly.
pub fn parse_native(table: &str, transactions: &str, precision: Option<Precision>) -> Result<TransactionDatabase> {
    let utilities = parse_utility_table(table, precision)?;
    let txs = parse_transactions(transactions, &utilities.0)?;
    TransactionDatabase::new(utilities.0, utilities.1, txs)
}

pub fn parse_utility_table(table: &str, precision: Option<Precision>) -> Result<(ItemCatalog, UtilityTable)> {
    let mut rows = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, text) in content_lines(table) {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [name, value] = fields[..] else {
            return Err(Error::parse(line, "expected `item<TAB>utility`"));
        };
        if !seen.insert(name) {
            return Err(Error::parse(line, format!("duplicate item `{name}`")));
        }
        if precision.is_none() {
            Precision::infer([value]).map_err(at_line(line))?;
        }
        rows.push((line, name, value));
    }
    let precision = match precision {
        Some(p) => p,
        None => Precision::infer(rows.iter().map(|r| r.2))?,
    };
    let catalog = ItemCatalog::from_names(rows.iter().map(|r| r.1))?;
    let mut external = vec![Amount::ZERO; catalog.len()];
    for &(line, name, value) in &rows {
        let v = precision.parse(value).map_err(|m| Error::parse(line, m))?;
        if v.get() <= 0 {
            return Err(Error::parse(line, format!("utility of `{name}` must be positive")));
        }
        external[catalog.id(name).expect("catalog built from these rows").index()] = v;
    }
    Ok((catalog, UtilityTable::new(external, precision)?))
}

pub fn parse_transactions(transactions: &str, catalog: &ItemCatalog) -> Result<Vec<RawTransaction>> {
    let mut txs = Vec::new();
    for (line, text) in content_lines(transactions) {
        let mut entries = Vec::new();
        for token in text.split_whitespace() {
            let (name, count) = token
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(line, format!("expected `item:count`, found `{token}`")))?;
            let item = catalog
                .id(name)
                .ok_or_else(|| Error::parse(line, format!("item `{name}` is not in the utility table")))?;
            let count: u32 = count
                .parse()
                .map_err(|_| Error::parse(line, format!("`{count}` is not a count")))?;
            if count == 0 {
                return Err(Error::parse(line, format!("count of `{name}` must be positive")));
            }
            entries.push((item, count));
        }
        let tid = u32::try_from(txs.len() + 1).map_err(|_| Error::parse(line, "too many transactions"))?;
        txs.push(RawTransaction::new(tid, entries).map_err(at_line(line))?);
    }
    Ok(txs)
}

pub fn read_native(table: &Path, transactions: &Path, precision: Option<Precision>) -> Result<TransactionDatabase> {
    let read = |path: &Path| std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path));
    let (catalog, utilities) = parse_utility_table(&read(table)?, precision).map_err(|e| e.in_file(table))?;
    let txs = parse_transactions(&read(transactions)?, &catalog).map_err(|e| e.in_file(transactions))?;
    TransactionDatabase::new(catalog, utilities, txs)
}

pub fn write_utility_table(db: &TransactionDatabase) -> String {
    let (catalog, ut) = (db.catalog(), db.utilities());
    let mut out = String::new();
    for item in catalog.ids() {
        let _ = writeln!(out, "{}\t{}", catalog.name(item), ut.precision().render(ut.get(item)));
    }
    out
}

pub fn write_transactions(db: &TransactionDatabase) -> String {
    let catalog = db.catalog();
    let mut out = String::new();
    for t in db.transactions() {
        let tokens: Vec<String> = t
            .entries()
            .iter()
            .map(|&(i, c)| format!("{}:{c}", catalog.name(i)))
            .collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}
