//! SPMF utility format: `i1 i2 … ik:TU:u1 u2 … uk`, one transaction per line.
//!
//! Items are integers and utilities are per-entry integers, loaded as they
//! are (precision 0). Lines starting with `#`, `%` or `@` are metadata.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::amount::{Amount, Precision};
use crate::error::{Error, Result};
use crate::model::{ItemCatalog, UtilityDatabase, UtilityTransaction};

use super::native::at_line;

struct Line<'a> {
    number: usize,
    items: Vec<&'a str>,
    utilities: Vec<i64>,
}

fn parse_line(number: usize, text: &str) -> Result<Line<'_>> {
    let fields: Vec<&str> = text.split(':').collect();
    let [items, tu, utilities] = fields[..] else {
        return Err(Error::parse(number, "expected `items:TU:utilities`"));
    };
    let int = |s: &str, what: &str| -> Result<i64> {
        s.parse::<i64>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| Error::parse(number, format!("`{s}` is not a positive {what}")))
    };
    let items: Vec<&str> = items.split_whitespace().collect();
    for i in &items {
        if !i.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(number, format!("`{i}` is not an integer item")));
        }
    }
    let utilities = utilities
        .split_whitespace()
        .map(|u| int(u, "utility"))
        .collect::<Result<Vec<_>>>()?;
    if items.is_empty() || items.len() != utilities.len() {
        return Err(Error::parse(
            number,
            format!("{} items but {} utilities", items.len(), utilities.len()),
        ));
    }
    let tu = int(tu.trim(), "transaction utility")?;
    let sum = utilities
        .iter()
        .try_fold(0i64, |a, &u| a.checked_add(u))
        .ok_or(Error::Overflow("transaction utility"))?;
    if sum != tu {
        return Err(Error::parse(
            number,
            format!("transaction utility {tu} differs from the sum of item utilities {sum}"),
        ));
    }
    Ok(Line {
        number,
        items,
        utilities,
    })
}

pub fn parse_spmf(text: &str) -> Result<UtilityDatabase> {
    let lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with(['#', '%', '@']))
        .map(|(k, l)| parse_line(k, l))
        .collect::<Result<Vec<_>>>()?;

    let names: BTreeSet<&str> = lines.iter().flat_map(|l| l.items.iter().copied()).collect();
    let catalog = ItemCatalog::from_names(names)?;
    let transactions = lines
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let entries = l
                .items
                .iter()
                .zip(&l.utilities)
                .map(|(i, &u)| (catalog.id(i).expect("collected above"), Amount::new(u)))
                .collect();
            UtilityTransaction::new(k as u32 + 1, entries).map_err(at_line(l.number))
        })
        .collect::<Result<Vec<_>>>()?;
    UtilityDatabase::new(catalog, Precision::new(0)?, transactions)
}

pub fn read_spmf(path: &Path) -> Result<UtilityDatabase> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    parse_spmf(&text).map_err(|e| e.in_file(path))
}

/// Writes a database whose item names are integers and utilities whole.
pub fn write_spmf(db: &UtilityDatabase) -> Result<String> {
    if db.precision().digits() != 0 {
        return Err(Error::invalid("SPMF output needs whole-number utilities"));
    }
    let mut out = String::new();
    for t in db.transactions() {
        let names: Vec<&str> = t.entries().iter().map(|&(i, _)| db.catalog().name(i)).collect();
        if let Some(bad) = names.iter().find(|n| !n.bytes().all(|b| b.is_ascii_digit())) {
            return Err(Error::invalid(format!(
                "SPMF item names must be integers, found `{bad}`"
            )));
        }
        let utilities: Vec<String> = t.entries().iter().map(|&(_, u)| u.to_string()).collect();
        let _ = writeln!(out, "{}:{}:{}", names.join(" "), t.utility()?, utilities.join(" "));
    }
    Ok(out)
}
