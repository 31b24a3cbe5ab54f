//! Seeded synthetic datasets: log-normal external utilities, uniform counts,
//! and transactions drawn from a skewed item popularity.
//!
//! Every transaction and every item draws from its own ChaCha8 stream, keyed by
//! `(domain, index)`, so growing a dataset never changes the values already
//! generated. Floating-point work goes through `libm` to stay bit-identical
//! across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amount::{Amount, Precision};
use crate::error::{Error, Result};
use crate::model::{ItemCatalog, ItemId, RawTransaction, TransactionDatabase, UtilityTable};

const UTILITY_STREAM: u64 = 1;
const TRANSACTION_STREAM: u64 = 2;
const COUNT_STREAM: u64 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub n_items: u32,
    pub n_transactions: u32,
    pub avg_tx_len: u32,
    /// Item `k` (0-based) is drawn with weight `(k + 1)^-skew`; 0 is uniform.
    pub skew: f64,
    pub utility_location: f64,
    pub utility_scale: f64,
    pub utility_clamp: (f64, f64),
    pub count_range: (u32, u32),
    pub precision: Precision,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            seed: 0,
            n_items: 100,
            n_transactions: 1000,
            avg_tx_len: 10,
            skew: 1.0,
            utility_location: 0.0,
            utility_scale: 1.0,
            utility_clamp: (0.01, 10.0),
            count_range: (1, 10),
            precision: Precision::default(),
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.utility_clamp;
        let unit = self.precision.unit() as f64;
        if self.n_items == 0 || self.n_transactions == 0 || self.avg_tx_len == 0 {
            return Err(Error::invalid(
                "items, transactions and average length must be positive",
            ));
        }
        if !(self.skew.is_finite() && self.skew >= 0.0) {
            return Err(Error::invalid("skew must be a finite non-negative number"));
        }
        if !(self.utility_location.is_finite() && self.utility_scale.is_finite() && self.utility_scale >= 0.0) {
            return Err(Error::invalid(
                "log-normal parameters must be finite with non-negative scale",
            ));
        }
        if !(lo.is_finite() && hi.is_finite() && lo <= hi && libm::round(lo * unit) >= 1.0) {
            return Err(Error::invalid(
                "utility clamp must be a nonempty range above the precision step",
            ));
        }
        if libm::round(hi * unit) >= i64::MAX as f64 / 4.0 {
            return Err(Error::invalid("utility clamp too large"));
        }
        let (cl, ch) = self.count_range;
        if cl == 0 || cl > ch {
            return Err(Error::invalid(
                "count range must be a nonempty range of positive integers",
            ));
        }
        Ok(())
    }

    /// Inclusive bounds on transaction length.
    pub fn length_range(&self) -> (u32, u32) {
        let lo = self.avg_tx_len.div_ceil(2).max(1);
        let hi = (self.avg_tx_len * 3 / 2).max(lo);
        (lo.min(self.n_items), hi.min(self.n_items))
    }

    fn stream(&self, domain: u64, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(domain << 48 | index);
        rng
    }
}

/// Item names `"1"` through `"n"`; item id `k` is named `k + 1`.
pub fn item_catalog(spec: &GenSpec) -> Result<ItemCatalog> {
    ItemCatalog::from_names((1..=spec.n_items).map(|k| k.to_string()))
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * std::f64::consts::PI * u2)
}

pub fn gen_utility_table(spec: &GenSpec) -> Result<UtilityTable> {
    spec.validate()?;
    let unit = spec.precision.unit() as f64;
    let (lo, hi) = spec.utility_clamp;
    let values = (0..spec.n_items)
        .map(|k| {
            let mut rng = spec.stream(UTILITY_STREAM, k as u64);
            let v = libm::exp(spec.utility_location + spec.utility_scale * standard_normal(&mut rng));
            Amount::new(libm::round(v.clamp(lo, hi) * unit) as i64)
        })
        .collect();
    UtilityTable::new(values, spec.precision)
}

/// Item sets in ascending id order, without repeats.
pub fn gen_transactions(spec: &GenSpec) -> Result<Vec<Vec<ItemId>>> {
    spec.validate()?;
    let (lo, hi) = spec.length_range();
    let exponents: Vec<f64> = (0..spec.n_items)
        .map(|k| libm::pow((k + 1) as f64, spec.skew))
        .collect();
    let mut keyed: Vec<(f64, u32)> = Vec::with_capacity(spec.n_items as usize);
    Ok((0..spec.n_transactions)
        .map(|t| {
            let mut rng = spec.stream(TRANSACTION_STREAM, t as u64);
            let len = rng.random_range(lo..=hi) as usize;
            // weighted sampling without replacement: keep the largest ln(u) / w
            keyed.clear();
            keyed.extend((0..spec.n_items).map(|k| {
                let u = 1.0 - rng.random::<f64>();
                (libm::log(u) * exponents[k as usize], k)
            }));
            keyed.select_nth_unstable_by(len - 1, |a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut items: Vec<ItemId> = keyed[..len].iter().map(|&(_, k)| ItemId::new(k)).collect();
            items.sort_unstable();
            items
        })
        .collect())
}

/// Assigns each incidence an independent uniform count; tids are 1-based positions.
pub fn gen_counts(spec: &GenSpec, item_sets: &[Vec<ItemId>]) -> Result<Vec<RawTransaction>> {
    spec.validate()?;
    let (cl, ch) = spec.count_range;
    item_sets
        .iter()
        .enumerate()
        .map(|(t, items)| {
            let mut rng = spec.stream(COUNT_STREAM, t as u64);
            let entries = items.iter().map(|&i| (i, rng.random_range(cl..=ch))).collect();
            RawTransaction::new(t as u32 + 1, entries)
        })
        .collect()
}

pub fn generate(spec: &GenSpec) -> Result<TransactionDatabase> {
    let catalog = item_catalog(spec)?;
    let utilities = gen_utility_table(spec)?;
    let sets = gen_transactions(spec)?;
    let transactions = gen_counts(spec, &sets)?;
    TransactionDatabase::new(catalog, utilities, transactions)
}
