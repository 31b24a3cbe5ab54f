//! Exact utility arithmetic.
//!
//! Utilities are fixed-point integers: an external utility written as `1.25`
//! at precision 2 is stored as `125`. Every sum goes through checked
//! arithmetic and reports overflow as an error.

use std::fmt;
use std::iter::Sum;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A utility value in scaled units.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Amount(i64);

impl Amount {
    pub const ZERO: Amount = Amount(0);

    pub const fn new(scaled: i64) -> Self {
        Amount(scaled)
    }

    pub const fn get(self) -> i64 {
        self.0
    }

    pub fn checked_add(self, rhs: Amount) -> Result<Amount> {
        self.0
            .checked_add(rhs.0)
            .map(Amount)
            .ok_or(Error::Overflow("utility sum"))
    }

    pub fn checked_sub(self, rhs: Amount) -> Result<Amount> {
        self.0
            .checked_sub(rhs.0)
            .map(Amount)
            .ok_or(Error::Overflow("utility difference"))
    }

    /// `count × self`, the utility of `count` units of an item.
    pub fn times(self, count: u32) -> Result<Amount> {
        self.0
            .checked_mul(i64::from(count))
            .map(Amount)
            .ok_or(Error::Overflow("item utility"))
    }

    /// Sums an iterator of amounts, failing on the first overflow.
    pub fn try_sum<I: IntoIterator<Item = Amount>>(iter: I) -> Result<Amount> {
        iter.into_iter().try_fold(Amount::ZERO, |acc, x| acc.checked_add(x))
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Panics on overflow. Library code uses [`Amount::try_sum`].
impl Sum for Amount {
    fn sum<I: Iterator<Item = Amount>>(iter: I) -> Self {
        Amount::try_sum(iter).expect("utility sum overflow")
    }
}

/// Number of decimal digits kept after the point.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MAX: u32 = 9;

    pub fn new(digits: u32) -> Result<Self> {
        if digits > Self::MAX {
            return Err(Error::invalid(format!(
                "precision {digits} exceeds the maximum of {}",
                Self::MAX
            )));
        }
        Ok(Precision(digits))
    }

    pub const fn digits(self) -> u32 {
        self.0
    }

    /// `10^digits`, the scaled value of one whole unit.
    pub const fn unit(self) -> i64 {
        10i64.pow(self.0)
    }

    /// Smallest precision that represents every given decimal literal exactly.
    pub fn infer<'a, I: IntoIterator<Item = &'a str>>(literals: I) -> Result<Self> {
        let digits = literals
            .into_iter()
            .map(|s| s.split_once('.').map_or(0, |(_, frac)| frac.len()))
            .max()
            .unwrap_or(0);
        Precision::new(digits as u32)
    }

    /// Parses a nonnegative decimal literal into scaled units.
    ///
    /// Literals with more fractional digits than the precision are rejected
    /// rather than rounded.
    pub fn parse(self, literal: &str) -> std::result::Result<Amount, String> {
        let (int_part, frac_part) = match literal.split_once('.') {
            Some((i, f)) => (i, f),
            None => (literal, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(format!("empty number `{literal}`"));
        }
        let digits_only = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if !digits_only(int_part) || !digits_only(frac_part) {
            return Err(format!("`{literal}` is not a nonnegative decimal number"));
        }
        if frac_part.len() > self.0 as usize {
            return Err(format!("`{literal}` has more than {} decimal digit(s)", self.0));
        }
        let overflow = || format!("`{literal}` is too large");
        let whole: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| overflow())?
        };
        let mut frac: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| overflow())?
        };
        frac *= 10i64.pow(self.0 - frac_part.len() as u32);
        whole
            .checked_mul(self.unit())
            .and_then(|w| w.checked_add(frac))
            .map(Amount)
            .ok_or_else(overflow)
    }

    /// Renders an amount with exactly `digits` fractional digits.
    pub fn render(self, amount: Amount) -> String {
        let value = amount.0;
        if self.0 == 0 {
            return value.to_string();
        }
        let unit = self.unit().unsigned_abs();
        let magnitude = value.unsigned_abs();
        let sign = if value < 0 { "-" } else { "" };
        format!(
            "{sign}{}.{:0width$}",
            magnitude / unit,
            magnitude % unit,
            width = self.0 as usize
        )
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(2)
    }
}

/// The user-facing minimum utility: an absolute amount or a fraction ξ of
/// the database's total utility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Absolute(Amount),
    Ratio(Ratio<u64>),
}

impl Threshold {
    pub fn ratio(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 || numerator > denominator {
            return Err(Error::invalid(format!(
                "threshold ratio {numerator}/{denominator} is not in [0, 1]"
            )));
        }
        Ok(Threshold::Ratio(Ratio::new(numerator, denominator)))
    }

    /// Parses a percentage such as `0.25` (meaning 0.25 %) exactly.
    pub fn from_percent(literal: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("`{literal}` is not a valid percentage"));
        let (int_part, frac_part) = literal.split_once('.').unwrap_or((literal, ""));
        let digits_only = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty())
            || !digits_only(int_part)
            || !digits_only(frac_part)
            || frac_part.len() > 15
        {
            return Err(bad());
        }
        let numerator: u64 = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
        let denominator = 100 * 10u64.pow(frac_part.len() as u32);
        if numerator > denominator {
            return Err(Error::invalid(format!("percentage `{literal}` is above 100")));
        }
        Threshold::ratio(numerator, denominator)
    }

    /// Turns the threshold into a comparison bound for a database whose
    /// transaction utilities sum to `total`.
    pub fn resolve(&self, total: Amount) -> MinUtility {
        match self {
            Threshold::Absolute(a) => MinUtility {
                numerator: i128::from(a.get()),
                denominator: 1,
            },
            Threshold::Ratio(r) => MinUtility {
                numerator: i128::from(*r.numer()) * i128::from(total.get()),
                denominator: i128::from(*r.denom()),
            },
        }
    }
}

/// A resolved minimum utility, kept as the exact rational `numerator / denominator`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MinUtility {
    numerator: i128,
    denominator: i128,
}

impl MinUtility {
    pub fn absolute(amount: Amount) -> Self {
        MinUtility {
            numerator: i128::from(amount.get()),
            denominator: 1,
        }
    }

    /// `value ≥ minutility`, decided by cross-multiplication.
    #[inline]
    pub fn admits(&self, value: Amount) -> bool {
        i128::from(value.get()) * self.denominator >= self.numerator
    }

    /// `utility + anterior ≥ minutility`.
    pub fn admits_sum(&self, utility: Amount, anterior: Amount) -> Result<bool> {
        Ok(self.admits(utility.checked_add(anterior)?))
    }

    /// The smallest integer amount that meets the bound.
    pub fn ceiling(&self) -> i128 {
        let q = self.numerator.div_euclid(self.denominator);
        if self.numerator.rem_euclid(self.denominator) == 0 {
            q
        } else {
            q + 1
        }
    }

    pub fn as_ratio(&self) -> (i128, i128) {
        (self.numerator, self.denominator)
    }
}
