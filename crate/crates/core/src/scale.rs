//! The commensurate valuation scale: exact rationals in [0, 1].

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An exact rational in [0, 1]. Certainty levels and goal priorities both
/// live on this scale; all comparisons are exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScaleValue(Ratio<i64>);

impl ScaleValue {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Scale(format!("{num}/{den}")));
        }
        Self::from_ratio(Ratio::new(num, den))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self> {
        if r < Ratio::zero() || r > Ratio::one() {
            return Err(Error::Scale(r.to_string()));
        }
        Ok(ScaleValue(r))
    }

    pub fn zero() -> Self {
        ScaleValue(Ratio::zero())
    }

    pub fn one() -> Self {
        ScaleValue(Ratio::one())
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(self) -> bool {
        self.0.is_one()
    }

    /// The order-reversing map n(a) = 1 - a.
    pub fn complement(self) -> Self {
        ScaleValue(Ratio::one() - self.0)
    }

    /// Exact midpoint of two scale values; used for grid-sufficiency checks.
    pub fn midpoint(a: Self, b: Self) -> Self {
        ScaleValue((a.0 + b.0) / 2)
    }

    pub fn as_ratio(self) -> Ratio<i64> {
        self.0
    }
}

/// The order-reversing map n of the scale: involutive, n(0) = 1, n(1) = 0.
pub fn order_reverse(a: ScaleValue) -> ScaleValue {
    a.complement()
}

impl FromStr for ScaleValue {
    type Err = Error;

    /// Accepts `p/q`, a decimal like `0.6`, or an integer `0`/`1`.
    /// Decimals are parsed exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Scale(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            return Self::from_ratio(Ratio::new(num, den));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
                return Err(bad());
            }
            let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let num: i64 = frac.parse().map_err(|_| bad())?;
            let den = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            return Self::from_ratio(Ratio::from_integer(int) + Ratio::new(num, den));
        }
        let int: i64 = s.parse().map_err(|_| bad())?;
        Self::from_ratio(Ratio::from_integer(int))
    }
}

impl fmt::Display for ScaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ScaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
