//! Exact non-negative rational costs.
//!
//! Every price the solver handles is a quotient of arc costs by harmonic
//! numbers and integer counts, so all arithmetic here is exact. Finite
//! values are always kept in lowest terms with a positive denominator.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::CostError;

/// A finite, non-negative exact rational cost.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(BigRational);

impl Cost {
    pub fn zero() -> Self {
        Cost(BigRational::zero())
    }

    pub fn one() -> Self {
        Cost(BigRational::one())
    }

    pub fn from_integer(value: u64) -> Self {
        Cost(BigRational::from_integer(BigInt::from(value)))
    }

    /// Builds `numer / denom`, rejecting negative values and zero denominators.
    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, CostError> {
        if denom == 0 {
            return Err(CostError::ZeroDenominator);
        }
        Self::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(value: BigRational) -> Result<Self, CostError> {
        if value.is_negative() {
            return Err(CostError::Negative(value.to_string()));
        }
        Ok(Cost(value))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self - other`, failing when the result would be negative.
    pub fn checked_sub(&self, other: &Cost) -> Result<Cost, CostError> {
        let diff = &self.0 - &other.0;
        if diff.is_negative() {
            return Err(CostError::NegativeDifference {
                minuend: self.to_string(),
                subtrahend: other.to_string(),
            });
        }
        Ok(Cost(diff))
    }

    /// `max(0, self - other)`.
    pub fn saturating_sub(&self, other: &Cost) -> Cost {
        if other >= self {
            Cost::zero()
        } else {
            Cost(&self.0 - &other.0)
        }
    }

    pub fn mul(&self, other: &Cost) -> Cost {
        Cost(&self.0 * &other.0)
    }

    pub fn mul_int(&self, k: u64) -> Cost {
        Cost(&self.0 * BigRational::from_integer(BigInt::from(k)))
    }

    pub fn div_int(&self, k: u64) -> Cost {
        assert!(k > 0, "division by zero count");
        Cost(&self.0 / BigRational::from_integer(BigInt::from(k)))
    }

    /// Exact quotient; `None` when `other` is zero.
    pub fn checked_div(&self, other: &Cost) -> Option<Cost> {
        if other.is_zero() {
            None
        } else {
            Some(Cost(&self.0 / &other.0))
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Default for Cost {
    fn default() -> Self {
        Cost::zero()
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn add(self, rhs: &'a Cost) -> Cost {
        Cost(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Cost> for Cost {
    fn add_assign(&mut self, rhs: &Cost) {
        self.0 += &rhs.0;
    }
}

impl std::iter::Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |acc, c| acc + c)
    }
}

impl<'a> std::iter::Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        let mut acc = Cost::zero();
        for c in iter {
            acc += c;
        }
        acc
    }
}

/// Renders as an integer when the denominator is 1, else as `p/q`.
impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts integers, `p/q` fractions and plain decimals such as `2.75`.
impl FromStr for Cost {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CostError::Syntax(s.to_string()));
        }
        let bad = || CostError::Syntax(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_unsigned(p).ok_or_else(bad)?;
            let q = parse_unsigned(q).ok_or_else(bad)?;
            if q.is_zero() {
                return Err(CostError::ZeroDenominator);
            }
            return Ok(Cost(BigRational::new(p, q)));
        }
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, fr)) => (i, fr),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let int_val = if int_part.is_empty() {
            BigInt::zero()
        } else {
            parse_unsigned(int_part).ok_or_else(bad)?
        };
        if frac_part.is_empty() {
            if s.ends_with('.') {
                return Err(bad());
            }
            return Ok(Cost(BigRational::from_integer(int_val)));
        }
        let frac_val = parse_unsigned(frac_part).ok_or_else(bad)?;
        let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
        let numer = int_val * &scale + frac_val;
        Ok(Cost(BigRational::new(numer, scale)))
    }
}

fn parse_unsigned(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// A cost that may be the distinguished value `Infinite`, which compares
/// greater than every finite cost.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCost {
    Finite(Cost),
    Infinite,
}

impl ExtCost {
    pub fn finite(&self) -> Option<&Cost> {
        match self {
            ExtCost::Finite(c) => Some(c),
            ExtCost::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtCost::Infinite)
    }

    /// Minimum over an iterator; `Infinite` when empty.
    pub fn min_of<'a, I: IntoIterator<Item = &'a Cost>>(iter: I) -> ExtCost {
        iter.into_iter()
            .min()
            .map_or(ExtCost::Infinite, |c| ExtCost::Finite(c.clone()))
    }
}

impl From<Cost> for ExtCost {
    fn from(c: Cost) -> Self {
        ExtCost::Finite(c)
    }
}

impl fmt::Display for ExtCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCost::Finite(c) => c.fmt(f),
            ExtCost::Infinite => f.write_str("inf"),
        }
    }
}

/// `H_g = 1 + 1/2 + ... + 1/g`, exactly. `H_0` is 0.
pub fn harmonic(g: usize) -> Cost {
    let mut acc = BigRational::zero();
    for i in 1..=g {
        acc += BigRational::new(BigInt::one(), BigInt::from(i));
    }
    Cost(acc)
}

/// `max(2, h)` as an exact rational.
pub fn ratio_bound(h: &Cost) -> Cost {
    let two = Cost::from_integer(2);
    if *h > two {
        h.clone()
    } else {
        two
    }
}
