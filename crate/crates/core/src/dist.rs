//! Extended nonnegative distances: exact rationals plus infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Zero};

use crate::error::{Error, Result};

/// Exact rational used for metric distances.
pub type Rational = Ratio<i64>;

/// A value in `[0, ∞]`.
///
/// `Finite` sorts before `Inf`, so the derived ordering is the usual one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtDist {
    Finite(Rational),
    Inf,
}

impl ExtDist {
    pub const ZERO: ExtDist = ExtDist::Finite(Ratio::new_raw(0, 1));

    /// Builds a finite distance; rejects negative values.
    pub fn new(value: Rational) -> Result<Self> {
        if value < Rational::zero() {
            return Err(Error::Invalid {
                what: "distance",
                reason: format!("{value} is negative"),
            });
        }
        Ok(ExtDist::Finite(value))
    }

    /// `num/den` as a distance. Panics on a negative value or zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(Rational::new(num, den)).expect("nonnegative distance literal")
    }

    pub fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtDist::Finite(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            ExtDist::Finite(r) => Some(*r),
            ExtDist::Inf => None,
        }
    }

    /// `|self - other|`, with `|∞ - ∞| = 0` and `|∞ - r| = ∞`.
    pub fn deviation(&self, other: &ExtDist) -> ExtDist {
        match (self, other) {
            (ExtDist::Inf, ExtDist::Inf) => ExtDist::ZERO,
            (ExtDist::Inf, _) | (_, ExtDist::Inf) => ExtDist::Inf,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => {
                let d = if a >= b {
                    a.checked_sub(b)
                } else {
                    b.checked_sub(a)
                };
                ExtDist::Finite(d.expect("distance arithmetic overflow"))
            }
        }
    }

    /// Multiplication by a nonnegative rational; `0 · ∞ = 0`.
    pub fn scale(&self, factor: Rational) -> ExtDist {
        assert!(factor >= Rational::zero(), "negative scale factor");
        match self {
            ExtDist::Inf if factor.is_zero() => ExtDist::ZERO,
            ExtDist::Inf => ExtDist::Inf,
            ExtDist::Finite(r) => {
                ExtDist::Finite(r.checked_mul(&factor).expect("distance arithmetic overflow"))
            }
        }
    }
}

impl Default for ExtDist {
    fn default() -> Self {
        ExtDist::ZERO
    }
}

impl Add for ExtDist {
    type Output = ExtDist;

    fn add(self, rhs: ExtDist) -> ExtDist {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => {
                ExtDist::Finite(a.checked_add(&b).expect("distance arithmetic overflow"))
            }
            _ => ExtDist::Inf,
        }
    }
}

impl From<Rational> for ExtDist {
    fn from(r: Rational) -> Self {
        ExtDist::new(r).expect("nonnegative distance")
    }
}

impl PartialEq<Rational> for ExtDist {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, ExtDist::Finite(r) if r == other)
    }
}

impl PartialOrd<Rational> for ExtDist {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            ExtDist::Inf => Ordering::Greater,
            ExtDist::Finite(r) => r.cmp(other),
        })
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Inf => write!(f, "inf"),
            ExtDist::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Parses `n`, `n/d` (d > 0) or, when `allow_negative`, a leading `-`.
pub fn parse_ratio_i64(s: &str, allow_negative: bool) -> std::result::Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let check_digits = |t: &str, signed: bool| {
        let body = if signed {
            t.strip_prefix('-').unwrap_or(t)
        } else {
            t
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !check_digits(num, allow_negative) || !check_digits(den, false) {
        return Err(format!("malformed rational `{s}`"));
    }
    let n: i64 = num.parse().map_err(|_| format!("rational `{s}` out of range"))?;
    let d: i64 = den.parse().map_err(|_| format!("rational `{s}` out of range"))?;
    if d == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(n, d))
}

impl FromStr for ExtDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(ExtDist::Inf);
        }
        let r = parse_ratio_i64(s, false).map_err(|reason| Error::Invalid {
            what: "distance",
            reason,
        })?;
        ExtDist::new(r)
    }
}
