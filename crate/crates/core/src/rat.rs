//! Exact scalars: rationals, the extended nonnegative rationals with a top
//! element `inf`, and closed intervals over them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn half() -> Rat {
    rat(1, 2)
}

/// Parses `"p/q"` or an integer string.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let bad = || Error::BadRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Canonical text: reduced `p/q`, or the bare integer when `q = 1`.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}

pub fn check_unit(r: &Rat) -> Result<()> {
    if in_unit_interval(r) {
        Ok(())
    } else {
        Err(Error::ScalarOutOfRange(fmt_rat(r)))
    }
}

/// An element of the extended nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Fin(Rat),
    Inf,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Fin(Rat::zero())
    }

    pub fn one() -> Self {
        ExtRat::Fin(Rat::one())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Fin(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Fin(r) => Some(r),
            ExtRat::Inf => None,
        }
    }

    /// Scalar multiplication with `0 * inf = 0`.
    pub fn scale(&self, r: &Rat) -> ExtRat {
        match self {
            ExtRat::Fin(v) => ExtRat::Fin(v * r),
            ExtRat::Inf if r.is_zero() => ExtRat::zero(),
            ExtRat::Inf => ExtRat::Inf,
        }
    }

    /// `self - other` for finite `other <= self`; `inf - x = inf`.
    pub fn sub_finite(&self, other: &Rat) -> ExtRat {
        match self {
            ExtRat::Fin(v) => ExtRat::Fin(v - other),
            ExtRat::Inf => ExtRat::Inf,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtRat::Inf),
            t => parse_rat(t).map(ExtRat::Fin),
        }
    }

    pub fn max(a: ExtRat, b: ExtRat) -> ExtRat {
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn min(a: ExtRat, b: ExtRat) -> ExtRat {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Fin(r)
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => a.cmp(b),
            (ExtRat::Fin(_), ExtRat::Inf) => Ordering::Less,
            (ExtRat::Inf, ExtRat::Fin(_)) => Ordering::Greater,
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
        }
    }
}

impl Add for &ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a + b),
            _ => ExtRat::Inf,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        &self + &rhs
    }
}

/// Multiplication on the extended half-line, `0 * inf = 0`.
impl Mul for &ExtRat {
    type Output = ExtRat;
    fn mul(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a * b),
            (ExtRat::Fin(a), ExtRat::Inf) | (ExtRat::Inf, ExtRat::Fin(a)) => {
                ExtRat::Inf.scale(a)
            }
            (ExtRat::Inf, ExtRat::Inf) => ExtRat::Inf,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Fin(r) => write!(f, "{r}"),
            ExtRat::Inf => write!(f, "inf"),
        }
    }
}

/// A closed interval `[lo, hi]` of extended nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: ExtRat,
    pub hi: ExtRat,
}

impl Interval {
    pub fn new(lo: ExtRat, hi: ExtRat) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: ExtRat) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn scale(&self, r: &Rat) -> Interval {
        Interval {
            lo: self.lo.scale(r),
            hi: self.hi.scale(r),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// The semilattice join `[min lo, max hi]`.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: ExtRat::min(self.lo.clone(), other.lo.clone()),
            hi: ExtRat::max(self.hi.clone(), other.hi.clone()),
        }
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Egli-Milner order on intervals: both ends increase.
    pub fn em_leq(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}
