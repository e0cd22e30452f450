//! Monotone predicates `P -> [0, inf]` and their interval-valued pairs.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{FinitePoset, UpSet};
use crate::rat::{fmt_rat, ExtRat, Rat};

/// Range of predicate values: the extended half-line or the unit interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeMode {
    #[default]
    Extended,
    Unit,
}

impl RangeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RangeMode::Extended => "extended",
            RangeMode::Unit => "unit",
        }
    }
}

impl std::str::FromStr for RangeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extended" => Ok(RangeMode::Extended),
            "unit" => Ok(RangeMode::Unit),
            other => Err(Error::ModeMismatch(format!("unknown mode `{other}`"))),
        }
    }
}

/// A monotone map from the elements of a poset to `[0, inf]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Predicate {
    poset: FinitePoset,
    values: Vec<ExtRat>,
    mode: RangeMode,
}

impl Predicate {
    pub fn new(poset: &FinitePoset, values: Vec<ExtRat>, mode: RangeMode) -> Result<Self> {
        if values.len() != poset.len() {
            return Err(Error::Invalid(format!(
                "predicate has {} values for {} elements",
                values.len(),
                poset.len()
            )));
        }
        for v in &values {
            if let ExtRat::Fin(r) = v {
                if *r < Rat::zero() {
                    return Err(Error::NegativeMass(fmt_rat(r)));
                }
            }
            if mode == RangeMode::Unit && *v > ExtRat::one() {
                return Err(Error::OutOfUnitRange(v.to_string()));
            }
        }
        for i in 0..poset.len() {
            for j in poset.principal(i).iter() {
                if values[i] > values[j] {
                    return Err(Error::NonMonotonePredicate(
                        poset.name(i).to_string(),
                        poset.name(j).to_string(),
                    ));
                }
            }
        }
        Ok(Predicate {
            poset: poset.clone(),
            values,
            mode,
        })
    }

    pub fn from_rats(poset: &FinitePoset, values: Vec<Rat>, mode: RangeMode) -> Result<Self> {
        Self::new(poset, values.into_iter().map(ExtRat::Fin).collect(), mode)
    }

    pub fn constant(poset: &FinitePoset, v: ExtRat, mode: RangeMode) -> Result<Self> {
        Self::new(poset, vec![v; poset.len()], mode)
    }

    pub fn zero(poset: &FinitePoset, mode: RangeMode) -> Self {
        Predicate {
            poset: poset.clone(),
            values: vec![ExtRat::zero(); poset.len()],
            mode,
        }
    }

    pub fn one(poset: &FinitePoset, mode: RangeMode) -> Self {
        Predicate {
            poset: poset.clone(),
            values: vec![ExtRat::one(); poset.len()],
            mode,
        }
    }

    /// Indicator of an up-set, scaled by `height`.
    pub fn indicator(poset: &FinitePoset, u: UpSet, height: ExtRat, mode: RangeMode) -> Result<Self> {
        let values = (0..poset.len())
            .map(|i| if u.contains(i) { height.clone() } else { ExtRat::zero() })
            .collect();
        Self::new(poset, values, mode)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn mode(&self) -> RangeMode {
        self.mode
    }

    pub fn values(&self) -> &[ExtRat] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &ExtRat {
        &self.values[i]
    }

    pub fn with_mode(&self, mode: RangeMode) -> Result<Self> {
        Self::new(&self.poset, self.values.clone(), mode)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| !v.is_inf())
    }

    /// Supremum norm.
    pub fn sup(&self) -> ExtRat {
        self.values.iter().cloned().max().unwrap_or_else(ExtRat::zero)
    }

    pub fn pointwise_leq(&self, other: &Predicate) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Pointwise sum; the result is always an extended-mode predicate.
    pub fn add(&self, other: &Predicate) -> Result<Predicate> {
        self.poset.ensure_same(&other.poset)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Predicate {
            poset: self.poset.clone(),
            values,
            mode: RangeMode::Extended,
        })
    }

    /// Pointwise scaling, keeping the mode when the result stays in range.
    pub fn scale(&self, r: &Rat) -> Predicate {
        let values: Vec<ExtRat> = self.values.iter().map(|v| v.scale(r)).collect();
        let mode = if self.mode == RangeMode::Unit && *r <= Rat::one() {
            RangeMode::Unit
        } else {
            RangeMode::Extended
        };
        Predicate {
            poset: self.poset.clone(),
            values,
            mode,
        }
    }

    /// The predicate `x ↦ self(update(x))` for a monotone reindexing.
    pub fn reindex(&self, target: &FinitePoset, update: impl Fn(usize) -> usize) -> Result<Predicate> {
        let values = (0..target.len()).map(|i| self.values[update(i)].clone()).collect();
        Predicate::new(target, values, self.mode)
    }

    pub fn map_values(&self, f: impl Fn(usize, &ExtRat) -> ExtRat) -> Result<Predicate> {
        let values = self.values.iter().enumerate().map(|(i, v)| f(i, v)).collect();
        Predicate::new(&self.poset, values, self.mode)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}:{}", self.poset.name(i), v))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A pair of predicates `lower <= upper`, read as an interval at each point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalPredicate {
    lower: Predicate,
    upper: Predicate,
}

impl IntervalPredicate {
    pub fn new(lower: Predicate, upper: Predicate) -> Result<Self> {
        lower.poset.ensure_same(&upper.poset)?;
        for i in 0..lower.values.len() {
            if lower.values[i] > upper.values[i] {
                return Err(Error::InvertedInterval(lower.poset.name(i).to_string()));
            }
        }
        Ok(IntervalPredicate { lower, upper })
    }

    /// The diagonal embedding `g ↦ [g, g]`.
    pub fn lift(g: &Predicate) -> Self {
        IntervalPredicate {
            lower: g.clone(),
            upper: g.clone(),
        }
    }

    pub fn lower(&self) -> &Predicate {
        &self.lower
    }

    pub fn upper(&self) -> &Predicate {
        &self.upper
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.lower.poset
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// `self ⊆ other` pointwise.
    pub fn within(&self, other: &IntervalPredicate) -> bool {
        other.lower.pointwise_leq(&self.lower) && self.upper.pointwise_leq(&other.upper)
    }

    pub fn add(&self, other: &IntervalPredicate) -> Result<Self> {
        Ok(IntervalPredicate {
            lower: self.lower.add(&other.lower)?,
            upper: self.upper.add(&other.upper)?,
        })
    }

    pub fn scale(&self, r: &Rat) -> Self {
        IntervalPredicate {
            lower: self.lower.scale(r),
            upper: self.upper.scale(r),
        }
    }
}

impl fmt::Display for IntervalPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            return write!(f, "{}", self.lower);
        }
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}
