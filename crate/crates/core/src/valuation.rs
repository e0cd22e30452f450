//! Simple valuations on a finite poset, the stochastic order, and Choquet
//! integration.
//!
//! Every Scott-continuous valuation on a finite poset is a finite sum of
//! point masses, so a valuation is just a nonnegative mass per element and
//! `μ(U)` is the mass inside the up-set `U`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poset::{FinitePoset, UpSet};
use crate::predicate::Predicate;
use crate::rat::{check_unit, fmt_rat, ExtRat, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct Valuation {
    poset: FinitePoset,
    mass: Vec<Rat>,
}

impl Valuation {
    pub fn new(poset: &FinitePoset, mass: Vec<Rat>) -> Result<Self> {
        if mass.len() != poset.len() {
            return Err(Error::Invalid(format!(
                "valuation has {} masses for {} elements",
                mass.len(),
                poset.len()
            )));
        }
        if let Some(neg) = mass.iter().find(|m| m.is_negative()) {
            return Err(Error::NegativeMass(fmt_rat(neg)));
        }
        Ok(Valuation {
            poset: poset.clone(),
            mass,
        })
    }

    /// Builds a valuation from `(element, mass)` pairs; unnamed elements get 0.
    pub fn from_pairs<S: AsRef<str>>(poset: &FinitePoset, pairs: &[(S, Rat)]) -> Result<Self> {
        let mut mass = vec![Rat::zero(); poset.len()];
        for (name, m) in pairs {
            mass[poset.index_of(name.as_ref())?] += m.clone();
        }
        Self::new(poset, mass)
    }

    pub fn zero(poset: &FinitePoset) -> Self {
        Valuation {
            poset: poset.clone(),
            mass: vec![Rat::zero(); poset.len()],
        }
    }

    /// The point valuation `δ_x`.
    pub fn dirac(poset: &FinitePoset, x: &str) -> Result<Self> {
        let i = poset.index_of(x)?;
        Ok(Self::dirac_at(poset, i))
    }

    pub fn dirac_at(poset: &FinitePoset, i: usize) -> Self {
        let mut v = Self::zero(poset);
        v.mass[i] = Rat::one();
        v
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn masses(&self) -> &[Rat] {
        &self.mass
    }

    pub fn mass(&self, i: usize) -> &Rat {
        &self.mass[i]
    }

    pub fn total_mass(&self) -> Rat {
        self.mass.iter().sum()
    }

    pub fn is_subprobability(&self) -> bool {
        self.total_mass() <= Rat::one()
    }

    pub fn ensure_subprobability(&self) -> Result<()> {
        if self.is_subprobability() {
            Ok(())
        } else {
            Err(Error::NotSubprobability(fmt_rat(&self.total_mass())))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mass.iter().all(Zero::is_zero)
    }

    /// `μ(U)`.
    pub fn measure(&self, u: UpSet) -> Rat {
        u.iter().map(|i| &self.mass[i]).sum()
    }

    /// `r·μ + (1-r)·ν`.
    pub fn convex_comb(r: &Rat, mu: &Valuation, nu: &Valuation) -> Result<Valuation> {
        mu.poset.ensure_same(&nu.poset)?;
        check_unit(r)?;
        let s = Rat::one() - r;
        let mass = mu.mass.iter().zip(&nu.mass).map(|(a, b)| r * a + &s * b).collect();
        Ok(Valuation {
            poset: mu.poset.clone(),
            mass,
        })
    }

    pub fn scale(&self, r: &Rat) -> Result<Valuation> {
        if r.is_negative() {
            return Err(Error::ScalarOutOfRange(fmt_rat(r)));
        }
        Ok(Valuation {
            poset: self.poset.clone(),
            mass: self.mass.iter().map(|m| m * r).collect(),
        })
    }

    pub fn add(&self, other: &Valuation) -> Result<Valuation> {
        self.poset.ensure_same(&other.poset)?;
        Ok(Valuation {
            poset: self.poset.clone(),
            mass: self.mass.iter().zip(&other.mass).map(|(a, b)| a + b).collect(),
        })
    }

    /// The stochastic order: `μ(U) <= ν(U)` for every up-set `U`.
    ///
    /// This is the definition, checked over the full up-set enumeration.
    pub fn leq(&self, other: &Valuation) -> Result<bool> {
        self.poset.ensure_same(&other.poset)?;
        Ok(self
            .poset
            .upsets()?
            .iter()
            .all(|&u| self.measure(u) <= other.measure(u)))
    }

    /// The stochastic order checked only on connected up-sets.
    ///
    /// Equivalent to [`Valuation::leq`] because both sides are additive over
    /// disjoint up-sets and every up-set splits into connected components.
    pub fn leq_on_basis(&self, other: &Valuation) -> Result<bool> {
        self.poset.ensure_same(&other.poset)?;
        Ok(self
            .poset
            .upset_basis()?
            .iter()
            .all(|&u| self.measure(u) <= other.measure(u)))
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .mass
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| format!("{}:{}", self.poset.name(i), m))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `Σ_x μ(x)·f(x)` with `0·inf = 0`.
pub fn choquet_direct(f: &Predicate, mu: &Valuation) -> Result<ExtRat> {
    f.poset().ensure_same(mu.poset())?;
    let mut acc = ExtRat::zero();
    for (v, m) in f.values().iter().zip(mu.masses()) {
        acc = &acc + &v.scale(m);
    }
    Ok(acc)
}

/// The layer-cake form `Σ_i (v_i - v_{i-1})·μ(f > v_{i-1})`, plus `inf` when
/// the infinite level carries mass.
pub fn choquet_threshold(f: &Predicate, mu: &Valuation) -> Result<ExtRat> {
    let poset = f.poset();
    poset.ensure_same(mu.poset())?;
    let mut levels: Vec<Rat> = vec![Rat::zero()];
    levels.extend(f.values().iter().filter_map(|v| v.finite().cloned()));
    levels.sort();
    levels.dedup();
    let above = |t: &Rat| -> UpSet {
        let mut bits = 0u64;
        for (i, v) in f.values().iter().enumerate() {
            if *v > ExtRat::Fin(t.clone()) {
                bits |= 1 << i;
            }
        }
        poset.upset(bits).expect("strict superlevel set of a monotone map is an up-set")
    };
    let mut acc = Rat::zero();
    for w in levels.windows(2) {
        acc += (&w[1] - &w[0]) * mu.measure(above(&w[0]));
    }
    let mut top = 0u64;
    for (i, v) in f.values().iter().enumerate() {
        if v.is_inf() {
            top |= 1 << i;
        }
    }
    let top = poset.upset(top).expect("infinite level of a monotone map is an up-set");
    if mu.measure(top) > Rat::zero() {
        return Ok(ExtRat::Inf);
    }
    Ok(ExtRat::Fin(acc))
}

/// `∫ f dμ`, computed by both formulas, which must agree.
pub fn choquet_integral(f: &Predicate, mu: &Valuation) -> Result<ExtRat> {
    let direct = choquet_direct(f, mu)?;
    let threshold = choquet_threshold(f, mu)?;
    assert_eq!(direct, threshold, "Choquet formulas disagree for f={f}, μ={mu}");
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::RangeMode;
    use crate::rat::{int, rat};

    fn chain2() -> FinitePoset {
        FinitePoset::chain(&["a", "b"]).unwrap()
    }

    #[test]
    fn dirac_examples() {
        let p = chain2();
        let d = Valuation::dirac(&p, "a").unwrap();
        assert_eq!(d.masses(), &[int(1), int(0)]);
        assert_eq!(d.total_mass(), int(1));
        for &u in p.upsets().unwrap() {
            assert_eq!(d.measure(u), if u.contains(0) { int(1) } else { int(0) });
        }
        assert_eq!(Valuation::dirac(&p, "zz").unwrap_err(), Error::UnknownElement("zz".into()));
    }

    #[test]
    fn convex_comb_examples() {
        let p = FinitePoset::discrete(&["a", "b"]).unwrap();
        let a = Valuation::dirac(&p, "a").unwrap();
        let b = Valuation::dirac(&p, "b").unwrap();
        assert_eq!(Valuation::convex_comb(&int(1), &a, &b).unwrap(), a);
        assert_eq!(Valuation::convex_comb(&rat(1, 3), &a, &a).unwrap(), a);
        assert_eq!(
            Valuation::convex_comb(&rat(1, 2), &a, &b).unwrap().masses(),
            &[rat(1, 2), rat(1, 2)]
        );
        assert!(matches!(
            Valuation::convex_comb(&rat(3, 2), &a, &b),
            Err(Error::ScalarOutOfRange(_))
        ));
        let q = FinitePoset::discrete(&["a", "c"]).unwrap();
        let c = Valuation::dirac(&q, "c").unwrap();
        assert_eq!(Valuation::convex_comb(&rat(1, 2), &a, &c).unwrap_err(), Error::PosetMismatch);
    }

    #[test]
    fn cone_operations() {
        let p = chain2();
        let mu = Valuation::from_pairs(&p, &[("a", rat(1, 3))]).unwrap();
        assert!(mu.scale(&int(0)).unwrap().is_zero());
        assert_eq!(mu.add(&Valuation::zero(&p)).unwrap(), mu);
        assert_eq!(mu.scale(&int(2)).unwrap().masses(), &[rat(2, 3), int(0)]);
    }

    #[test]
    fn stochastic_order_examples() {
        let p = chain2();
        let a = Valuation::dirac(&p, "a").unwrap();
        let b = Valuation::dirac(&p, "b").unwrap();
        assert!(a.leq(&b).unwrap());
        assert!(!b.leq(&a).unwrap());
        assert!(a.scale(&rat(1, 2)).unwrap().leq(&a).unwrap());
        let half = Valuation::convex_comb(&rat(1, 2), &a, &b).unwrap();
        // up-sets {b}: 1/2 <= 1, {a,b}: 1 <= 1
        assert!(half.leq(&b).unwrap());
    }

    #[test]
    fn choquet_examples() {
        let p = chain2();
        let one = Predicate::one(&p, RangeMode::Extended);
        let d = Valuation::dirac(&p, "b").unwrap();
        assert_eq!(choquet_integral(&one, &d).unwrap(), ExtRat::one());

        let f = Predicate::from_rats(&p, vec![int(1), int(3)], RangeMode::Extended).unwrap();
        let mu = Valuation::new(&p, vec![rat(1, 2), rat(1, 4)]).unwrap();
        // direct: 1/2 + 3/4; threshold: 1·(3/4) + 2·(1/4)
        assert_eq!(choquet_direct(&f, &mu).unwrap(), ExtRat::Fin(rat(5, 4)));
        assert_eq!(choquet_threshold(&f, &mu).unwrap(), ExtRat::Fin(rat(5, 4)));

        let r = rat(2, 7);
        assert_eq!(
            choquet_integral(&f, &mu.scale(&r).unwrap()).unwrap(),
            choquet_integral(&f, &mu).unwrap().scale(&r)
        );
    }

    #[test]
    fn choquet_with_infinite_values() {
        let p = chain2();
        let f = Predicate::new(&p, vec![ExtRat::one(), ExtRat::Inf], RangeMode::Extended).unwrap();
        let only_a = Valuation::dirac(&p, "a").unwrap();
        assert_eq!(choquet_integral(&f, &only_a).unwrap(), ExtRat::one());
        let some_b = Valuation::new(&p, vec![int(0), rat(1, 8)]).unwrap();
        assert_eq!(choquet_integral(&f, &some_b).unwrap(), ExtRat::Inf);
        assert_eq!(choquet_integral(&f, &Valuation::zero(&p)).unwrap(), ExtRat::zero());
    }
}
