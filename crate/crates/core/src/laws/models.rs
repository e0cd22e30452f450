use num_traits::{One, Zero};
use rand::Rng;

use super::{Model, Op};
use crate::error::Result;
use crate::poset::FinitePoset;
use crate::powerdomain::{Flavor, PowerElement};
use crate::rat::Rat;
use crate::sample::{self, SampleRng};
use crate::valuation::Valuation;

/// Subprobability valuations on a poset, with masses on a `1/den` grid.
pub struct ValuationModel {
    pub poset: FinitePoset,
    pub den: i64,
}

impl Model for ValuationModel {
    type Elem = Valuation;

    fn name(&self) -> String {
        format!("valuation on {:?}", self.poset)
    }

    fn binds(&self, op: Op) -> bool {
        !matches!(op, Op::Union)
    }

    fn sample(&self, rng: &mut SampleRng) -> Result<Valuation> {
        Ok(sample::subprobability(rng, &self.poset, self.den))
    }

    /// Adds mass from the unused budget, so the result dominates `a`.
    fn sample_above(&self, a: &Valuation, rng: &mut SampleRng) -> Result<Valuation> {
        let room = Rat::one() - a.total_mass();
        let extra = sample::subprobability(rng, &self.poset, self.den).scale(&room)?;
        a.add(&extra)
    }

    fn equal(&self, a: &Valuation, b: &Valuation) -> Result<bool> {
        Ok(a == b)
    }

    fn show(&self, a: &Valuation) -> String {
        a.to_string()
    }

    fn comb(&self, r: &Rat, a: &Valuation, b: &Valuation) -> Result<Valuation> {
        Valuation::convex_comb(r, a, b)
    }

    fn zero(&self) -> Result<Valuation> {
        Ok(Valuation::zero(&self.poset))
    }

    fn scale(&self, r: &Rat, a: &Valuation) -> Result<Valuation> {
        a.scale(r)
    }

    fn leq(&self, a: &Valuation, b: &Valuation) -> Result<bool> {
        a.leq(b)
    }
}

/// Finitely generated power elements of one flavor.
pub struct PowerModel {
    pub flavor: Flavor,
    pub poset: FinitePoset,
    pub max_gens: usize,
    pub den: i64,
}

impl Model for PowerModel {
    type Elem = PowerElement;

    fn name(&self) -> String {
        format!("{} powerdomain on {:?}", self.flavor, self.poset)
    }

    fn binds(&self, _op: Op) -> bool {
        true
    }

    fn sample(&self, rng: &mut SampleRng) -> Result<PowerElement> {
        sample::power_element(rng, self.flavor, &self.poset, self.max_gens, self.den)
    }

    /// `X ∨ Y` is above `X` for the lower flavor; the other flavors use
    /// `X` itself so that order premises still hold sometimes.
    fn sample_above(&self, a: &PowerElement, rng: &mut SampleRng) -> Result<PowerElement> {
        match self.flavor {
            Flavor::Lower => PowerElement::combine(a, &self.sample(rng)?),
            Flavor::Upper => Ok(a.clone()),
            Flavor::Convex => {
                if rng.gen_bool(0.5) {
                    Ok(a.clone())
                } else {
                    self.sample(rng)
                }
            }
        }
    }

    fn equal(&self, a: &PowerElement, b: &PowerElement) -> Result<bool> {
        a.po_equal(b)
    }

    fn show(&self, a: &PowerElement) -> String {
        a.to_string()
    }

    fn comb(&self, r: &Rat, a: &PowerElement, b: &PowerElement) -> Result<PowerElement> {
        PowerElement::convex_comb_pd(r, a, b)
    }

    fn union(&self, a: &PowerElement, b: &PowerElement) -> Result<PowerElement> {
        PowerElement::combine(a, b)
    }

    fn zero(&self) -> Result<PowerElement> {
        Ok(PowerElement::bottom(self.flavor, &self.poset))
    }

    fn scale(&self, r: &Rat, a: &PowerElement) -> Result<PowerElement> {
        PowerElement::scale_pd(r, a)
    }

    fn leq(&self, a: &PowerElement, b: &PowerElement) -> Result<bool> {
        a.po_leq(b)
    }
}

/// A finite chain read as a join-semilattice, with `a +_r b = a ∨ b` for
/// `0 < r < 1` and the projections at the endpoints.
pub struct JoinChainModel {
    pub size: u8,
}

impl Model for JoinChainModel {
    type Elem = u8;

    fn name(&self) -> String {
        format!("join-semilattice chain of {}", self.size)
    }

    fn binds(&self, op: Op) -> bool {
        matches!(op, Op::Comb | Op::Union)
    }

    fn sample(&self, rng: &mut SampleRng) -> Result<u8> {
        Ok(rng.gen_range(0..self.size))
    }

    fn equal(&self, a: &u8, b: &u8) -> Result<bool> {
        Ok(a == b)
    }

    fn show(&self, a: &u8) -> String {
        a.to_string()
    }

    fn comb(&self, r: &Rat, a: &u8, b: &u8) -> Result<u8> {
        Ok(if r.is_one() {
            *a
        } else if r.is_zero() {
            *b
        } else {
            *a.max(b)
        })
    }

    fn union(&self, a: &u8, b: &u8) -> Result<u8> {
        Ok(*a.max(b))
    }
}
