//! Membership in and separation from the lower and upper convex hulls of a
//! finite set of valuations under the stochastic order.
//!
//! `μ ∈ ↓conv F` iff some convex weights `λ` make `μ(U) <= Σ λ_i f_i(U)` on
//! every up-set; `μ ∈ ↑conv F` is the same with the inequality reversed. Both
//! are LP feasibility problems whose rows are indexed by up-sets, so a Farkas
//! certificate is a nonnegative combination of up-set indicators: a monotone
//! predicate that separates `μ` from the hull.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_solve, LinearSystem, LpOutcome, Relation};
use crate::poset::UpSet;
use crate::predicate::{Predicate, RangeMode};
use crate::rat::{ExtRat, Rat};
use crate::valuation::{choquet_integral, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullSide {
    Lower,
    Upper,
}

/// A monotone predicate `g` with `∫g dμ - max_F ∫g df = gap` (lower side) or
/// `min_F ∫g df - ∫g dμ = gap` (upper side), `gap > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub side: HullSide,
    pub predicate: Predicate,
    pub gap: Rat,
}

impl SeparationCertificate {
    /// Recomputes the gap by direct integration.
    pub fn verify(&self, mu: &Valuation, gens: &[Valuation]) -> Result<bool> {
        let gap = integral_gap(self.side, &self.predicate, mu, gens)?;
        Ok(gap == self.gap && self.gap > Rat::zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Convex weights witnessing membership.
    Member(Vec<Rat>),
    Separated(SeparationCertificate),
}

fn check_inputs(mu: &Valuation, gens: &[Valuation]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    for g in gens {
        mu.poset().ensure_same(g.poset())?;
    }
    Ok(())
}

fn membership_system(side: HullSide, mu: &Valuation, gens: &[Valuation], basis: &[UpSet]) -> LinearSystem {
    let mut sys = LinearSystem::with_vars(gens.len(), "lambda");
    sys.push(vec![Rat::one(); gens.len()], Relation::Eq, Rat::one());
    let rel = match side {
        HullSide::Lower => Relation::Ge,
        HullSide::Upper => Relation::Le,
    };
    for &u in basis {
        let row = gens.iter().map(|g| g.measure(u)).collect();
        sys.push(row, rel, mu.measure(u));
    }
    sys
}

fn integral_gap(side: HullSide, g: &Predicate, mu: &Valuation, gens: &[Valuation]) -> Result<Rat> {
    let fin = |v: ExtRat| v.finite().cloned().expect("certificate predicates are finite");
    let at_mu = fin(choquet_integral(g, mu)?);
    let mut at_gens = Vec::with_capacity(gens.len());
    for f in gens {
        at_gens.push(fin(choquet_integral(g, f)?));
    }
    Ok(match side {
        HullSide::Lower => at_mu - at_gens.into_iter().max().expect("nonempty"),
        HullSide::Upper => at_gens.into_iter().min().expect("nonempty") - at_mu,
    })
}

/// Decides membership of `mu` in the lower or upper hull of `gens`, returning
/// either convex weights or a verified separating predicate.
pub fn membership(side: HullSide, mu: &Valuation, gens: &[Valuation]) -> Result<Membership> {
    check_inputs(mu, gens)?;
    let poset = mu.poset();
    let basis = poset.upset_basis()?;
    let sys = membership_system(side, mu, gens, basis);
    match lp_solve(&sys)? {
        LpOutcome::Feasible { assignment, .. } => Ok(Membership::Member(assignment)),
        LpOutcome::Unbounded => unreachable!("feasibility systems carry no objective"),
        LpOutcome::Infeasible(cert) => {
            // row 0 is the weight normalization; rows 1.. are up-sets
            let mut values = vec![Rat::zero(); poset.len()];
            for (&u, y) in basis.iter().zip(&cert.multipliers[1..]) {
                let w = match side {
                    HullSide::Lower => -y.clone(),
                    HullSide::Upper => y.clone(),
                };
                if w.is_zero() {
                    continue;
                }
                for i in u.iter() {
                    values[i] += &w;
                }
            }
            let top = values.iter().max().cloned().unwrap_or_else(Rat::zero);
            if top > Rat::zero() {
                for v in values.iter_mut() {
                    *v /= &top;
                }
            }
            let predicate = Predicate::from_rats(poset, values, RangeMode::Extended)?;
            let gap = integral_gap(side, &predicate, mu, gens)?;
            if gap <= Rat::zero() {
                return Err(Error::Invalid("dual certificate failed to separate".into()));
            }
            Ok(Membership::Separated(SeparationCertificate { side, predicate, gap }))
        }
    }
}

/// `μ ∈ ↓conv F`.
pub fn in_lower_hull(mu: &Valuation, gens: &[Valuation]) -> Result<bool> {
    check_inputs(mu, gens)?;
    if let [only] = gens {
        return mu.leq_on_basis(only);
    }
    Ok(matches!(membership(HullSide::Lower, mu, gens)?, Membership::Member(_)))
}

/// `μ ∈ ↑conv F`.
pub fn in_upper_hull(mu: &Valuation, gens: &[Valuation]) -> Result<bool> {
    check_inputs(mu, gens)?;
    if let [only] = gens {
        return only.leq_on_basis(mu);
    }
    Ok(matches!(membership(HullSide::Upper, mu, gens)?, Membership::Member(_)))
}

pub fn in_hull(side: HullSide, mu: &Valuation, gens: &[Valuation]) -> Result<bool> {
    match side {
        HullSide::Lower => in_lower_hull(mu, gens),
        HullSide::Upper => in_upper_hull(mu, gens),
    }
}

/// A monotone `g` with `∫g dμ > max_F ∫g df`, normalized to `sup g = 1`.
pub fn separate_lower(mu: &Valuation, gens: &[Valuation]) -> Result<SeparationCertificate> {
    separate(HullSide::Lower, mu, gens)
}

/// A monotone `g` with `∫g dμ < min_F ∫g df`, normalized to `sup g = 1`.
pub fn separate_upper(mu: &Valuation, gens: &[Valuation]) -> Result<SeparationCertificate> {
    separate(HullSide::Upper, mu, gens)
}

pub fn separate(side: HullSide, mu: &Valuation, gens: &[Valuation]) -> Result<SeparationCertificate> {
    match membership(side, mu, gens)? {
        Membership::Member(_) => Err(Error::NotSeparable),
        Membership::Separated(cert) => Ok(cert),
    }
}
