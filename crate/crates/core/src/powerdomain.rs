//! Finitely generated elements of the lower, upper and convex power
//! Kegelspitzen over subprobability valuations.
//!
//! A [`PowerElement`] stores generators `F` and denotes `↓conv F` (lower),
//! `↑conv F` (upper) or the lens `↓conv F ∩ ↑conv F` (convex). Equality is
//! semantic and is decided by [`PowerElement::po_equal`]; the generator list is
//! only a representation.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::{in_lower_hull, in_upper_hull};
use crate::poset::FinitePoset;
use crate::rat::{check_unit, Rat};
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Lower,
    Upper,
    Convex,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Lower, Flavor::Upper, Flavor::Convex];

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Lower => "lower",
            Flavor::Upper => "upper",
            Flavor::Convex => "convex",
        }
    }

    pub fn ensure_same(self, other: Flavor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FlavorMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Flavor::Lower),
            "upper" => Ok(Flavor::Upper),
            "convex" => Ok(Flavor::Convex),
            other => Err(Error::Invalid(format!("unknown flavor `{other}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PowerElement {
    flavor: Flavor,
    poset: FinitePoset,
    gens: Vec<Valuation>,
}

impl PowerElement {
    /// Wraps generators as given, without canonicalizing.
    pub fn new(flavor: Flavor, poset: &FinitePoset, gens: Vec<Valuation>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGeneratorSet);
        }
        for g in &gens {
            poset.ensure_same(g.poset())?;
            g.ensure_subprobability()?;
        }
        Ok(PowerElement {
            flavor,
            poset: poset.clone(),
            gens,
        })
    }

    /// The unit: `↓δ_x`, `↑δ_x` or `{δ_x}`.
    pub fn eta(flavor: Flavor, poset: &FinitePoset, x: &str) -> Result<Self> {
        Ok(Self::eta_at(flavor, poset, poset.index_of(x)?))
    }

    pub fn eta_at(flavor: Flavor, poset: &FinitePoset, i: usize) -> Self {
        PowerElement {
            flavor,
            poset: poset.clone(),
            gens: vec![Valuation::dirac_at(poset, i)],
        }
    }

    /// Generated by the zero valuation. For the upper flavor this denotes the
    /// whole space, which is least under reverse inclusion.
    pub fn bottom(flavor: Flavor, poset: &FinitePoset) -> Self {
        PowerElement {
            flavor,
            poset: poset.clone(),
            gens: vec![Valuation::zero(poset)],
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn generators(&self) -> &[Valuation] {
        &self.gens
    }

    fn ensure_compatible(&self, other: &PowerElement) -> Result<()> {
        self.flavor.ensure_same(other.flavor)?;
        self.poset.ensure_same(&other.poset)
    }

    /// Whether a subprobability valuation lies in the denoted set.
    pub fn contains(&self, mu: &Valuation) -> Result<bool> {
        if !mu.is_subprobability() {
            return Ok(false);
        }
        Ok(match self.flavor {
            Flavor::Lower => in_lower_hull(mu, &self.gens)?,
            Flavor::Upper => in_upper_hull(mu, &self.gens)?,
            Flavor::Convex => in_lower_hull(mu, &self.gens)? && in_upper_hull(mu, &self.gens)?,
        })
    }

    fn lower_below(&self, other: &PowerElement) -> Result<bool> {
        for g in &self.gens {
            if !in_lower_hull(g, &other.gens)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn upper_below(&self, other: &PowerElement) -> Result<bool> {
        for g in &other.gens {
            if !in_upper_hull(g, &self.gens)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Inclusion (lower), reverse inclusion (upper) or Egli-Milner (convex).
    pub fn po_leq(&self, other: &PowerElement) -> Result<bool> {
        self.ensure_compatible(other)?;
        Ok(match self.flavor {
            Flavor::Lower => self.lower_below(other)?,
            Flavor::Upper => self.upper_below(other)?,
            Flavor::Convex => self.lower_below(other)? && self.upper_below(other)?,
        })
    }

    pub fn po_equal(&self, other: &PowerElement) -> Result<bool> {
        Ok(self.po_leq(other)? && other.po_leq(self)?)
    }

    /// `X +_r Y`, generated by all pairwise combinations of generators.
    pub fn convex_comb_pd(r: &Rat, x: &PowerElement, y: &PowerElement) -> Result<PowerElement> {
        x.ensure_compatible(y)?;
        check_unit(r)?;
        if r.is_one() {
            return Ok(x.clone());
        }
        if r.is_zero() {
            return Ok(y.clone());
        }
        let mut gens = Vec::with_capacity(x.gens.len() * y.gens.len());
        for f in &x.gens {
            for g in &y.gens {
                gens.push(Valuation::convex_comb(r, f, g)?);
            }
        }
        PowerElement {
            flavor: x.flavor,
            poset: x.poset.clone(),
            gens,
        }
        .canonicalize()
    }

    /// Join (lower), meet (upper) or convex union (convex).
    pub fn combine(x: &PowerElement, y: &PowerElement) -> Result<PowerElement> {
        x.ensure_compatible(y)?;
        let mut gens = x.gens.clone();
        gens.extend(y.gens.iter().cloned());
        PowerElement {
            flavor: x.flavor,
            poset: x.poset.clone(),
            gens,
        }
        .canonicalize()
    }

    /// `r·X = X +_r 0`.
    pub fn scale_pd(r: &Rat, x: &PowerElement) -> Result<PowerElement> {
        Self::convex_comb_pd(r, x, &Self::bottom(x.flavor, &x.poset))
    }

    fn redundant(&self, g: &Valuation, rest: &[Valuation]) -> Result<bool> {
        let below = || -> Result<bool> {
            if rest.iter().try_fold(false, |acc, h| Ok::<_, Error>(acc || g.leq_on_basis(h)?))? {
                return Ok(true);
            }
            in_lower_hull(g, rest)
        };
        let above = || -> Result<bool> {
            if rest.iter().try_fold(false, |acc, h| Ok::<_, Error>(acc || h.leq_on_basis(g)?))? {
                return Ok(true);
            }
            in_upper_hull(g, rest)
        };
        match self.flavor {
            Flavor::Lower => below(),
            Flavor::Upper => above(),
            Flavor::Convex => Ok(below()? && above()?),
        }
    }

    /// Drops, in generator order, every generator lying in the relevant hull
    /// of the ones that remain. The result is `po_equal` to the input; no
    /// claim is made that it is the unique minimal generating set.
    pub fn canonicalize(&self) -> Result<PowerElement> {
        let mut gens: Vec<Valuation> = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let mut i = 0;
        while i < gens.len() && gens.len() > 1 {
            let mut rest = gens.clone();
            let g = rest.remove(i);
            if self.redundant(&g, &rest)? {
                gens = rest;
            } else {
                i += 1;
            }
        }
        Ok(PowerElement {
            flavor: self.flavor,
            poset: self.poset.clone(),
            gens,
        })
    }
}

impl fmt::Debug for PowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "{}<{}>", self.flavor, gens.join(" "))
    }
}

/// A Kleisli map `P -> T(V≤1 Q)`, one power element per source element.
#[derive(Clone, PartialEq, Eq)]
pub struct StateTransformer {
    flavor: Flavor,
    source: FinitePoset,
    target: FinitePoset,
    table: Vec<PowerElement>,
}

impl StateTransformer {
    pub fn new(flavor: Flavor, source: &FinitePoset, target: &FinitePoset, table: Vec<PowerElement>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::MissingEntry(
                source.name(table.len().min(source.len().saturating_sub(1))).to_string(),
            ));
        }
        for x in &table {
            flavor.ensure_same(x.flavor)?;
            target.ensure_same(&x.poset)?;
        }
        for (lo, hi) in source.covers() {
            if !table[lo].po_leq(&table[hi])? {
                return Err(Error::Invalid(format!(
                    "transformer is not monotone: {} <= {} but its images are not ordered",
                    source.name(lo),
                    source.name(hi)
                )));
            }
        }
        Ok(StateTransformer {
            flavor,
            source: source.clone(),
            target: target.clone(),
            table,
        })
    }

    /// The unit `x ↦ η(x)` as a transformer `P -> T(V≤1 P)`.
    pub fn unit(flavor: Flavor, poset: &FinitePoset) -> Self {
        StateTransformer {
            flavor,
            source: poset.clone(),
            target: poset.clone(),
            table: (0..poset.len()).map(|i| PowerElement::eta_at(flavor, poset, i)).collect(),
        }
    }

    pub fn from_fn(
        flavor: Flavor,
        source: &FinitePoset,
        target: &FinitePoset,
        f: impl Fn(usize) -> Result<PowerElement>,
    ) -> Result<Self> {
        let table = (0..source.len()).map(f).collect::<Result<Vec<_>>>()?;
        Self::new(flavor, source, target, table)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn table(&self) -> &[PowerElement] {
        &self.table
    }

    pub fn at(&self, i: usize) -> &PowerElement {
        &self.table[i]
    }

    /// The affine extension `Σ_x r_x·s(x)` of `s` to a single valuation,
    /// folded left with renormalized binary weights; leftover mass goes to
    /// the zero.
    pub fn linear_extension(&self, mu: &Valuation) -> Result<PowerElement> {
        self.source.ensure_same(mu.poset())?;
        let mut acc: Option<(PowerElement, Rat)> = None;
        for (i, m) in mu.masses().iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => (self.table[i].clone(), m.clone()),
                Some((sum, seen)) => {
                    let total = &seen + m;
                    let w = &seen / &total;
                    (PowerElement::convex_comb_pd(&w, &sum, &self.table[i])?, total)
                }
            });
        }
        match acc {
            None => Ok(PowerElement::bottom(self.flavor, &self.target)),
            Some((sum, total)) => PowerElement::scale_pd(&total, &sum),
        }
    }

    /// The free extension `s†`: the affine extension applied to each
    /// generator, folded with the semilattice operation.
    pub fn kleisli_extend(&self, x: &PowerElement) -> Result<PowerElement> {
        self.flavor.ensure_same(x.flavor)?;
        self.source.ensure_same(&x.poset)?;
        let mut gens = Vec::new();
        for mu in &x.gens {
            gens.extend(self.linear_extension(mu)?.gens);
        }
        PowerElement {
            flavor: self.flavor,
            poset: self.target.clone(),
            gens,
        }
        .canonicalize()
    }

    /// Kleisli composition `x ↦ next†(self(x))`.
    pub fn then(&self, next: &StateTransformer) -> Result<StateTransformer> {
        self.flavor.ensure_same(next.flavor)?;
        self.target.ensure_same(&next.source)?;
        let table = self
            .table
            .iter()
            .map(|x| next.kleisli_extend(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(StateTransformer {
            flavor: self.flavor,
            source: self.source.clone(),
            target: next.target.clone(),
            table,
        })
    }

    /// Pointwise `po_equal`.
    pub fn po_equal(&self, other: &StateTransformer) -> Result<bool> {
        self.flavor.ensure_same(other.flavor)?;
        self.source.ensure_same(&other.source)?;
        for (a, b) in self.table.iter().zip(&other.table) {
            if !a.po_equal(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pointwise `po_leq`.
    pub fn po_leq(&self, other: &StateTransformer) -> Result<bool> {
        self.flavor.ensure_same(other.flavor)?;
        self.source.ensure_same(&other.source)?;
        for (a, b) in self.table.iter().zip(&other.table) {
            if !a.po_leq(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for StateTransformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, x) in self.table.iter().enumerate() {
            m.entry(&self.source.name(i), x);
        }
        m.finish()
    }
}

/// `s†(X)`.
pub fn kleisli_extend(s: &StateTransformer, x: &PowerElement) -> Result<PowerElement> {
    s.kleisli_extend(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn anti() -> FinitePoset {
        FinitePoset::discrete(&["a", "b"]).unwrap()
    }

    fn d(p: &FinitePoset, x: &str) -> Valuation {
        Valuation::dirac(p, x).unwrap()
    }

    fn pe(flavor: Flavor, p: &FinitePoset, gens: Vec<Valuation>) -> PowerElement {
        PowerElement::new(flavor, p, gens).unwrap()
    }

    #[test]
    fn units_are_order_embeddings_on_a_chain() {
        let c = FinitePoset::chain(&["a", "b", "c"]).unwrap();
        for flavor in Flavor::ALL {
            for i in 0..3 {
                for j in 0..3 {
                    let x = PowerElement::eta_at(flavor, &c, i);
                    let y = PowerElement::eta_at(flavor, &c, j);
                    let expected = match flavor {
                        // ↑δ_i ⊇ ↑δ_j iff δ_i <= δ_j
                        Flavor::Lower | Flavor::Upper | Flavor::Convex => c.leq(i, j),
                    };
                    assert_eq!(x.po_leq(&y).unwrap(), expected, "{flavor} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn bottom_is_least() {
        let p = anti();
        let half = Valuation::convex_comb(&rat(1, 2), &d(&p, "a"), &d(&p, "b")).unwrap();
        for flavor in Flavor::ALL {
            let bot = PowerElement::bottom(flavor, &p);
            for x in [
                pe(flavor, &p, vec![d(&p, "a")]),
                pe(flavor, &p, vec![d(&p, "a"), d(&p, "b")]),
                pe(flavor, &p, vec![half.clone()]),
            ] {
                assert!(bot.po_leq(&x).unwrap(), "{flavor}");
            }
        }
    }

    #[test]
    fn combining_with_bottom_is_identity_for_lower() {
        let p = anti();
        let x = pe(Flavor::Lower, &p, vec![d(&p, "a"), d(&p, "b")]);
        let joined = PowerElement::combine(&PowerElement::bottom(Flavor::Lower, &p), &x).unwrap();
        assert!(joined.po_equal(&x).unwrap());
        // in the convex flavor the zero is a genuinely new point of the lens
        let xc = pe(Flavor::Convex, &p, vec![d(&p, "a")]);
        let joined = PowerElement::combine(&PowerElement::bottom(Flavor::Convex, &p), &xc).unwrap();
        assert!(!joined.po_equal(&xc).unwrap());
    }

    #[test]
    fn order_examples() {
        let p = anti();
        let a = pe(Flavor::Lower, &p, vec![d(&p, "a")]);
        let mid = pe(
            Flavor::Lower,
            &p,
            vec![Valuation::convex_comb(&rat(1, 2), &d(&p, "a"), &d(&p, "b")).unwrap()],
        );
        assert!(a.po_leq(&a).unwrap());
        assert!(!a.po_leq(&mid).unwrap());
        let u = pe(Flavor::Upper, &p, vec![d(&p, "a")]);
        assert_eq!(a.po_leq(&u).unwrap_err(), Error::FlavorMismatch("lower".into(), "upper".into()));
    }

    #[test]
    fn upper_flavor_fails_order_cancellation() {
        // coordinates (mass at a, mass at b)
        let p = anti();
        let x_prime = pe(
            Flavor::Upper,
            &p,
            vec![d(&p, "b"), d(&p, "a").scale(&rat(1, 2)).unwrap()],
        );
        let y = pe(Flavor::Upper, &p, vec![d(&p, "a")]);
        let half_y = PowerElement::scale_pd(&rat(1, 2), &y).unwrap();
        assert!(x_prime.po_leq(&half_y).unwrap());
        // (0,1) is in X' but would need a preimage of total mass 2 under 1/2·
        assert!(x_prime.contains(&d(&p, "b")).unwrap());
        let preimage = d(&p, "b").scale(&int(2)).unwrap();
        assert_eq!(preimage.total_mass(), int(2));
        assert!(!preimage.is_subprobability());
    }

    #[test]
    fn equality_examples() {
        let p = anti();
        let a = d(&p, "a");
        let b = d(&p, "b");
        let z = Valuation::zero(&p);
        assert!(pe(Flavor::Lower, &p, vec![a.clone(), z])
            .po_equal(&pe(Flavor::Lower, &p, vec![a.clone()]))
            .unwrap());
        for flavor in Flavor::ALL {
            assert!(pe(flavor, &p, vec![a.clone(), b.clone()])
                .po_equal(&pe(flavor, &p, vec![b.clone(), a.clone()]))
                .unwrap());
        }
    }

    #[test]
    fn convex_comb_examples() {
        let p = anti();
        let la = pe(Flavor::Lower, &p, vec![d(&p, "a")]);
        let lb = pe(Flavor::Lower, &p, vec![d(&p, "b")]);
        let mixed = PowerElement::convex_comb_pd(&rat(1, 2), &la, &lb).unwrap();
        let expected = pe(Flavor::Lower, &p, vec![Valuation::new(&p, vec![rat(1, 2), rat(1, 2)]).unwrap()]);
        assert!(mixed.po_equal(&expected).unwrap());
        assert_eq!(PowerElement::convex_comb_pd(&int(1), &la, &lb).unwrap(), la);
        let both = pe(Flavor::Lower, &p, vec![d(&p, "a"), d(&p, "b")]);
        assert!(PowerElement::convex_comb_pd(&rat(1, 3), &both, &both)
            .unwrap()
            .po_equal(&both)
            .unwrap());
        assert!(matches!(
            PowerElement::convex_comb_pd(&int(2), &la, &lb),
            Err(Error::ScalarOutOfRange(_))
        ));
    }

    #[test]
    fn scale_examples() {
        let p = anti();
        for flavor in Flavor::ALL {
            let x = pe(flavor, &p, vec![d(&p, "a"), d(&p, "b")]);
            assert!(PowerElement::scale_pd(&int(1), &x).unwrap().po_equal(&x).unwrap());
            assert!(PowerElement::scale_pd(&int(0), &x)
                .unwrap()
                .po_equal(&PowerElement::bottom(flavor, &p))
                .unwrap());
        }
    }

    #[test]
    fn canonicalize_examples() {
        let p = anti();
        let a = d(&p, "a");
        let x = pe(Flavor::Lower, &p, vec![a.clone(), a.scale(&rat(1, 2)).unwrap()]);
        let c = x.canonicalize().unwrap();
        assert_eq!(c.generators(), std::slice::from_ref(&a));
        assert_eq!(c.canonicalize().unwrap(), c);
        // midpoint is interior to the segment: removable in every flavor
        let mid = Valuation::convex_comb(&rat(1, 2), &a, &d(&p, "b")).unwrap();
        for flavor in Flavor::ALL {
            let x = pe(flavor, &p, vec![mid.clone(), a.clone(), d(&p, "b")]);
            let c = x.canonicalize().unwrap();
            assert_eq!(c.generators().len(), 2, "{flavor}");
            assert!(c.po_equal(&x).unwrap());
        }
    }

    #[test]
    fn kleisli_hand_example() {
        let p = anti();
        let s = StateTransformer::new(
            Flavor::Lower,
            &p,
            &p,
            vec![
                pe(Flavor::Lower, &p, vec![d(&p, "a")]),
                pe(Flavor::Lower, &p, vec![d(&p, "a"), d(&p, "b")]),
            ],
        )
        .unwrap();
        let x = pe(Flavor::Lower, &p, vec![d(&p, "b")]);
        let out = s.kleisli_extend(&x).unwrap();
        assert!(out.po_equal(&pe(Flavor::Lower, &p, vec![d(&p, "a"), d(&p, "b")])).unwrap());
    }

    #[test]
    fn kleisli_unit_laws_on_examples() {
        let p = FinitePoset::chain(&["a", "b"]).unwrap();
        for flavor in Flavor::ALL {
            let unit = StateTransformer::unit(flavor, &p);
            let x = pe(
                flavor,
                &p,
                vec![Valuation::new(&p, vec![rat(1, 4), rat(1, 2)]).unwrap(), d(&p, "a")],
            );
            assert!(unit.kleisli_extend(&x).unwrap().po_equal(&x).unwrap());
            let s = StateTransformer::new(flavor, &p, &p, vec![PowerElement::bottom(flavor, &p), x.clone()]).unwrap();
            for i in 0..2 {
                let lifted = s.kleisli_extend(&PowerElement::eta_at(flavor, &p, i)).unwrap();
                assert!(lifted.po_equal(s.at(i)).unwrap());
            }
        }
    }
}
