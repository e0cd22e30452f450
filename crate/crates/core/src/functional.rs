//! Functional representations of power elements, predicate transformers,
//! healthiness checking, order witnesses and Minkowski functionals.
//!
//! A power element `X` acts on predicates by `Λ(X)(f)`: the largest
//! (lower), smallest (upper) or full range (convex) of `∫f dμ` over `μ ∈ X`.
//! Integration is linear in `μ`, so these extrema are attained at generators.
//! All three flavors are evaluated uniformly on interval predicates
//! `[lo, hi]`: the low end of the result extremizes `∫lo`, the high end `∫hi`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{in_lower_hull, separate_lower, separate_upper, HullSide};
use crate::lp::{lp_solve, LinearSystem, LpOutcome, Relation};
use crate::poset::FinitePoset;
use crate::powerdomain::{Flavor, PowerElement, StateTransformer};
use crate::predicate::{IntervalPredicate, Predicate, RangeMode};
use crate::rat::{fmt_rat, half, int, rat, ExtRat, Interval, Rat};
use crate::sample;
use crate::valuation::{choquet_integral, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    fn pick(self, values: impl IntoIterator<Item = ExtRat>) -> ExtRat {
        let mut it = values.into_iter();
        let first = it.next().expect("generator lists are nonempty");
        it.fold(first, |acc, v| match self {
            Extremum::Min => ExtRat::min(acc, v),
            Extremum::Max => ExtRat::max(acc, v),
        })
    }

    fn flip(self) -> Self {
        match self {
            Extremum::Min => Extremum::Max,
            Extremum::Max => Extremum::Min,
        }
    }
}

/// Which extremum over generators each end of `Λ` takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selectors {
    pub lower: Extremum,
    pub upper: Extremum,
}

impl Selectors {
    pub fn for_flavor(flavor: Flavor) -> Self {
        let (lower, upper) = match flavor {
            Flavor::Lower => (Extremum::Max, Extremum::Max),
            Flavor::Upper => (Extremum::Min, Extremum::Min),
            Flavor::Convex => (Extremum::Min, Extremum::Max),
        };
        Selectors { lower, upper }
    }

    pub fn flipped(self) -> Self {
        Selectors {
            lower: self.lower.flip(),
            upper: self.upper.flip(),
        }
    }
}

fn integrate_generators(gens: &[Valuation], g: &IntervalPredicate, sel: Selectors) -> Result<Interval> {
    let mut lows = Vec::with_capacity(gens.len());
    let mut highs = Vec::with_capacity(gens.len());
    for mu in gens {
        lows.push(choquet_integral(g.lower(), mu)?);
        highs.push(choquet_integral(g.upper(), mu)?);
    }
    // a mutated selector pair may produce lo > hi; keep it as is for the checker
    Ok(Interval {
        lo: sel.lower.pick(lows),
        hi: sel.upper.pick(highs),
    })
}

/// `Λ(X)(f)`. Lower and upper flavors yield a point.
pub fn lambda(x: &PowerElement, f: &Predicate) -> Result<Interval> {
    lambda_interval(x, &IntervalPredicate::lift(f))
}

/// `Λ(X)([lo, hi])`.
pub fn lambda_interval(x: &PowerElement, g: &IntervalPredicate) -> Result<Interval> {
    x.poset().ensure_same(g.poset())?;
    integrate_generators(x.generators(), g, Selectors::for_flavor(x.flavor()))
}

/// A map from interval predicates over a poset to intervals.
pub trait Functional {
    fn poset(&self) -> &FinitePoset;

    fn apply(&self, g: &IntervalPredicate) -> Result<Interval>;

    fn apply_plain(&self, f: &Predicate) -> Result<Interval> {
        self.apply(&IntervalPredicate::lift(f))
    }
}

/// Extrema of integrals over an explicit generator list. Built from a power
/// element this is `Λ(X)`; the raw constructor skips the subprobability check
/// so that deliberately broken functionals can be expressed.
#[derive(Clone, Debug)]
pub struct GeneratorFunctional {
    poset: FinitePoset,
    gens: Vec<Valuation>,
    selectors: Selectors,
}

impl GeneratorFunctional {
    pub fn of(x: &PowerElement) -> Self {
        GeneratorFunctional {
            poset: x.poset().clone(),
            gens: x.generators().to_vec(),
            selectors: Selectors::for_flavor(x.flavor()),
        }
    }

    pub fn raw(poset: &FinitePoset, gens: Vec<Valuation>, selectors: Selectors) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGeneratorSet);
        }
        for g in &gens {
            poset.ensure_same(g.poset())?;
        }
        Ok(GeneratorFunctional {
            poset: poset.clone(),
            gens,
            selectors,
        })
    }

    pub fn with_selectors(mut self, selectors: Selectors) -> Self {
        self.selectors = selectors;
        self
    }

    pub fn selectors(&self) -> Selectors {
        self.selectors
    }
}

impl Functional for GeneratorFunctional {
    fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    fn apply(&self, g: &IntervalPredicate) -> Result<Interval> {
        self.poset.ensure_same(g.poset())?;
        integrate_generators(&self.gens, g, self.selectors)
    }
}

/// `F(g) + c` on both ends.
pub struct Shifted<F> {
    pub inner: F,
    pub shift: Rat,
}

impl<F: Functional> Functional for Shifted<F> {
    fn poset(&self) -> &FinitePoset {
        self.inner.poset()
    }

    fn apply(&self, g: &IntervalPredicate) -> Result<Interval> {
        let v = self.inner.apply(g)?;
        let c = ExtRat::Fin(self.shift.clone());
        Ok(Interval {
            lo: &v.lo + &c,
            hi: &v.hi + &c,
        })
    }
}

/// `PT(s)`: predicates over the target to predicates over the source.
#[derive(Clone, Debug)]
pub struct PredicateTransformer {
    st: StateTransformer,
}

pub fn pt_of_st(s: &StateTransformer) -> PredicateTransformer {
    PredicateTransformer { st: s.clone() }
}

impl PredicateTransformer {
    pub fn flavor(&self) -> Flavor {
        self.st.flavor()
    }

    pub fn state_transformer(&self) -> &StateTransformer {
        &self.st
    }

    /// `PT(s)(g)(x) = Λ(s(x))(g)` for every source element `x`.
    pub fn apply_interval(&self, g: &IntervalPredicate) -> Result<IntervalPredicate> {
        self.st.target().ensure_same(g.poset())?;
        let mut lo = Vec::with_capacity(self.st.source().len());
        let mut hi = Vec::with_capacity(self.st.source().len());
        for x in self.st.table() {
            let v = lambda_interval(x, g)?;
            lo.push(v.lo);
            hi.push(v.hi);
        }
        let mode = if g.lower().mode() == RangeMode::Unit && g.upper().mode() == RangeMode::Unit {
            RangeMode::Unit
        } else {
            RangeMode::Extended
        };
        let source = self.st.source();
        IntervalPredicate::new(Predicate::new(source, lo, mode)?, Predicate::new(source, hi, mode)?)
    }

    /// Lower and upper flavors: the point-valued transform of a plain predicate.
    pub fn apply(&self, g: &Predicate) -> Result<Predicate> {
        if self.flavor() == Flavor::Convex {
            return Err(Error::FlavorMismatch(
                Flavor::Convex.to_string(),
                "point-valued transform".into(),
            ));
        }
        Ok(self.apply_interval(&IntervalPredicate::lift(g))?.lower().clone())
    }

    pub fn functional_at(&self, i: usize) -> GeneratorFunctional {
        GeneratorFunctional::of(self.st.at(i))
    }
}

// ---------------------------------------------------------------------------
// healthiness

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub inputs: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HealthReport {
    pub passed: bool,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl HealthReport {
    fn new() -> Self {
        HealthReport {
            passed: true,
            checks: 0,
            violations: Vec::new(),
        }
    }

    pub fn failed_laws(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.law.as_str()).collect()
    }
}

/// Test predicates and scalars used to probe a functional.
#[derive(Clone, Debug)]
pub struct HealthSuite {
    pub mode: RangeMode,
    pub predicates: Vec<Predicate>,
    pub scalars: Vec<Rat>,
}

/// Largest number of up-sets whose indicators all enter the suite; beyond
/// it only the connected up-sets are used.
pub const INDICATOR_LIMIT: usize = 32;

impl HealthSuite {
    /// Up-set indicators, the constants `0, 1/2, 1`, and `random` seeded
    /// monotone predicates (plus one with infinite values in extended mode).
    pub fn generate(poset: &FinitePoset, mode: RangeMode, random: usize, seed: u64) -> Result<Self> {
        let ups = match poset.upsets() {
            Ok(all) if all.len() <= INDICATOR_LIMIT => all.to_vec(),
            _ => poset.upset_basis()?.to_vec(),
        };
        let mut predicates = Vec::new();
        for u in ups {
            if !u.is_empty() {
                predicates.push(Predicate::indicator(poset, u, ExtRat::one(), mode)?);
            }
        }
        for c in [int(0), half(), int(1)] {
            predicates.push(Predicate::constant(poset, ExtRat::Fin(c), mode)?);
        }
        let mut rng = sample::rng(seed);
        for _ in 0..random {
            predicates.push(sample::predicate(&mut rng, poset, mode));
        }
        if mode == RangeMode::Extended {
            predicates.push(sample::infinite_predicate(&mut rng, poset));
        }
        let scalars = match mode {
            RangeMode::Extended => vec![int(0), half(), int(2), int(3)],
            RangeMode::Unit => vec![int(0), rat(1, 3), half(), int(1)],
        };
        Ok(HealthSuite {
            mode,
            predicates,
            scalars,
        })
    }

    /// Adds caller-supplied predicates, which must share the suite's mode.
    pub fn with_predicates(mut self, extra: impl IntoIterator<Item = Predicate>) -> Result<Self> {
        for p in extra {
            if p.mode() != self.mode {
                return Err(Error::ModeMismatch(format!(
                    "suite is {} but a supplied predicate is {}",
                    self.mode.as_str(),
                    p.mode().as_str()
                )));
            }
            self.predicates.push(p);
        }
        Ok(self)
    }
}

struct Checker<'a> {
    report: HealthReport,
    context: &'a [(String, String)],
}

impl Checker<'_> {
    fn check(&mut self, law: &str, ok: bool, inputs: &[(&str, String)], lhs: String, rhs: String, note: Option<&str>) {
        self.report.checks += 1;
        if ok {
            return;
        }
        self.report.passed = false;
        if self.report.violations.iter().any(|v| v.law == law) {
            return;
        }
        let mut map: BTreeMap<String, String> = self.context.iter().cloned().collect();
        for (k, v) in inputs {
            map.insert((*k).to_string(), v.clone());
        }
        self.report.violations.push(Violation {
            law: law.to_string(),
            inputs: map,
            lhs,
            rhs,
            note: note.map(str::to_string),
        });
    }
}

fn fin(r: Rat) -> ExtRat {
    ExtRat::Fin(r)
}

/// `f + g`, halving both operands first in unit mode when the sum would
/// leave the unit interval. Returns the operands actually used.
fn summands(f: &Predicate, g: &Predicate, mode: RangeMode) -> Result<(Predicate, Predicate, Predicate, bool)> {
    let sum = f.add(g)?;
    if mode == RangeMode::Extended {
        return Ok((f.clone(), g.clone(), sum, false));
    }
    if sum.sup() <= ExtRat::one() {
        return Ok((f.clone(), g.clone(), sum.with_mode(RangeMode::Unit)?, false));
    }
    let (f2, g2) = (f.scale(&half()), g.scale(&half()));
    let sum = f2.add(&g2)?.with_mode(RangeMode::Unit)?;
    Ok((f2, g2, sum, true))
}

const RESCALED: &str = "operands rescaled by 1/2 to stay in the unit interval";

/// Convex combination `r·f + (1-r)·1` of a unit predicate with the constant 1.
fn mix_with_one(f: &Predicate, r: &Rat) -> Result<Predicate> {
    let one_minus = Rat::one() - r;
    f.map_values(|_, v| &v.scale(r) + &fin(one_minus.clone()))
}

/// Bounded verification of the healthiness conditions of `flavor` for `f`.
/// `context` entries are copied into every violation's inputs.
pub fn check_healthiness(
    f: &dyn Functional,
    flavor: Flavor,
    suite: &HealthSuite,
    context: &[(String, String)],
) -> Result<HealthReport> {
    for p in &suite.predicates {
        f.poset().ensure_same(p.poset())?;
        if p.mode() != suite.mode {
            return Err(Error::ModeMismatch(format!(
                "suite is {} but contains a {} predicate",
                suite.mode.as_str(),
                p.mode().as_str()
            )));
        }
    }
    let mut c = Checker {
        report: HealthReport::new(),
        context,
    };
    let mode = suite.mode;
    let preds = &suite.predicates;
    let poset = f.poset();
    let one = Predicate::one(poset, mode);
    let vals: Vec<Interval> = preds.iter().map(|p| f.apply_plain(p)).collect::<Result<_>>()?;
    // point value used by the one-sided flavors
    let point = |v: &Interval| match flavor {
        Flavor::Lower => v.hi.clone(),
        _ => v.lo.clone(),
    };

    for (p, v) in preds.iter().zip(&vals) {
        for r in &suite.scalars {
            let scaled = f.apply_plain(&p.scale(r))?;
            let want = v.scale(r);
            let inputs = [("f", p.to_string()), ("r", fmt_rat(r))];
            match flavor {
                Flavor::Convex => c.check(
                    "homogeneity",
                    scaled == want,
                    &inputs,
                    scaled.to_string(),
                    want.to_string(),
                    None,
                ),
                _ => {
                    let (a, b) = (point(&scaled), point(&want));
                    c.check("homogeneity", a == b, &inputs, a.to_string(), b.to_string(), None)
                }
            }
        }
        if mode == RangeMode::Unit {
            let ok = v.lo >= ExtRat::zero() && v.hi <= ExtRat::one() && v.lo <= v.hi;
            c.check(
                "unit-range",
                ok,
                &[("f", p.to_string())],
                v.to_string(),
                "[0, 1]".into(),
                None,
            );
        }
    }

    for i in 0..preds.len() {
        for j in i..preds.len() {
            let (p, q, sum, rescaled) = summands(&preds[i], &preds[j], mode)?;
            let note = rescaled.then_some(RESCALED);
            let (vp, vq) = if rescaled {
                (f.apply_plain(&p)?, f.apply_plain(&q)?)
            } else {
                (vals[i].clone(), vals[j].clone())
            };
            let vs = f.apply_plain(&sum)?;
            let inputs = [("f", p.to_string()), ("g", q.to_string())];
            match flavor {
                Flavor::Lower => {
                    let (l, r) = (vs.hi.clone(), &vp.hi + &vq.hi);
                    c.check("subadditivity", l <= r, &inputs, l.to_string(), r.to_string(), note);
                }
                Flavor::Upper => {
                    let (l, r) = (vs.lo.clone(), &vp.lo + &vq.lo);
                    c.check("superadditivity", l >= r, &inputs, l.to_string(), r.to_string(), note);
                }
                Flavor::Convex => {
                    let (l, r) = (vs.lo.clone(), &vp.lo + &vq.lo);
                    c.check("lower-superadditivity", l >= r, &inputs, l.to_string(), r.to_string(), note);
                    let (l, r) = (vs.hi.clone(), &vp.hi + &vq.hi);
                    c.check("upper-subadditivity", l <= r, &inputs, l.to_string(), r.to_string(), note);
                    for (a, b, va, vb) in [(&p, &q, &vp, &vq), (&q, &p, &vq, &vp)] {
                        let mid = &va.lo + &vb.hi;
                        let inputs = [("f", a.to_string()), ("g", b.to_string())];
                        c.check(
                            "mediality",
                            vs.lo <= mid && mid <= vs.hi,
                            &inputs,
                            format!("{} <= {} <= {}", vs.lo, mid, vs.hi),
                            "ordered".into(),
                            note,
                        );
                    }
                    if preds[i].pointwise_leq(&preds[j]) || preds[j].pointwise_leq(&preds[i]) {
                        let (lo, hi) = if preds[i].pointwise_leq(&preds[j]) {
                            (&preds[i], &preds[j])
                        } else {
                            (&preds[j], &preds[i])
                        };
                        let outer = f.apply(&IntervalPredicate::new(lo.clone(), hi.clone())?)?;
                        let m = lo.add(hi)?.scale(&half()).with_mode(mode)?;
                        for inner_pred in [lo, hi, &m] {
                            let inner = f.apply_plain(inner_pred)?;
                            c.check(
                                "subset-monotonicity",
                                outer.contains(&inner),
                                &[
                                    ("outer", format!("[{lo}, {hi}]")),
                                    ("inner", inner_pred.to_string()),
                                ],
                                inner.to_string(),
                                outer.to_string(),
                                None,
                            );
                        }
                    }
                }
            }
        }
    }

    match (flavor, mode) {
        (Flavor::Lower, RangeMode::Extended) | (Flavor::Convex, RangeMode::Extended) => {
            let v = f.apply_plain(&one)?.hi;
            c.check("nonexpansiveness", v <= ExtRat::one(), &[("f", one.to_string())], v.to_string(), "1".into(), None);
        }
        (Flavor::Upper, RangeMode::Extended) => {
            for (p, v) in preds.iter().zip(&vals) {
                let shifted = f.apply_plain(&p.add(&one)?)?.lo;
                let bound = &v.lo + &ExtRat::one();
                c.check(
                    "strong-nonexpansiveness",
                    shifted <= bound,
                    &[("f", p.to_string())],
                    shifted.to_string(),
                    bound.to_string(),
                    None,
                );
            }
        }
        (Flavor::Upper, RangeMode::Unit) => {
            for (p, v) in preds.iter().zip(&vals) {
                for r in &suite.scalars {
                    let mixed = f.apply_plain(&mix_with_one(p, r)?)?.lo;
                    let bound = &v.lo.scale(r) + &fin(Rat::one() - r);
                    c.check(
                        "strong-nonexpansiveness",
                        mixed <= bound,
                        &[("f", p.to_string()), ("r", fmt_rat(r))],
                        mixed.to_string(),
                        bound.to_string(),
                        Some("unit form F(f +_r 1) <= F(f) +_r 1"),
                    );
                }
            }
        }
        _ => {}
    }
    Ok(c.report)
}

/// Runs the checker on a family of per-state functionals, merging reports.
pub fn check_family(
    flavor: Flavor,
    family: &[(String, &dyn Functional)],
    suite: &HealthSuite,
) -> Result<HealthReport> {
    let mut total = HealthReport::new();
    for (state, f) in family {
        let ctx = [("state".to_string(), state.clone())];
        let r = check_healthiness(*f, flavor, suite, &ctx)?;
        total.checks += r.checks;
        total.passed &= r.passed;
        for v in r.violations {
            if !total.violations.iter().any(|w| w.law == v.law) {
                total.violations.push(v);
            }
        }
    }
    Ok(total)
}

/// Healthiness of `PT(s)`, probed state by state.
pub fn check_transformer(s: &StateTransformer, suite: &HealthSuite) -> Result<HealthReport> {
    let fs: Vec<GeneratorFunctional> = s.table().iter().map(GeneratorFunctional::of).collect();
    let family: Vec<(String, &dyn Functional)> = fs
        .iter()
        .enumerate()
        .map(|(i, f)| (s.source().name(i).to_string(), f as &dyn Functional))
        .collect();
    check_family(s.flavor(), &family, suite)
}

// ---------------------------------------------------------------------------
// order reflection and separation of transformers

/// A predicate `g` on which `Λ(X)(g)` is not below `Λ(Y)(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness {
    pub side: HullSide,
    pub predicate: Predicate,
    pub left: Interval,
    pub right: Interval,
}

/// `None` if `X <= Y`; otherwise a separating predicate, checked by
/// evaluating both functionals.
pub fn order_witness(x: &PowerElement, y: &PowerElement) -> Result<Option<OrderWitness>> {
    let lower_test = matches!(x.flavor(), Flavor::Lower | Flavor::Convex);
    let upper_test = matches!(x.flavor(), Flavor::Upper | Flavor::Convex);
    if lower_test {
        for g in x.generators() {
            if !in_lower_hull(g, y.generators())? {
                let cert = separate_lower(g, y.generators())?;
                return finish_witness(HullSide::Lower, cert.predicate, x, y).map(Some);
            }
        }
    }
    if upper_test {
        for g in y.generators() {
            if !crate::hull::in_upper_hull(g, x.generators())? {
                let cert = separate_upper(g, x.generators())?;
                return finish_witness(HullSide::Upper, cert.predicate, x, y).map(Some);
            }
        }
    }
    x.po_leq(y)?;
    Ok(None)
}

fn finish_witness(side: HullSide, predicate: Predicate, x: &PowerElement, y: &PowerElement) -> Result<OrderWitness> {
    let left = lambda(x, &predicate)?;
    let right = lambda(y, &predicate)?;
    let separated = match side {
        HullSide::Lower => left.hi > right.hi,
        HullSide::Upper => left.lo > right.lo,
    };
    if !separated {
        return Err(Error::Invalid("order witness failed re-verification".into()));
    }
    Ok(OrderWitness {
        side,
        predicate,
        left,
        right,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformerSeparation {
    Equal,
    Witness {
        state: String,
        predicate: Predicate,
        /// `PT(s1)(g)(state)` and `PT(s2)(g)(state)`.
        left: Interval,
        right: Interval,
    },
}

pub fn separate_transformers(s1: &StateTransformer, s2: &StateTransformer) -> Result<TransformerSeparation> {
    s1.flavor().ensure_same(s2.flavor())?;
    s1.source().ensure_same(s2.source())?;
    s1.target().ensure_same(s2.target())?;
    for (i, (a, b)) in s1.table().iter().zip(s2.table()).enumerate() {
        let w = match order_witness(a, b)? {
            Some(w) => Some(w),
            None => order_witness(b, a)?,
        };
        if let Some(w) = w {
            let left = lambda(a, &w.predicate)?;
            let right = lambda(b, &w.predicate)?;
            if left == right {
                return Err(Error::Invalid("transformer witness failed re-verification".into()));
            }
            return Ok(TransformerSeparation::Witness {
                state: s1.source().name(i).to_string(),
                predicate: w.predicate,
                left,
                right,
            });
        }
    }
    Ok(TransformerSeparation::Equal)
}

// ---------------------------------------------------------------------------
// Minkowski functional

/// For `0 < ν(a) < ∞`: a member `x` of `↓conv F` with `a = ν(a)·x`, and the
/// convex weights exhibiting `x ∈ ↓conv F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkowskiWitness {
    pub member: Valuation,
    pub weights: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkowskiValue {
    pub value: ExtRat,
    pub witness: Option<MinkowskiWitness>,
}

/// `ν(a) = inf { r | a ∈ r·↓conv F }` computed as `min Σ μ_i` subject to
/// `a <= Σ μ_i f_i`, `μ >= 0`.
pub fn minkowski_with_witness(gens: &[Valuation], a: &Valuation) -> Result<MinkowskiValue> {
    if gens.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    let poset = a.poset();
    for g in gens {
        poset.ensure_same(g.poset())?;
        g.ensure_subprobability()?;
    }
    let basis = poset.upset_basis()?;
    let mut sys = LinearSystem::with_vars(gens.len(), "mu");
    for &u in basis {
        sys.push(gens.iter().map(|g| g.measure(u)).collect(), Relation::Ge, a.measure(u));
    }
    sys.minimize(vec![Rat::one(); gens.len()]);
    let (weights, value) = match lp_solve(&sys)? {
        LpOutcome::Infeasible(_) => {
            return Ok(MinkowskiValue {
                value: ExtRat::Inf,
                witness: None,
            })
        }
        LpOutcome::Unbounded => unreachable!("the objective is bounded below by zero"),
        LpOutcome::Feasible { assignment, objective } => (assignment, objective.expect("objective was set")),
    };
    if value.is_zero() {
        return Ok(MinkowskiValue {
            value: ExtRat::zero(),
            witness: None,
        });
    }
    let inv = value.recip();
    let member = a.scale(&inv)?;
    let lambdas: Vec<Rat> = weights.iter().map(|w| w * &inv).collect();
    let mut combined = Valuation::zero(poset);
    for (l, g) in lambdas.iter().zip(gens) {
        combined = combined.add(&g.scale(l)?)?;
    }
    if !member.leq_on_basis(&combined)? || !in_lower_hull(&member, gens)? {
        return Err(Error::Invalid("Minkowski witness failed re-verification".into()));
    }
    Ok(MinkowskiValue {
        value: ExtRat::Fin(value),
        witness: Some(MinkowskiWitness {
            member,
            weights: lambdas,
        }),
    })
}

pub fn minkowski(gens: &[Valuation], a: &Valuation) -> Result<ExtRat> {
    Ok(minkowski_with_witness(gens, a)?.value)
}
