//! Equational and implicational laws as data, evaluated by interpretation in
//! any model of the signature `+_r`, `∪`, `0`, `r·`.

mod catalog;
mod models;
mod randomset;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, rat, Rat};
use crate::sample::{self, SampleRng};

pub use catalog::{
    barycentric_suite, by_id, catalog, ccsa_suite, kegelspitze_semilattice_suite, ordered_suite, pointed_suite,
    power_suite, semilattice_suite, valuation_suite,
};
pub use models::{JoinChainModel, PowerModel, ValuationModel};
pub use randomset::{
    randomset_witnesses, rs_convex, rs_union, rs_unit, Multiset, MultisetModel, RandomSet, RandomSetModel,
    WitnessReport,
};

/// Scalar expressions over the sampled scalars `p, q, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Var(usize),
    Const(Rat),
    OneMinus(Box<Scalar>),
    Mul(Box<Scalar>, Box<Scalar>),
    Div(Box<Scalar>, Box<Scalar>),
}

const SCALAR_NAMES: [&str; 3] = ["p", "q", "s"];
const VAR_NAMES: [&str; 4] = ["a", "b", "c", "d"];

impl Scalar {
    pub fn eval(&self, s: &[Rat]) -> Rat {
        match self {
            Scalar::Var(i) => s[*i].clone(),
            Scalar::Const(r) => r.clone(),
            Scalar::OneMinus(x) => Rat::one() - x.eval(s),
            Scalar::Mul(x, y) => x.eval(s) * y.eval(s),
            Scalar::Div(x, y) => x.eval(s) / y.eval(s),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Var(i) => write!(f, "{}", SCALAR_NAMES[*i]),
            Scalar::Const(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::OneMinus(x) => write!(f, "(1-{x})"),
            Scalar::Mul(x, y) => write!(f, "{x}{y}"),
            Scalar::Div(x, y) => write!(f, "({x})/({y})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Comb,
    Union,
    Zero,
    Scale,
    Leq,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Comb => "+_r",
            Op::Union => "union",
            Op::Zero => "zero",
            Op::Scale => "scale",
            Op::Leq => "order",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Comb(Scalar, Box<Term>, Box<Term>),
    Union(Box<Term>, Box<Term>),
    Zero,
    Scale(Scalar, Box<Term>),
}

impl Term {
    fn ops(&self, out: &mut BTreeSet<Op>) {
        match self {
            Term::Var(_) => {}
            Term::Comb(_, a, b) => {
                out.insert(Op::Comb);
                a.ops(out);
                b.ops(out);
            }
            Term::Union(a, b) => {
                out.insert(Op::Union);
                a.ops(out);
                b.ops(out);
            }
            Term::Zero => {
                out.insert(Op::Zero);
            }
            Term::Scale(_, a) => {
                out.insert(Op::Scale);
                a.ops(out);
            }
        }
    }

    pub fn eval<M: Model>(&self, m: &M, vars: &[M::Elem], s: &[Rat]) -> Result<M::Elem> {
        Ok(match self {
            Term::Var(i) => vars[*i].clone(),
            Term::Comb(r, a, b) => m.comb(&r.eval(s), &a.eval(m, vars, s)?, &b.eval(m, vars, s)?)?,
            Term::Union(a, b) => m.union(&a.eval(m, vars, s)?, &b.eval(m, vars, s)?)?,
            Term::Zero => m.zero()?,
            Term::Scale(r, a) => m.scale(&r.eval(s), &a.eval(m, vars, s)?)?,
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "{}", VAR_NAMES[*i]),
            Term::Comb(r, a, b) => write!(f, "({a} +[{r}] {b})"),
            Term::Union(a, b) => write!(f, "({a} ∪ {b})"),
            Term::Zero => write!(f, "0"),
            Term::Scale(r, a) => write!(f, "{r}·{a}"),
        }
    }
}

/// Where a sampled scalar lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `[0,1]`
    Closed,
    /// `[0,1)`
    HalfOpen,
    /// `(0,1)`
    Open,
}

impl Domain {
    fn boundary(self) -> Vec<Rat> {
        match self {
            Domain::Closed => vec![Rat::zero(), Rat::one(), rat(1, 2)],
            Domain::HalfOpen => vec![Rat::zero(), rat(1, 2)],
            Domain::Open => vec![rat(1, 2)],
        }
    }

    fn sample(self, rng: &mut SampleRng) -> Rat {
        match self {
            Domain::Closed => sample::unit_rat(rng, MAX_DEN),
            Domain::HalfOpen => {
                let den = rng.gen_range(1..=MAX_DEN);
                rat(rng.gen_range(0..den), den)
            }
            Domain::Open => sample::open_unit_rat(rng, MAX_DEN),
        }
    }
}

/// Largest denominator of sampled scalars.
pub const MAX_DEN: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Equation(Term, Term),
    /// `premise.0 <= premise.1` implies `conclusion.0 <= conclusion.1`.
    Implication { premise: (Term, Term), conclusion: (Term, Term) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Law {
    pub id: &'static str,
    pub carriers: usize,
    pub scalars: Vec<Domain>,
    pub statement: Statement,
}

impl Law {
    pub fn ops(&self) -> BTreeSet<Op> {
        let mut out = BTreeSet::new();
        match &self.statement {
            Statement::Equation(l, r) => {
                l.ops(&mut out);
                r.ops(&mut out);
            }
            Statement::Implication { premise, conclusion } => {
                out.insert(Op::Leq);
                for t in [&premise.0, &premise.1, &conclusion.0, &conclusion.1] {
                    t.ops(&mut out);
                }
            }
        }
        out
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.statement {
            Statement::Equation(l, r) => write!(f, "{l} = {r}"),
            Statement::Implication { premise, conclusion } => write!(
                f,
                "{} <= {} implies {} <= {}",
                premise.0, premise.1, conclusion.0, conclusion.1
            ),
        }
    }
}

/// A carrier with the operations of the signature. Operations a model does
/// not bind report `UnboundOperation`.
pub trait Model {
    type Elem: Clone;

    fn name(&self) -> String;

    fn binds(&self, op: Op) -> bool;

    fn sample(&self, rng: &mut SampleRng) -> Result<Self::Elem>;

    /// An element above `a`, used to make order premises non-vacuous.
    fn sample_above(&self, _a: &Self::Elem, rng: &mut SampleRng) -> Result<Self::Elem> {
        self.sample(rng)
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool>;

    fn show(&self, a: &Self::Elem) -> String;

    fn comb(&self, r: &Rat, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn union(&self, _a: &Self::Elem, _b: &Self::Elem) -> Result<Self::Elem> {
        Err(Error::UnboundOperation(Op::Union.as_str().into()))
    }

    fn zero(&self) -> Result<Self::Elem> {
        Err(Error::UnboundOperation(Op::Zero.as_str().into()))
    }

    /// `r·a = a +_r 0` unless overridden.
    fn scale(&self, r: &Rat, a: &Self::Elem) -> Result<Self::Elem> {
        self.comb(r, a, &self.zero()?)
    }

    fn leq(&self, _a: &Self::Elem, _b: &Self::Elem) -> Result<bool> {
        Err(Error::UnboundOperation(Op::Leq.as_str().into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Holds,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub assignment: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub statement: String,
    pub expected: Expect,
    pub observed: Expect,
    pub samples: usize,
    /// Implication samples whose premise was false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vacuous: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub model: String,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn check(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

fn scalar_cases(law: &Law, samples: usize, rng: &mut SampleRng) -> Vec<Vec<Rat>> {
    let mut cases: Vec<Vec<Rat>> = vec![vec![]];
    for d in &law.scalars {
        let mut next = Vec::new();
        for prefix in &cases {
            for b in d.boundary() {
                let mut v = prefix.clone();
                v.push(b);
                next.push(v);
            }
        }
        cases = next;
    }
    cases.truncate(samples);
    while cases.len() < samples {
        cases.push(law.scalars.iter().map(|d| d.sample(rng)).collect());
    }
    cases
}

fn mix_seed(seed: u64, law: &str) -> u64 {
    // FNV-1a over the law id keeps streams independent of suite order
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in law.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Samples `samples` instances of `law` in `model`, stopping at the first
/// counterexample.
pub fn run_law<M: Model>(model: &M, law: &Law, expected: Expect, samples: usize, seed: u64) -> Result<LawCheck> {
    for op in law.ops() {
        if !model.binds(op) {
            return Err(Error::UnboundOperation(format!("{} (needed by {})", op.as_str(), law.id)));
        }
    }
    let mut rng = sample::rng(mix_seed(seed, law.id));
    let cases = scalar_cases(law, samples, &mut rng);
    let mut vacuous = 0;
    let mut counterexample = None;
    let mut done = 0;
    for (k, s) in cases.iter().enumerate() {
        let mut vars = Vec::with_capacity(law.carriers);
        for i in 0..law.carriers {
            let v = if i == 1 && matches!(law.statement, Statement::Implication { .. }) && k % 2 == 0 {
                model.sample_above(&vars[0], &mut rng)?
            } else {
                model.sample(&mut rng)?
            };
            vars.push(v);
        }
        done += 1;
        let failure = match &law.statement {
            Statement::Equation(l, r) => {
                let (lv, rv) = (l.eval(model, &vars, s)?, r.eval(model, &vars, s)?);
                (!model.equal(&lv, &rv)?).then(|| (model.show(&lv), model.show(&rv)))
            }
            Statement::Implication { premise, conclusion } => {
                let (p0, p1) = (premise.0.eval(model, &vars, s)?, premise.1.eval(model, &vars, s)?);
                if !model.leq(&p0, &p1)? {
                    vacuous += 1;
                    None
                } else {
                    let (c0, c1) = (conclusion.0.eval(model, &vars, s)?, conclusion.1.eval(model, &vars, s)?);
                    (!model.leq(&c0, &c1)?).then(|| (model.show(&c0), model.show(&c1)))
                }
            }
        };
        if let Some((lhs, rhs)) = failure {
            let mut assignment = BTreeMap::new();
            for (i, v) in vars.iter().enumerate() {
                assignment.insert(VAR_NAMES[i].to_string(), model.show(v));
            }
            for (i, r) in s.iter().enumerate() {
                assignment.insert(SCALAR_NAMES[i].to_string(), fmt_rat(r));
            }
            counterexample = Some(Counterexample { assignment, lhs, rhs });
            break;
        }
    }
    let observed = if counterexample.is_some() { Expect::Fails } else { Expect::Holds };
    Ok(LawCheck {
        law: law.id.to_string(),
        statement: law.to_string(),
        expected,
        observed,
        samples: done,
        vacuous: matches!(law.statement, Statement::Implication { .. }).then_some(vacuous),
        counterexample,
        ok: observed == expected,
    })
}

/// Runs every law of a suite; the report passes iff every observation
/// matches its expectation.
pub fn run_suite<M: Model>(model: &M, suite: &[(Law, Expect)], samples: usize, seed: u64) -> Result<LawReport> {
    for (law, _) in suite {
        for op in law.ops() {
            if !model.binds(op) {
                return Err(Error::UnboundOperation(format!("{} (needed by {})", op.as_str(), law.id)));
            }
        }
    }
    let mut checks = Vec::with_capacity(suite.len());
    for (law, expected) in suite {
        checks.push(run_law(model, law, *expected, samples, seed)?);
    }
    Ok(LawReport {
        model: model.name(),
        seed,
        samples,
        passed: checks.iter().all(|c| c.ok),
        checks,
    })
}

/// Pairs every law with the expectation that it holds.
pub fn expect_all(laws: Vec<Law>) -> Vec<(Law, Expect)> {
    laws.into_iter().map(|l| (l, Expect::Holds)).collect()
}
