//! Forward (state transformer) and backward (weakest preexpectation)
//! semantics. Loops are unrolled `fuel` times in both directions, so the two
//! agree exactly rather than in the limit.

use num_traits::One;

use super::ast::{BExp, Program, Stmt, StmtKind};
use crate::error::{Error, Result};
use crate::functional::{Extremum, Selectors};
use crate::poset::{FinitePoset, DEFAULT_CAP};
use crate::powerdomain::{Flavor, PowerElement, StateTransformer};
use crate::predicate::{IntervalPredicate, Predicate};
use crate::rat::{ExtRat, Rat};

pub const DEFAULT_VAR_CAP: usize = 4;

/// All assignments to the declared variables as a discrete poset. State `i`
/// reads as the binary numeral of its values, first declared variable most
/// significant.
#[derive(Clone, Debug)]
pub struct StateSpace {
    vars: Vec<String>,
    poset: FinitePoset,
}

impl StateSpace {
    pub fn new(vars: &[String], cap_vars: usize) -> Result<Self> {
        if vars.len() > cap_vars {
            return Err(Error::TooLarge {
                what: "variable list",
                size: vars.len(),
                cap: cap_vars,
            });
        }
        let n = vars.len();
        let names: Vec<String> = (0..1usize << n)
            .map(|i| {
                if n == 0 {
                    return "()".to_string();
                }
                vars.iter()
                    .enumerate()
                    .map(|(k, v)| format!("{v}={}", (i >> (n - 1 - k)) & 1))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        let cap = DEFAULT_CAP.max(names.len());
        let poset = FinitePoset::new(&names, &[] as &[(String, String)], cap)?;
        Ok(StateSpace {
            vars: vars.to_vec(),
            poset,
        })
    }

    pub fn of(program: &Program, cap_vars: usize) -> Result<Self> {
        Self::new(&program.vars, cap_vars)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn shift(&self, var: usize) -> usize {
        self.vars.len() - 1 - var
    }

    pub fn get(&self, state: usize, var: usize) -> bool {
        (state >> self.shift(var)) & 1 == 1
    }

    pub fn set(&self, state: usize, var: usize, value: bool) -> usize {
        let bit = 1 << self.shift(var);
        if value {
            state | bit
        } else {
            state & !bit
        }
    }

    pub fn eval(&self, b: &BExp, state: usize) -> bool {
        b.eval(&|v| self.get(state, v))
    }
}

/// Converts a user-supplied fuel value.
pub fn fuel_from(fuel: i64) -> Result<u32> {
    u32::try_from(fuel).map_err(|_| Error::FuelNegative(fuel))
}

pub fn denote(program: &Program, space: &StateSpace, flavor: Flavor, fuel: u32) -> Result<StateTransformer> {
    denote_stmt(&program.body, space, flavor, fuel)
}

fn pointwise(
    space: &StateSpace,
    flavor: Flavor,
    f: impl Fn(usize) -> Result<PowerElement>,
) -> Result<StateTransformer> {
    StateTransformer::from_fn(flavor, space.poset(), space.poset(), f)
}

fn denote_stmt(s: &Stmt, space: &StateSpace, flavor: Flavor, fuel: u32) -> Result<StateTransformer> {
    let p = space.poset();
    match &s.kind {
        StmtKind::Skip => Ok(StateTransformer::unit(flavor, p)),
        StmtKind::Diverge => pointwise(space, flavor, |_| Ok(PowerElement::bottom(flavor, p))),
        StmtKind::Assign(v, b) => pointwise(space, flavor, |x| {
            Ok(PowerElement::eta_at(flavor, p, space.set(x, *v, space.eval(b, x))))
        }),
        StmtKind::Seq(a, b) => denote_stmt(a, space, flavor, fuel)?.then(&denote_stmt(b, space, flavor, fuel)?),
        StmtKind::Prob(r, a, b) => {
            let (ta, tb) = (denote_stmt(a, space, flavor, fuel)?, denote_stmt(b, space, flavor, fuel)?);
            pointwise(space, flavor, |x| PowerElement::convex_comb_pd(r, ta.at(x), tb.at(x)))
        }
        StmtKind::Choice(a, b) => {
            let (ta, tb) = (denote_stmt(a, space, flavor, fuel)?, denote_stmt(b, space, flavor, fuel)?);
            pointwise(space, flavor, |x| PowerElement::combine(ta.at(x), tb.at(x)))
        }
        StmtKind::If(c, a, b) => {
            let (ta, tb) = (denote_stmt(a, space, flavor, fuel)?, denote_stmt(b, space, flavor, fuel)?);
            pointwise(space, flavor, |x| {
                Ok(if space.eval(c, x) { ta.at(x).clone() } else { tb.at(x).clone() })
            })
        }
        StmtKind::While(c, body) => {
            let tbody = denote_stmt(body, space, flavor, fuel)?;
            // while^0 = diverge; while^(k+1) = if c then (body; while^k) else skip
            let mut w = pointwise(space, flavor, |_| Ok(PowerElement::bottom(flavor, p)))?;
            for _ in 0..fuel {
                let step = tbody.then(&w)?;
                w = pointwise(space, flavor, |x| {
                    Ok(if space.eval(c, x) {
                        step.at(x).clone()
                    } else {
                        PowerElement::eta_at(flavor, p, x)
                    })
                })?;
            }
            Ok(w)
        }
    }
}

/// Endpoint values of an interval predicate on the state space.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ends {
    lo: Vec<ExtRat>,
    hi: Vec<ExtRat>,
}

impl Ends {
    fn zero(n: usize) -> Self {
        Ends {
            lo: vec![ExtRat::zero(); n],
            hi: vec![ExtRat::zero(); n],
        }
    }
}

fn pick(e: Extremum, a: &ExtRat, b: &ExtRat) -> ExtRat {
    match e {
        Extremum::Min => ExtRat::min(a.clone(), b.clone()),
        Extremum::Max => ExtRat::max(a.clone(), b.clone()),
    }
}

/// Weakest preexpectation of `post` (lifted to an interval predicate).
pub fn wp(program: &Program, space: &StateSpace, flavor: Flavor, post: &Predicate, fuel: u32) -> Result<IntervalPredicate> {
    wp_interval(program, space, flavor, &IntervalPredicate::lift(post), fuel)
}

/// Weakest preexpectation of an interval postexpectation. Nondeterministic
/// choice takes, per end, the same extremum as `Λ` of the flavor.
pub fn wp_interval(
    program: &Program,
    space: &StateSpace,
    flavor: Flavor,
    post: &IntervalPredicate,
    fuel: u32,
) -> Result<IntervalPredicate> {
    space.poset().ensure_same(post.poset())?;
    if post.lower().mode() != post.upper().mode() {
        return Err(Error::ModeMismatch("interval ends use different modes".into()));
    }
    let g = Ends {
        lo: post.lower().values().to_vec(),
        hi: post.upper().values().to_vec(),
    };
    let sel = Selectors::for_flavor(flavor);
    let out = wp_stmt(&program.body, space, sel, g, fuel);
    let mode = post.lower().mode();
    IntervalPredicate::new(
        Predicate::new(space.poset(), out.lo, mode)?,
        Predicate::new(space.poset(), out.hi, mode)?,
    )
}

fn wp_stmt(s: &Stmt, space: &StateSpace, sel: Selectors, g: Ends, fuel: u32) -> Ends {
    let n = space.len();
    match &s.kind {
        StmtKind::Skip => g,
        StmtKind::Diverge => Ends::zero(n),
        StmtKind::Assign(v, b) => {
            let target = |x: usize| space.set(x, *v, space.eval(b, x));
            Ends {
                lo: (0..n).map(|x| g.lo[target(x)].clone()).collect(),
                hi: (0..n).map(|x| g.hi[target(x)].clone()).collect(),
            }
        }
        StmtKind::Seq(a, b) => {
            let mid = wp_stmt(b, space, sel, g, fuel);
            wp_stmt(a, space, sel, mid, fuel)
        }
        StmtKind::Prob(r, a, b) => {
            let ea = wp_stmt(a, space, sel, g.clone(), fuel);
            let eb = wp_stmt(b, space, sel, g, fuel);
            let s = Rat::one() - r;
            let mix = |x: &ExtRat, y: &ExtRat| &x.scale(r) + &y.scale(&s);
            Ends {
                lo: ea.lo.iter().zip(&eb.lo).map(|(x, y)| mix(x, y)).collect(),
                hi: ea.hi.iter().zip(&eb.hi).map(|(x, y)| mix(x, y)).collect(),
            }
        }
        StmtKind::Choice(a, b) => {
            let ea = wp_stmt(a, space, sel, g.clone(), fuel);
            let eb = wp_stmt(b, space, sel, g, fuel);
            Ends {
                lo: ea.lo.iter().zip(&eb.lo).map(|(x, y)| pick(sel.lower, x, y)).collect(),
                hi: ea.hi.iter().zip(&eb.hi).map(|(x, y)| pick(sel.upper, x, y)).collect(),
            }
        }
        StmtKind::If(c, a, b) => {
            let ea = wp_stmt(a, space, sel, g.clone(), fuel);
            let eb = wp_stmt(b, space, sel, g, fuel);
            let choose = |x: usize, u: &[ExtRat], v: &[ExtRat]| {
                if space.eval(c, x) {
                    u[x].clone()
                } else {
                    v[x].clone()
                }
            };
            Ends {
                lo: (0..n).map(|x| choose(x, &ea.lo, &eb.lo)).collect(),
                hi: (0..n).map(|x| choose(x, &ea.hi, &eb.hi)).collect(),
            }
        }
        StmtKind::While(c, body) => {
            let mut w = Ends::zero(n);
            for _ in 0..fuel {
                let step = wp_stmt(body, space, sel, w, fuel);
                w = Ends {
                    lo: (0..n)
                        .map(|x| if space.eval(c, x) { step.lo[x].clone() } else { g.lo[x].clone() })
                        .collect(),
                    hi: (0..n)
                        .map(|x| if space.eval(c, x) { step.hi[x].clone() } else { g.hi[x].clone() })
                        .collect(),
                };
            }
            w
        }
    }
}
