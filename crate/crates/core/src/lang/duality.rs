//! Agreement of the backward semantics with `Λ` applied to the forward one.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::ast::Program;
use super::semantics::{denote, wp_interval, StateSpace};
use crate::error::Result;
use crate::functional::lambda_interval;
use crate::poset::FinitePoset;
use crate::powerdomain::Flavor;
use crate::predicate::{IntervalPredicate, Predicate, RangeMode};
use crate::rat::ExtRat;
use crate::sample;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityMismatch {
    pub post: String,
    pub state: String,
    pub wp: String,
    pub lambda: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub flavor: Flavor,
    pub fuel: u32,
    pub posts: usize,
    pub states: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<DualityMismatch>,
}

/// Up-set indicators (at most 16 of them), the constants 0 and 1, seeded
/// random predicates and intervals, and in extended mode one predicate
/// taking the value `inf`. Always at least `min_count` posts.
pub fn duality_posts(poset: &FinitePoset, mode: RangeMode, min_count: usize, seed: u64) -> Result<Vec<IntervalPredicate>> {
    let mut out = Vec::new();
    for &u in poset.upsets()?.iter().filter(|u| !u.is_empty()).take(16) {
        out.push(IntervalPredicate::lift(&Predicate::indicator(poset, u, ExtRat::one(), mode)?));
    }
    out.push(IntervalPredicate::lift(&Predicate::zero(poset, mode)));
    out.push(IntervalPredicate::lift(&Predicate::one(poset, mode)));
    let mut rng = sample::rng(seed);
    if mode == RangeMode::Extended {
        out.push(IntervalPredicate::lift(&sample::infinite_predicate(&mut rng, poset)));
    }
    while out.len() < min_count {
        let a = sample::predicate(&mut rng, poset, mode);
        if rng.gen_bool(0.5) {
            out.push(IntervalPredicate::lift(&a));
        } else {
            let b = sample::predicate(&mut rng, poset, mode);
            let lo = a.map_values(|i, v| ExtRat::min(v.clone(), b.value(i).clone()))?;
            let hi = a.map_values(|i, v| ExtRat::max(v.clone(), b.value(i).clone()))?;
            out.push(IntervalPredicate::new(lo, hi)?);
        }
    }
    Ok(out)
}

/// Checks `wp(prog, g)(σ) = Λ(denote(prog)(σ))(g)` for every post and state,
/// stopping at the first disagreement.
pub fn check_duality(
    program: &Program,
    space: &StateSpace,
    flavor: Flavor,
    fuel: u32,
    posts: &[IntervalPredicate],
) -> Result<DualityReport> {
    let s = denote(program, space, flavor, fuel)?;
    let mut report = DualityReport {
        flavor,
        fuel,
        posts: posts.len(),
        states: space.len(),
        passed: true,
        mismatch: None,
    };
    for g in posts {
        let pre = wp_interval(program, space, flavor, g, fuel)?;
        for (i, x) in s.table().iter().enumerate() {
            let forward = lambda_interval(x, g)?;
            let backward = (pre.lower().value(i), pre.upper().value(i));
            if (&forward.lo, &forward.hi) != backward {
                report.passed = false;
                report.mismatch = Some(DualityMismatch {
                    post: g.to_string(),
                    state: space.poset().name(i).to_string(),
                    wp: format!("[{}, {}]", backward.0, backward.1),
                    lambda: forward.to_string(),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Per-state preexpectations keyed by state name, for display.
pub fn named_interval(g: &IntervalPredicate) -> BTreeMap<String, String> {
    (0..g.poset().len())
        .map(|i| {
            let (lo, hi) = (g.lower().value(i), g.upper().value(i));
            let text = if lo == hi { lo.to_string() } else { format!("[{lo}, {hi}]") };
            (g.poset().name(i).to_string(), text)
        })
        .collect()
}
