//! Seeded generators for rationals, valuations, predicates and power elements.
//! Everything is drawn from bounded-denominator grids so results stay small.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::poset::{FinitePoset, UpSet};
use crate::powerdomain::{Flavor, PowerElement};
use crate::predicate::{Predicate, RangeMode};
use crate::rat::{int, rat, ExtRat, Rat};
use crate::valuation::Valuation;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[0,1]` with denominator at most `max_den`.
pub fn unit_rat(rng: &mut SampleRng, max_den: i64) -> Rat {
    let den = rng.gen_range(1..=max_den);
    rat(rng.gen_range(0..=den), den)
}

/// A rational in the open interval `(0,1)` with denominator at most `max_den` (>= 2).
pub fn open_unit_rat(rng: &mut SampleRng, max_den: i64) -> Rat {
    let den = rng.gen_range(2..=max_den.max(2));
    rat(rng.gen_range(1..den), den)
}

/// A subprobability valuation whose masses are multiples of `1/den`.
pub fn subprobability(rng: &mut SampleRng, poset: &FinitePoset, den: i64) -> Valuation {
    let mut order: Vec<usize> = (0..poset.len()).collect();
    order.shuffle(rng);
    let mut left = den;
    let mut mass = vec![Rat::zero(); poset.len()];
    for i in order {
        let k = rng.gen_range(0..=left);
        left -= k;
        mass[i] = rat(k, den);
    }
    Valuation::new(poset, mass).expect("masses are nonnegative")
}

/// Every subprobability valuation with masses in multiples of `1/den`.
pub fn grid(poset: &FinitePoset, den: i64) -> Vec<Valuation> {
    fn go(n: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            go(n, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    go(poset.len(), den, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|ks| Valuation::new(poset, ks.into_iter().map(|k| rat(k, den)).collect()).expect("nonnegative"))
        .collect()
}

pub fn upset(rng: &mut SampleRng, poset: &FinitePoset) -> UpSet {
    let members: Vec<usize> = (0..poset.len()).filter(|_| rng.gen_bool(0.5)).collect();
    poset.up_closure(&members).expect("indices are in range")
}

/// A nonnegative combination of random up-set indicators; in unit mode it is
/// rescaled into `[0,1]`.
pub fn predicate(rng: &mut SampleRng, poset: &FinitePoset, mode: RangeMode) -> Predicate {
    let mut values = vec![Rat::zero(); poset.len()];
    for _ in 0..rng.gen_range(1..=3) {
        let u = upset(rng, poset);
        let w = rat(rng.gen_range(1..=4), rng.gen_range(1..=4));
        for i in u.iter() {
            values[i] += &w;
        }
    }
    if mode == RangeMode::Unit {
        let top = values.iter().max().cloned().unwrap_or_else(Rat::zero);
        if top > Rat::one() {
            for v in values.iter_mut() {
                *v /= &top;
            }
        }
    }
    Predicate::from_rats(poset, values, mode).expect("indicator combinations are monotone")
}

/// A predicate taking the value `inf` on a random nonempty up-set.
pub fn infinite_predicate(rng: &mut SampleRng, poset: &FinitePoset) -> Predicate {
    let mut u = upset(rng, poset);
    if u.is_empty() {
        u = poset.full();
    }
    let base = predicate(rng, poset, RangeMode::Extended);
    base.map_values(|i, v| if u.contains(i) { ExtRat::Inf } else { v.clone() })
        .unwrap_or_else(|_| Predicate::indicator(poset, u, ExtRat::Inf, RangeMode::Extended).expect("monotone"))
}

pub fn power_element(
    rng: &mut SampleRng,
    flavor: Flavor,
    poset: &FinitePoset,
    max_gens: usize,
    den: i64,
) -> Result<PowerElement> {
    let n = rng.gen_range(1..=max_gens.max(1));
    let gens = (0..n).map(|_| subprobability(rng, poset, den)).collect();
    PowerElement::new(flavor, poset, gens)?.canonicalize()
}

/// Scalars with denominators up to `max_den`, boundary cases `0, 1, 1/2` first.
pub fn scalars(rng: &mut SampleRng, count: usize, max_den: i64) -> Vec<Rat> {
    let mut out = vec![int(0), int(1), rat(1, 2)];
    while out.len() < count {
        out.push(unit_rat(rng, max_den));
    }
    out.truncate(count.max(3));
    out
}
