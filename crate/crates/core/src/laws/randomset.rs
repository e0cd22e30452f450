//! Finitely supported distributions over nonempty finite subsets (and, for
//! comparison, nonempty multisets) of a ground set, with product union.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::{barycentric_suite, by_id, run_suite, Expect, LawReport, Model, Op};
use crate::error::{Error, Result};
use crate::rat::{check_unit, fmt_rat, rat, Rat};
use crate::sample::{self, SampleRng};

/// A distribution over nonempty subsets, keyed by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSet {
    ground: Arc<Vec<String>>,
    dist: BTreeMap<u64, Rat>,
}

fn fmt_subset(ground: &[String], mask: u64) -> String {
    let names: Vec<&str> = (0..ground.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| ground[i].as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

fn insert(dist: &mut BTreeMap<u64, Rat>, key: u64, w: Rat) {
    if w.is_zero() {
        return;
    }
    *dist.entry(key).or_insert_with(Rat::zero) += w;
}

impl RandomSet {
    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn distribution(&self) -> &BTreeMap<u64, Rat> {
        &self.dist
    }

    /// Probabilities keyed by printed subsets, e.g. `{a,b}`.
    pub fn named(&self) -> BTreeMap<String, String> {
        self.dist
            .iter()
            .map(|(k, w)| (fmt_subset(&self.ground, *k), fmt_rat(w)))
            .collect()
    }

    fn ensure_same(&self, other: &RandomSet) -> Result<()> {
        if self.ground == other.ground {
            Ok(())
        } else {
            Err(Error::GroundSetMismatch)
        }
    }
}

impl fmt::Display for RandomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .dist
            .iter()
            .map(|(k, w)| format!("{}·{}", fmt_rat(w), fmt_subset(&self.ground, *k)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `δ_{x}`, the point mass at the singleton `{x}`.
pub fn rs_unit(ground: &Arc<Vec<String>>, x: &str) -> Result<RandomSet> {
    let i = ground
        .iter()
        .position(|g| g == x)
        .ok_or_else(|| Error::UnknownElement(x.to_string()))?;
    Ok(RandomSet {
        ground: ground.clone(),
        dist: BTreeMap::from([(1u64 << i, Rat::one())]),
    })
}

pub fn rs_convex(r: &Rat, a: &RandomSet, b: &RandomSet) -> Result<RandomSet> {
    a.ensure_same(b)?;
    check_unit(r)?;
    let s = Rat::one() - r;
    let mut dist = BTreeMap::new();
    for (k, w) in &a.dist {
        insert(&mut dist, *k, w * r);
    }
    for (k, w) in &b.dist {
        insert(&mut dist, *k, w * &s);
    }
    Ok(RandomSet {
        ground: a.ground.clone(),
        dist,
    })
}

/// `(Σ α_i x_i) ∪ (Σ β_j y_j) = Σ α_i β_j (x_i ∪ y_j)`.
pub fn rs_union(a: &RandomSet, b: &RandomSet) -> Result<RandomSet> {
    a.ensure_same(b)?;
    let mut dist = BTreeMap::new();
    for (x, wa) in &a.dist {
        for (y, wb) in &b.dist {
            insert(&mut dist, x | y, wa * wb);
        }
    }
    Ok(RandomSet {
        ground: a.ground.clone(),
        dist,
    })
}

fn positive_weights(rng: &mut SampleRng, k: usize) -> Vec<Rat> {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| rat(w, total)).collect()
}

pub struct RandomSetModel {
    pub ground: Arc<Vec<String>>,
}

impl RandomSetModel {
    pub fn new(n: usize) -> Self {
        RandomSetModel {
            ground: Arc::new(ground_names(n)),
        }
    }
}

fn ground_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

impl Model for RandomSetModel {
    type Elem = RandomSet;

    fn name(&self) -> String {
        format!("random sets over {{{}}}", self.ground.join(","))
    }

    fn binds(&self, op: Op) -> bool {
        matches!(op, Op::Comb | Op::Union)
    }

    fn sample(&self, rng: &mut SampleRng) -> Result<RandomSet> {
        let full = (1u64 << self.ground.len()) - 1;
        let k = rng.gen_range(1..=3);
        let mut dist = BTreeMap::new();
        for w in positive_weights(rng, k) {
            insert(&mut dist, rng.gen_range(1..=full), w);
        }
        Ok(RandomSet {
            ground: self.ground.clone(),
            dist,
        })
    }

    fn equal(&self, a: &RandomSet, b: &RandomSet) -> Result<bool> {
        Ok(a == b)
    }

    fn show(&self, a: &RandomSet) -> String {
        a.to_string()
    }

    fn comb(&self, r: &Rat, a: &RandomSet, b: &RandomSet) -> Result<RandomSet> {
        rs_convex(r, a, b)
    }

    fn union(&self, a: &RandomSet, b: &RandomSet) -> Result<RandomSet> {
        rs_union(a, b)
    }
}

/// A distribution over nonempty multisets, keyed by multiplicity vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiset {
    ground: Arc<Vec<String>>,
    dist: BTreeMap<Vec<u32>, Rat>,
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .dist
            .iter()
            .map(|(k, w)| {
                let items: Vec<String> = k
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &m)| std::iter::repeat_n(self.ground[i].clone(), m as usize))
                    .collect();
                format!("{}·<{}>", fmt_rat(w), items.join(","))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Multiset {
    pub fn unit(ground: &Arc<Vec<String>>, i: usize) -> Self {
        let mut key = vec![0; ground.len()];
        key[i] = 1;
        Multiset {
            ground: ground.clone(),
            dist: BTreeMap::from([(key, Rat::one())]),
        }
    }

    /// Union as multiset sum, taken over the product distribution.
    pub fn union(&self, other: &Multiset) -> Result<Multiset> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch);
        }
        let mut dist: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (x, wa) in &self.dist {
            for (y, wb) in &other.dist {
                let key: Vec<u32> = x.iter().zip(y).map(|(m, n)| m + n).collect();
                *dist.entry(key).or_insert_with(Rat::zero) += wa * wb;
            }
        }
        Ok(Multiset {
            ground: self.ground.clone(),
            dist,
        })
    }
}

pub struct MultisetModel {
    pub ground: Arc<Vec<String>>,
}

impl MultisetModel {
    pub fn sample(&self, rng: &mut SampleRng) -> Multiset {
        let n = self.ground.len();
        let mut dist = BTreeMap::new();
        let k = rng.gen_range(1..=3);
        for w in positive_weights(rng, k) {
            let mut key: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            if key.iter().all(|&m| m == 0) {
                key[rng.gen_range(0..n)] = 1;
            }
            *dist.entry(key).or_insert_with(Rat::zero) += w;
        }
        Multiset {
            ground: self.ground.clone(),
            dist,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotenceWitness {
    pub element: BTreeMap<String, String>,
    pub self_union: BTreeMap<String, String>,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultisetCheck {
    pub samples: usize,
    pub diracs: usize,
    pub all_differ: bool,
    pub example: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub ground: Vec<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotence: Option<IdempotenceWitness>,
    pub laws: LawReport,
    pub multiset: MultisetCheck,
}

/// Finite evidence about the random-set algebra over an `n`-element ground
/// set: failure of `∪`-idempotence and of `+_r`-over-`∪` distributivity,
/// the laws it does satisfy, and `p ≠ p ∪ p` for multisets.
pub fn randomset_witnesses(n: usize, samples: usize, seed: u64) -> Result<WitnessReport> {
    if n == 0 {
        return Err(Error::Invalid("ground set must have at least one element".into()));
    }
    if n > 3 {
        return Err(Error::TooLarge {
            what: "ground set",
            size: n,
            cap: 3,
        });
    }
    let model = RandomSetModel::new(n);
    let ground = model.ground.clone();

    let idempotence = if n >= 2 {
        let mixed = rs_convex(&rat(1, 2), &rs_unit(&ground, &ground[0])?, &rs_unit(&ground, &ground[1])?)?;
        let twice = rs_union(&mixed, &mixed)?;
        Some(IdempotenceWitness {
            element: mixed.named(),
            self_union: twice.named(),
            equal: twice == mixed,
        })
    } else {
        None
    };

    // with one point every distribution is the unit, and all laws hold
    let broken = if n >= 2 { Expect::Fails } else { Expect::Holds };
    let mut suite: Vec<(super::Law, Expect)> = barycentric_suite().into_iter().map(|l| (l, Expect::Holds)).collect();
    for id in ["union-assoc", "union-comm", "union-over-comb"] {
        suite.push((by_id(id).expect("catalog law"), Expect::Holds));
    }
    for id in ["union-idem", "comb-over-union"] {
        suite.push((by_id(id).expect("catalog law"), broken));
    }
    let laws = run_suite(&model, &suite, samples, seed)?;

    let ms = MultisetModel { ground: ground.clone() };
    let mut rng = sample::rng(seed ^ 0x6d75_6c74);
    let mut pool: Vec<Multiset> = (0..n).map(|i| Multiset::unit(&ground, i)).collect();
    let diracs = pool.len();
    while pool.len() < samples.max(diracs) {
        pool.push(ms.sample(&mut rng));
    }
    let mut all_differ = true;
    for p in &pool {
        if p.union(p)? == *p {
            all_differ = false;
        }
    }
    let first = &pool[0];
    let example = BTreeMap::from([
        ("p".to_string(), first.to_string()),
        ("pp".to_string(), first.union(first)?.to_string()),
    ]);

    let passed = laws.passed && all_differ && idempotence.as_ref().is_none_or(|w| !w.equal);
    Ok(WitnessReport {
        ground: ground.to_vec(),
        passed,
        idempotence,
        laws,
        multiset: MultisetCheck {
            samples: pool.len(),
            diracs,
            all_differ,
            example,
        },
    })
}
