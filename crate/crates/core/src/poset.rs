//! Finite posets and their up-sets.
//!
//! On a finite poset the Scott-open sets are exactly the upward-closed
//! subsets, so every topological notion used downstream reduces to up-set
//! bookkeeping. Up-sets are bitmasks over the declaration order.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Default bound on the number of elements for which up-sets are enumerated.
pub const DEFAULT_CAP: usize = 16;

/// Bitmask width; no cap may exceed it.
pub const MAX_ELEMENTS: usize = 63;

/// An upward-closed subset, stored as a bitmask over element indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet(u64);

impl UpSet {
    pub const EMPTY: UpSet = UpSet(0);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: UpSet) -> UpSet {
        UpSet(self.0 | other.0)
    }

    pub fn intersection(self, other: UpSet) -> UpSet {
        UpSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: UpSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }
}

struct Inner {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    /// `up[i]` is the mask of all `j` with `i <= j`.
    up: Vec<u64>,
    cap: usize,
    upsets: OnceLock<Vec<UpSet>>,
    basis: OnceLock<Vec<UpSet>>,
}

/// A finite partially ordered set with named elements.
///
/// Cloning is cheap; clones share the cached up-set enumeration.
#[derive(Clone)]
pub struct FinitePoset(Arc<Inner>);

impl FinitePoset {
    /// Builds the poset whose order is the reflexive-transitive closure of
    /// `covers` (pairs `(lower, upper)`).
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)], cap: usize) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyPoset);
        }
        let cap = cap.min(MAX_ELEMENTS);
        if elements.len() > cap {
            return Err(Error::TooLarge {
                what: "poset",
                size: elements.len(),
                cap,
            });
        }
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let e = e.as_ref().to_string();
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement(e));
            }
            names.push(e);
        }
        let mut up: Vec<u64> = (0..names.len()).map(|i| 1u64 << i).collect();
        for (lo, hi) in covers {
            let lo_i = *index
                .get(lo.as_ref())
                .ok_or_else(|| Error::UnknownElementInCover(lo.as_ref().to_string()))?;
            let hi_i = *index
                .get(hi.as_ref())
                .ok_or_else(|| Error::UnknownElementInCover(hi.as_ref().to_string()))?;
            up[lo_i] |= 1 << hi_i;
        }
        // transitive closure by fixpoint iteration on the masks
        loop {
            let mut changed = false;
            for i in 0..up.len() {
                let mut acc = up[i];
                for j in UpSet(up[i]).iter() {
                    acc |= up[j];
                }
                if acc != up[i] {
                    up[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..up.len() {
            for j in UpSet(up[i]).iter() {
                if j != i && up[j] >> i & 1 == 1 {
                    return Err(Error::CycleDetected(names[i].clone()));
                }
            }
        }
        Ok(FinitePoset(Arc::new(Inner {
            elements: names,
            index,
            up,
            cap,
            upsets: OnceLock::new(),
            basis: OnceLock::new(),
        })))
    }

    pub fn discrete<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        Self::new(elements, &[], DEFAULT_CAP.max(elements.len()))
    }

    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        let covers: Vec<(&str, &str)> = elements
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        let names: Vec<&str> = elements.iter().map(|e| e.as_ref()).collect();
        Self::new(&names, &covers, DEFAULT_CAP.max(elements.len()))
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.0.cap
    }

    pub fn elements(&self) -> &[String] {
        &self.0.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.0.up[i] >> j & 1 == 1
    }

    /// `↑{i}` as an up-set.
    pub fn principal(&self, i: usize) -> UpSet {
        UpSet(self.0.up[i])
    }

    /// The immediate covers `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let between = (0..n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn full(&self) -> UpSet {
        UpSet((1u64 << self.len()) - 1)
    }

    pub fn is_upset(&self, mask: u64) -> bool {
        UpSet(mask).iter().all(|i| self.0.up[i] & !mask == 0)
    }

    /// Wraps a mask after checking it is upward closed.
    pub fn upset(&self, mask: u64) -> Option<UpSet> {
        (mask >> self.len() == 0 && self.is_upset(mask)).then_some(UpSet(mask))
    }

    /// Smallest up-set containing the given indices.
    pub fn up_closure(&self, members: &[usize]) -> Result<UpSet> {
        let mut acc = 0u64;
        for &i in members {
            if i >= self.len() {
                return Err(Error::UnknownElement(i.to_string()));
            }
            acc |= self.0.up[i];
        }
        Ok(UpSet(acc))
    }

    pub fn up_closure_of_names<S: AsRef<str>>(&self, names: &[S]) -> Result<UpSet> {
        let idx = names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.up_closure(&idx)
    }

    fn check_cap(&self) -> Result<()> {
        if self.len() > self.0.cap {
            return Err(Error::TooLarge {
                what: "up-set enumeration",
                size: self.len(),
                cap: self.0.cap,
            });
        }
        Ok(())
    }

    /// All up-sets, ascending by bitmask (so `∅` first, the full set last).
    pub fn upsets(&self) -> Result<&[UpSet]> {
        self.check_cap()?;
        Ok(self.0.upsets.get_or_init(|| self.enumerate_upsets()))
    }

    /// The nonempty up-sets whose comparability graph is connected.
    ///
    /// Every up-set is the disjoint union of such up-sets (its connected
    /// components), so a family of inequalities between modular functions
    /// holds on all up-sets iff it holds on this basis.
    pub fn upset_basis(&self) -> Result<&[UpSet]> {
        let all = self.upsets()?;
        Ok(self.0.basis.get_or_init(|| {
            all.iter()
                .copied()
                .filter(|u| !u.is_empty() && self.is_connected(*u))
                .collect()
        }))
    }

    fn is_connected(&self, u: UpSet) -> bool {
        let mask = u.bits();
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut frontier = vec![start];
        while let Some(i) = frontier.pop() {
            for j in u.iter() {
                if seen >> j & 1 == 0 && (self.leq(i, j) || self.leq(j, i)) {
                    seen |= 1 << j;
                    frontier.push(j);
                }
            }
        }
        seen == mask
    }

    fn enumerate_upsets(&self) -> Vec<UpSet> {
        // Decide elements top-down so that everything above an element has
        // been decided before it.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.0.up[i].count_ones(), i));
        let mut out = Vec::new();
        self.extend(&order, 0, 0, &mut out);
        out.sort();
        out
    }

    fn extend(&self, order: &[usize], pos: usize, acc: u64, out: &mut Vec<UpSet>) {
        if pos == order.len() {
            out.push(UpSet(acc));
            return;
        }
        let x = order[pos];
        self.extend(order, pos + 1, acc, out);
        let with = acc | 1 << x;
        if self.0.up[x] & !with == 0 {
            self.extend(order, pos + 1, with, out);
        }
    }

    /// Structural identity: same names in the same order and the same order
    /// relation.
    pub fn same(&self, other: &FinitePoset) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.elements == other.0.elements && self.0.up == other.0.up)
    }

    pub fn ensure_same(&self, other: &FinitePoset) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    pub fn fmt_set(&self, u: UpSet) -> String {
        let names: Vec<&str> = u.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for FinitePoset {}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(i, j)| format!("{}<{}", self.name(i), self.name(j)))
            .collect();
        f.debug_struct("FinitePoset")
            .field("elements", &self.0.elements)
            .field("covers", &covers)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subsets_filtered(p: &FinitePoset) -> Vec<UpSet> {
        (0u64..1 << p.len())
            .filter(|&m| p.is_upset(m))
            .map(UpSet)
            .collect()
    }

    #[test]
    fn chain_and_antichain_of_two() {
        let chain = FinitePoset::new(&["a", "b"], &[("a", "b")], 16).unwrap();
        assert!(chain.leq(0, 1));
        assert!(!chain.leq(1, 0));
        let anti = FinitePoset::new::<&str>(&["a", "b"], &[], 16).unwrap();
        assert!(!anti.leq(0, 1) && !anti.leq(1, 0));
        assert!(anti.leq(0, 0));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            FinitePoset::new(&["a", "b"], &[("a", "b"), ("b", "a")], 16).unwrap_err(),
            Error::CycleDetected("a".into())
        );
        assert_eq!(
            FinitePoset::new::<&str>(&["a", "a"], &[], 16).unwrap_err(),
            Error::DuplicateElement("a".into())
        );
        assert_eq!(
            FinitePoset::new(&["a"], &[("a", "z")], 16).unwrap_err(),
            Error::UnknownElementInCover("z".into())
        );
        let many: Vec<String> = (0..5).map(|i| format!("e{i}")).collect();
        assert!(matches!(
            FinitePoset::new::<String>(&many, &[], 4),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn upsets_of_small_posets() {
        let chain = FinitePoset::chain(&["a", "b"]).unwrap();
        // enumerated by brute-force filtering of all 4 subsets
        assert_eq!(chain.upsets().unwrap(), &[UpSet(0), UpSet(0b10), UpSet(0b11)]);
        let anti = FinitePoset::discrete(&["a", "b"]).unwrap();
        assert_eq!(anti.upsets().unwrap().len(), 4);
        let one = FinitePoset::discrete(&["x"]).unwrap();
        assert_eq!(one.upsets().unwrap(), &[UpSet(0), UpSet(1)]);
    }

    #[test]
    fn upset_counts_for_chains_and_antichains() {
        for n in 1..=8 {
            let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            assert_eq!(FinitePoset::chain(&names).unwrap().upsets().unwrap().len(), n + 1);
            assert_eq!(
                FinitePoset::discrete(&names).unwrap().upsets().unwrap().len(),
                1 << n
            );
        }
    }

    #[test]
    fn enumeration_matches_subset_filter_on_mixed_posets() {
        let diamond =
            FinitePoset::new(&["b", "l", "r", "t"], &[("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")], 16)
                .unwrap();
        let vee = FinitePoset::new(&["x", "y", "z"], &[("x", "z"), ("y", "z")], 16).unwrap();
        let n = FinitePoset::new(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("b", "c"), ("b", "d")],
            16,
        )
        .unwrap();
        for p in [diamond, vee, n] {
            assert_eq!(p.upsets().unwrap(), subsets_filtered(&p).as_slice());
        }
    }

    #[test]
    fn up_closure_examples() {
        let chain = FinitePoset::chain(&["a", "b"]).unwrap();
        assert_eq!(chain.up_closure_of_names(&["a"]).unwrap(), UpSet(0b11));
        assert_eq!(chain.up_closure(&[]).unwrap(), UpSet::EMPTY);
        let c3 = FinitePoset::chain(&["a", "b", "c"]).unwrap();
        assert_eq!(c3.up_closure_of_names(&["b"]).unwrap(), UpSet(0b110));
        assert!(c3.up_closure_of_names(&["q"]).is_err());
    }

    #[test]
    fn basis_of_discrete_poset_is_singletons() {
        let p = FinitePoset::discrete(&["a", "b", "c"]).unwrap();
        assert_eq!(p.upset_basis().unwrap(), &[UpSet(1), UpSet(2), UpSet(4)]);
        let c = FinitePoset::chain(&["a", "b", "c"]).unwrap();
        assert_eq!(c.upset_basis().unwrap().len(), 3);
    }

    #[test]
    fn cap_is_enforced_on_enumeration() {
        let names: Vec<String> = (0..6).map(|i| format!("e{i}")).collect();
        let p = FinitePoset::new::<String>(&names, &[], 6).unwrap();
        assert!(p.upsets().is_ok());
        assert!(FinitePoset::new::<String>(&names, &[], 5).is_err());
    }
}
