// Copyright 2026 The hspsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Subgroups, the size-ordered subgroup catalog and left transversals.

use std::collections::BTreeSet;

use crate::error::GroupError;
use crate::group::{FiniteGroup, MAX_ORDER};
use crate::rational::{q, Q};

/// Element set packed into a bitmask; valid because orders are capped at 64.
pub(crate) type Mask = u64;

fn mask_of(members: impl IntoIterator<Item = usize>) -> Mask {
    members.into_iter().fold(0, |m, g| m | (1u64 << g))
}

fn members_of(mask: Mask) -> Vec<usize> {
    (0..64).filter(|&g| mask & (1u64 << g) != 0).collect()
}

/// Closure of a generating set under the group product.
pub(crate) fn close_mask(group: &FiniteGroup, gens: Mask) -> Mask {
    let gens = members_of(gens);
    let mut mask: Mask = 1;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = group.mul(x, g);
            if mask & (1u64 << y) == 0 {
                mask |= 1u64 << y;
                frontier.push(y);
            }
        }
    }
    mask
}

pub fn closure(group: &FiniteGroup, gens: &[usize]) -> Subgroup {
    Subgroup::from_mask(group, close_mask(group, mask_of(gens.iter().copied())))
}

/// A subgroup, stored as its sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
    group_order: usize,
}

impl Subgroup {
    fn from_mask(group: &FiniteGroup, mask: Mask) -> Self {
        Subgroup { members: members_of(mask), group_order: group.order() }
    }

    /// Validates that `members` is a subgroup of `group`.
    pub fn new(group: &FiniteGroup, members: &[usize]) -> Result<Self, GroupError> {
        for &g in members {
            group.check_element(g)?;
        }
        let set = mask_of(members.iter().copied());
        if set & 1 == 0 {
            return Err(GroupError::NotSubgroup("identity missing".into()));
        }
        for a in members_of(set) {
            if set & (1u64 << group.inv(a)) == 0 {
                return Err(GroupError::NotSubgroup(format!("inverse of {a} missing")));
            }
            for b in members_of(set) {
                let ab = group.mul(a, b);
                if set & (1u64 << ab) == 0 {
                    return Err(GroupError::NotSubgroup(format!("{a}*{b} = {ab} missing")));
                }
            }
        }
        Ok(Subgroup::from_mask(group, set))
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Subgroup { members: vec![0], group_order: group.order() }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup { members: (0..group.order()).collect(), group_order: group.order() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn index(&self) -> usize {
        self.group_order / self.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub(crate) fn mask(&self) -> Mask {
        mask_of(self.members.iter().copied())
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask() & !other.mask() == 0
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        (self.mask() & other.mask()).count_ones() as usize
    }

    pub fn is_cyclic(&self, group: &FiniteGroup) -> bool {
        self.members.iter().any(|&g| group.element_order(g) == self.order())
    }

    /// The left coset `g K`, sorted.
    pub fn left_coset(&self, group: &FiniteGroup, g: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.members.iter().map(|&k| group.mul(g, k)).collect();
        c.sort_unstable();
        c
    }
}

/// Minimal-id representative of each left coset, in increasing order.
pub fn left_transversal(group: &FiniteGroup, k: &Subgroup) -> Result<Vec<usize>, GroupError> {
    let k = Subgroup::new(group, k.members())?;
    let mut covered: Mask = 0;
    let mut reps = Vec::with_capacity(k.index());
    for g in 0..group.order() {
        if covered & (1u64 << g) == 0 {
            reps.push(g);
            covered |= mask_of(k.left_coset(group, g));
        }
    }
    Ok(reps)
}

/// Whether `(t, k) -> t k` is a bijection from `transversal x K` onto `G`.
pub fn is_transversal(group: &FiniteGroup, k: &Subgroup, transversal: &[usize]) -> bool {
    if transversal.len() * k.order() != group.order() {
        return false;
    }
    let mut seen: Mask = 0;
    for &t in transversal {
        if t >= group.order() {
            return false;
        }
        for &x in k.members() {
            let g = group.mul(t, x);
            if seen & (1u64 << g) != 0 {
                return false;
            }
            seen |= 1u64 << g;
        }
    }
    true
}

/// `|K ∩ H| / |K|`.
pub fn coset_overlap(k: &Subgroup, h: &Subgroup) -> Result<Q, GroupError> {
    if k.group_order != h.group_order {
        return Err(GroupError::MismatchedParents(k.group_order, h.group_order));
    }
    Ok(q(k.intersection_order(h) as i64, k.order() as i64))
}

/// Greedy generating set: walk `K` in id order, keep each element not yet
/// in the closure of those kept. Each kept element at least doubles the
/// closure, so the result has at most `log2 |K|` elements.
pub fn generating_set(group: &FiniteGroup, k: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: Mask = 1;
    for &g in k.members() {
        if span & (1u64 << g) == 0 {
            gens.push(g);
            span = close_mask(group, mask_of(gens.iter().copied()));
        }
    }
    gens
}

/// Size-descending list of subgroups `K_1..K_r` with one left transversal each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupCatalog {
    subgroups: Vec<Subgroup>,
    transversals: Vec<Vec<usize>>,
}

fn catalog_order(a: &Subgroup, b: &Subgroup) -> std::cmp::Ordering {
    b.order().cmp(&a.order()).then_with(|| a.members.cmp(&b.members))
}

impl SubgroupCatalog {
    /// Every subgroup of `group`, ordered by size (descending) then by
    /// member list.
    pub fn enumerate(group: &FiniteGroup) -> Result<Self, GroupError> {
        Self::enumerate_capped(group, MAX_ORDER)
    }

    pub fn enumerate_capped(group: &FiniteGroup, cap: usize) -> Result<Self, GroupError> {
        let n = group.order();
        if n > cap.min(MAX_ORDER) {
            return Err(GroupError::TooLarge { order: n, cap: cap.min(MAX_ORDER) });
        }
        let mut found: BTreeSet<Mask> = BTreeSet::new();
        for a in 0..n {
            for b in a..n {
                found.insert(close_mask(group, (1u64 << a) | (1u64 << b)));
            }
        }
        // Saturate under joins until nothing new appears.
        let mut fresh: Vec<Mask> = found.iter().copied().collect();
        while !fresh.is_empty() {
            let current: Vec<Mask> = found.iter().copied().collect();
            let mut next = Vec::new();
            for &x in &fresh {
                for &y in &current {
                    if x & y == x || x & y == y {
                        continue;
                    }
                    let j = close_mask(group, x | y);
                    if found.insert(j) {
                        next.push(j);
                    }
                }
            }
            fresh = next;
        }
        let subgroups = found.into_iter().map(|m| Subgroup::from_mask(group, m)).collect();
        Self::from_subgroups(group, subgroups)
    }

    /// Catalog restricted to the cyclic subgroups.
    pub fn cyclic(group: &FiniteGroup) -> Result<Self, GroupError> {
        let full = Self::enumerate(group)?;
        let list = full.subgroups.into_iter().filter(|k| k.is_cyclic(group)).collect();
        Self::from_subgroups(group, list)
    }

    /// Sorts an arbitrary list of distinct subgroups into catalog order and
    /// attaches minimal-id transversals.
    pub fn from_subgroups(group: &FiniteGroup, mut list: Vec<Subgroup>) -> Result<Self, GroupError> {
        list.sort_by(catalog_order);
        list.dedup();
        let transversals = list
            .iter()
            .map(|k| left_transversal(group, k))
            .collect::<Result<_, _>>()?;
        Ok(SubgroupCatalog { subgroups: list, transversals })
    }

    /// Replaces the transversals, validating each one.
    pub fn with_transversals(
        mut self,
        group: &FiniteGroup,
        transversals: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        if transversals.len() != self.subgroups.len() {
            return Err(GroupError::MalformedTable("one transversal per subgroup required".into()));
        }
        for (k, t) in self.subgroups.iter().zip(&transversals) {
            if !is_transversal(group, k, t) {
                return Err(GroupError::NotSubgroup(format!(
                    "{t:?} is not a left transversal of {:?}",
                    k.members()
                )));
            }
        }
        self.transversals = transversals;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Zero-based position of `k`, if catalogued.
    pub fn position(&self, k: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|x| x == k)
    }

    pub fn get(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn transversal(&self, i: usize) -> &[usize] {
        &self.transversals[i]
    }

    pub fn transversals(&self) -> &[Vec<usize>] {
        &self.transversals
    }

    /// First index where `|K_i| < |K_{i+1}|`, if any.
    pub fn ordering_violation(&self) -> Option<usize> {
        self.subgroups.windows(2).position(|w| w[0].order() < w[1].order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog(spec: &str) -> (FiniteGroup, SubgroupCatalog) {
        let g = FiniteGroup::build(spec).unwrap();
        let c = SubgroupCatalog::enumerate(&g).unwrap();
        (g, c)
    }

    #[test]
    fn z2_and_z6_subgroups() {
        let (_, c) = catalog("Z:2");
        assert_eq!(c.len(), 2);
        let (_, c) = catalog("Z:6");
        let lists: Vec<Vec<usize>> = c.subgroups().iter().map(|k| k.members().to_vec()).collect();
        assert_eq!(lists, vec![vec![0, 1, 2, 3, 4, 5], vec![0, 2, 4], vec![0, 3], vec![0]]);
    }

    #[test]
    fn catalog_sizes() {
        for (spec, r) in [("S:3", 6), ("D:4", 10), ("Q8", 6), ("Z2^2", 5), ("Z2^3", 16), ("Z:8", 4), ("S:4", 30)] {
            assert_eq!(catalog(spec).1.len(), r, "{spec}");
        }
    }

    #[test]
    fn catalog_endpoints_and_order() {
        for spec in ["Z:1", "S:3", "D:4", "Q8", "Z2^3"] {
            let (g, c) = catalog(spec);
            assert_eq!(c.get(0), &Subgroup::whole(&g));
            assert_eq!(c.get(c.len() - 1), &Subgroup::trivial(&g));
            assert!(c.ordering_violation().is_none());
            for (i, k) in c.subgroups().iter().enumerate() {
                assert!(is_transversal(&g, k, c.transversal(i)));
                assert_eq!(g.order() % k.order(), 0);
            }
        }
    }

    #[test]
    fn transversal_examples() {
        let g = FiniteGroup::build("Z:6").unwrap();
        let k = Subgroup::new(&g, &[0, 3]).unwrap();
        assert_eq!(left_transversal(&g, &k).unwrap(), vec![0, 1, 2]);
        assert_eq!(left_transversal(&g, &Subgroup::whole(&g)).unwrap(), vec![0]);
        assert_eq!(left_transversal(&g, &Subgroup::trivial(&g)).unwrap(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_non_subgroups() {
        let g = FiniteGroup::build("Z:6").unwrap();
        assert!(Subgroup::new(&g, &[0, 1]).is_err());
        assert!(Subgroup::new(&g, &[2, 4]).is_err());
        assert!(Subgroup::new(&g, &[0, 9]).is_err());
        let bogus = Subgroup { members: vec![0, 1], group_order: 6 };
        assert!(left_transversal(&g, &bogus).is_err());
    }

    #[test]
    fn overlap_examples() {
        let g = FiniteGroup::build("Z:2").unwrap();
        let whole = Subgroup::whole(&g);
        let triv = Subgroup::trivial(&g);
        assert_eq!(coset_overlap(&whole, &whole).unwrap(), q(1, 1));
        assert_eq!(coset_overlap(&whole, &triv).unwrap(), q(1, 2));

        let s3 = FiniteGroup::build("S:3").unwrap();
        let c = SubgroupCatalog::enumerate(&s3).unwrap();
        let k3 = c.subgroups().iter().find(|k| k.order() == 3).unwrap();
        let h2 = c.subgroups().iter().find(|k| k.order() == 2).unwrap();
        assert_eq!(coset_overlap(k3, h2).unwrap(), q(1, 3));

        let z3 = FiniteGroup::build("Z:3").unwrap();
        assert_eq!(
            coset_overlap(&whole, &Subgroup::trivial(&z3)),
            Err(GroupError::MismatchedParents(2, 3))
        );
    }

    #[test]
    fn generating_set_examples() {
        let g = FiniteGroup::build("Z:6").unwrap();
        assert!(generating_set(&g, &Subgroup::trivial(&g)).is_empty());
        let gens = generating_set(&g, &Subgroup::whole(&g));
        assert_eq!(gens.len(), 1);
        assert_eq!(g.element_order(gens[0]), 6);
        let v = FiniteGroup::build("Z2^2").unwrap();
        assert_eq!(generating_set(&v, &Subgroup::whole(&v)).len(), 2);
    }

    #[test]
    fn cyclic_catalog() {
        let g = FiniteGroup::build("Z2^2").unwrap();
        let c = SubgroupCatalog::cyclic(&g).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.get(c.len() - 1).is_trivial());
    }

    #[test]
    fn cap_enforced() {
        let g = FiniteGroup::build("S:4").unwrap();
        assert!(matches!(
            SubgroupCatalog::enumerate_capped(&g, 12),
            Err(GroupError::TooLarge { order: 24, cap: 12 })
        ));
    }
}
