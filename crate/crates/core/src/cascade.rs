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

//! Exact simulation of the Test cascade on tensor-power branches.
//!
//! The global state is kept as a rational combination of branches
//! `c |ν⟩|ℓ⟩ ⊗ φ^{⊗s}`, where `φ` is a vector over the group basis. All
//! couplets start as the (unnormalized) indicator of `H`; the common factor
//! `|H|^{-s/2}` is only ever applied squared, when probabilities are read
//! out. Function registers are not represented: no Test acts on them and
//! the single-couplet projectors commute with left translation, so the
//! outcome statistics equal those of the full state (checked against
//! [`crate::dense`]).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::CascadeError;
use crate::group::FiniteGroup;
use crate::oracle::{HiddenOracle, PHASE_PREPARE};
use crate::rational::{pow, qi, to_text, Q};
use crate::subgroup::{Subgroup, SubgroupCatalog};

/// `Π_K φ`: replaces each entry by the mean of `φ` over its left coset `tK`.
pub fn projector_apply(
    group: &FiniteGroup,
    k: &Subgroup,
    transversal: &[usize],
    phi: &[Q],
) -> Result<Vec<Q>, CascadeError> {
    if phi.len() != group.order() {
        return Err(CascadeError::LengthMismatch { got: phi.len(), expected: group.order() });
    }
    let mut out = vec![Q::zero(); phi.len()];
    let size = qi(k.order() as i64);
    for &t in transversal {
        let coset: Vec<usize> = k.members().iter().map(|&x| group.mul(t, x)).collect();
        let sum = coset.iter().fold(Q::zero(), |acc, &g| acc + &phi[g]);
        if sum.is_zero() {
            continue;
        }
        let mean = sum / &size;
        for &g in &coset {
            out[g] = mean.clone();
        }
    }
    Ok(out)
}

/// The counter operator `Q_μ` on `(ν, ℓ) ∈ {0..r}²`.
///
/// `(0,0) ↦ (μ,1)` and `(ν,ℓ) ↦ (ν,ℓ+1)` for `0 < ℓ < r`. The remaining
/// basis states, which are never populated, are matched in sorted order to
/// the unused outputs so the map is a permutation.
pub fn counter_shift(mu: usize, r: usize, nu: usize, ell: usize) -> (usize, usize) {
    if (nu, ell) == (0, 0) {
        return (mu, 1);
    }
    if ell > 0 && ell < r {
        return (nu, ell + 1);
    }
    let rest_in: Vec<(usize, usize)> = (0..=r)
        .flat_map(|v| (0..=r).map(move |l| (v, l)))
        .filter(|&(v, l)| (l == 0 && v > 0) || l == r)
        .collect();
    let rest_out: Vec<(usize, usize)> = (0..=r)
        .flat_map(|v| (0..=r).map(move |l| (v, l)))
        .filter(|&(v, l)| l == 0 || (l == 1 && v != mu))
        .collect();
    let i = rest_in.iter().position(|&p| p == (nu, ell)).expect("basis state in range");
    rest_out[i]
}

/// One term `coefficient · |outcome⟩|counter⟩ ⊗ couplet^{⊗s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub outcome: usize,
    pub counter: usize,
    pub coefficient: Q,
    pub couplet: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    outcome: usize,
    counter: usize,
    vector: usize,
}

/// Global state as a list of merged, canonically scaled power branches.
#[derive(Debug, Clone)]
pub struct BranchState {
    group: Arc<FiniteGroup>,
    candidates: Arc<SubgroupCatalog>,
    couplets: u32,
    hidden_order: usize,
    tests_applied: usize,
    vectors: Vec<Vec<Q>>,
    index: HashMap<Vec<Q>, usize>,
    branches: BTreeMap<Key, Q>,
}

/// Splits `φ = λ ψ` with the first nonzero entry of `ψ` equal to 1.
fn canonical(phi: Vec<Q>) -> Option<(Q, Vec<Q>)> {
    let lead = phi.iter().find(|x| !x.is_zero())?.clone();
    if lead.is_one() {
        return Some((lead, phi));
    }
    let scaled = phi.into_iter().map(|x| x / &lead).collect();
    Some((lead, scaled))
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x * y
        }
    })
}

impl BranchState {
    /// Initial state: one branch `(0, 0, 1, 1_H)`. Charges `s` queries as
    /// the `prepare` phase.
    pub fn prepare_initial(
        oracle: &mut HiddenOracle,
        candidates: Arc<SubgroupCatalog>,
        s: u32,
    ) -> Result<Self, CascadeError> {
        let state = Self::initial(oracle.group_arc(), candidates, oracle.hidden(), s)?;
        oracle.charge(PHASE_PREPARE, s as u64);
        Ok(state)
    }

    /// The initial state for a known hidden subgroup, without touching any
    /// oracle. Used for the classical precomputation of conditional
    /// probabilities.
    pub fn initial(
        group: Arc<FiniteGroup>,
        candidates: Arc<SubgroupCatalog>,
        hidden: &Subgroup,
        s: u32,
    ) -> Result<Self, CascadeError> {
        if s == 0 {
            return Err(CascadeError::ZeroCouplets);
        }
        let hidden = Subgroup::new(&group, hidden.members())?;
        let mut phi = vec![Q::zero(); group.order()];
        for &h in hidden.members() {
            phi[h] = Q::one();
        }
        let mut state = BranchState {
            group,
            candidates,
            couplets: s,
            hidden_order: hidden.order(),
            tests_applied: 0,
            vectors: Vec::new(),
            index: HashMap::new(),
            branches: BTreeMap::new(),
        };
        state.add(0, 0, Q::one(), phi);
        Ok(state)
    }

    fn intern(&mut self, v: Vec<Q>) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.vectors.len();
        self.vectors.push(v.clone());
        self.index.insert(v, i);
        i
    }

    fn add(&mut self, outcome: usize, counter: usize, coefficient: Q, phi: Vec<Q>) {
        let Some((scale, phi)) = canonical(phi) else { return };
        let coefficient = coefficient * pow(&scale, self.couplets);
        let vector = self.intern(phi);
        self.add_key(Key { outcome, counter, vector }, coefficient);
    }

    fn add_key(&mut self, key: Key, coefficient: Q) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.branches.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn couplets(&self) -> u32 {
        self.couplets
    }

    pub fn hidden_order(&self) -> usize {
        self.hidden_order
    }

    pub fn candidates(&self) -> &SubgroupCatalog {
        &self.candidates
    }

    pub fn tests_applied(&self) -> usize {
        self.tests_applied
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branches(&self) -> Vec<Branch> {
        self.branches
            .iter()
            .map(|(k, c)| Branch {
                outcome: k.outcome,
                counter: k.counter,
                coefficient: c.clone(),
                couplet: self.vectors[k.vector].clone(),
            })
            .collect()
    }

    /// `Test_μ` for the one-based candidate index `mu`.
    pub fn apply_test(&self, mu: usize) -> Result<BranchState, CascadeError> {
        let r = self.candidates.len();
        if mu == 0 || mu > r {
            return Err(CascadeError::IndexOutOfRange { index: mu, count: r });
        }
        let k = self.candidates.get(mu - 1);
        let t = self.candidates.transversal(mu - 1);
        let mut next = BranchState {
            branches: BTreeMap::new(),
            tests_applied: self.tests_applied + 1,
            ..self.clone()
        };
        let mut projected: HashMap<usize, Option<(Q, usize)>> = HashMap::new();
        for (key, c) in &self.branches {
            let image = match projected.get(&key.vector) {
                Some(p) => p.clone(),
                None => {
                    let p = projector_apply(&self.group, k, t, &self.vectors[key.vector])?;
                    let p = canonical(p).map(|(scale, v)| (pow(&scale, self.couplets), next.intern(v)));
                    projected.insert(key.vector, p.clone());
                    p
                }
            };
            next.add_key(key.clone(), c.clone());
            if let Some((scale, v)) = image {
                let (outcome, counter) = counter_shift(mu, r, key.outcome, key.counter);
                let moved = c * &scale;
                next.add_key(Key { outcome, counter, vector: v }, moved.clone());
                next.add_key(Key { vector: v, ..key.clone() }, -moved);
            }
        }
        Ok(next)
    }

    /// Applies `Test_1 .. Test_r` in catalog order.
    pub fn run_cascade(&self) -> Result<BranchState, CascadeError> {
        if let Some(i) = self.candidates.ordering_violation() {
            return Err(CascadeError::BadOrdering(i + 1));
        }
        let mut state = self.apply_test(1)?;
        for mu in 2..=self.candidates.len() {
            state = state.apply_test(mu)?;
        }
        Ok(state)
    }

    /// `Σ c_b c_b' ⟨φ_b, φ_b'⟩^s` over branch pairs sharing `(ν, ℓ)`, summed
    /// per outcome `ν`, before the `|H|^{-s}` normalization.
    fn outcome_weights(&self) -> Vec<Q> {
        let r = self.candidates.len();
        let mut groups: BTreeMap<(usize, usize), Vec<(usize, &Q)>> = BTreeMap::new();
        for (k, c) in &self.branches {
            groups.entry((k.outcome, k.counter)).or_default().push((k.vector, c));
        }
        let mut gram: HashMap<(usize, usize), Q> = HashMap::new();
        let mut powers: HashMap<Q, Q> = HashMap::new();
        let mut weights = vec![Q::zero(); r + 1];
        let two = qi(2);
        for ((nu, _), members) in groups {
            let mut acc = Q::zero();
            for (i, &(a, ca)) in members.iter().enumerate() {
                for &(b, cb) in &members[i..] {
                    let key = if a <= b { (a, b) } else { (b, a) };
                    let g = gram.entry(key).or_insert_with(|| {
                        let d = dot(&self.vectors[a], &self.vectors[b]);
                        if d.is_zero() {
                            return d;
                        }
                        powers.entry(d).or_insert_with_key(|d| pow(d, self.couplets)).clone()
                    });
                    if g.is_zero() {
                        continue;
                    }
                    let term = ca * cb * &*g;
                    if a == b {
                        acc += term;
                    } else {
                        acc += term * &two;
                    }
                }
            }
            weights[nu] += acc;
        }
        weights
    }

    fn normalization(&self) -> Q {
        Q::one() / pow(&qi(self.hidden_order as i64), self.couplets)
    }

    /// Exact squared norm; 1 for every reachable state.
    pub fn norm_squared(&self) -> Q {
        let total = self.outcome_weights().into_iter().fold(Q::zero(), |a, b| a + b);
        total * self.normalization()
    }

    /// `‖self − other‖²`, both states normalized by their own `|H|`.
    pub fn distance_squared(&self, other: &BranchState) -> Q {
        assert_eq!(self.couplets, other.couplets, "couplet counts differ");
        assert_eq!(self.hidden_order, other.hidden_order, "hidden subgroup orders differ");
        let mut diff = self.clone();
        for (k, c) in &other.branches {
            let v = diff.intern(other.vectors[k.vector].clone());
            diff.add_key(Key { vector: v, ..k.clone() }, -c.clone());
        }
        diff.norm_squared()
    }

    /// Probability of each first-register value `ν ∈ 0..=r`.
    pub fn first_register_distribution(&self) -> OutcomeDistribution {
        let norm = self.normalization();
        let probabilities = self.outcome_weights().into_iter().map(|w| w * &norm).collect();
        OutcomeDistribution { probabilities }
    }

    /// Branch dump for `--debug-branches`.
    pub fn debug_json(&self) -> Value {
        let branches: Vec<Value> = self
            .branches()
            .iter()
            .map(|b| {
                json!({
                    "nu": b.outcome,
                    "ell": b.counter,
                    "coefficient": to_text(&b.coefficient),
                    "couplet": b.couplet.iter().map(to_text).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "s": self.couplets,
            "hidden_order": self.hidden_order,
            "tests_applied": self.tests_applied,
            "branches": branches,
        })
    }
}

/// Measurement statistics of the first register, indexed by `ν ∈ 0..=r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    probabilities: Vec<Q>,
}

impl OutcomeDistribution {
    pub fn from_probabilities(probabilities: Vec<Q>) -> Self {
        OutcomeDistribution { probabilities }
    }

    pub fn candidate_count(&self) -> usize {
        self.probabilities.len() - 1
    }

    pub fn probability(&self, nu: usize) -> Q {
        self.probabilities.get(nu).cloned().unwrap_or_else(Q::zero)
    }

    pub fn probabilities(&self) -> &[Q] {
        &self.probabilities
    }

    pub fn total(&self) -> Q {
        self.probabilities.iter().fold(Q::zero(), |a, b| a + b)
    }

    pub fn is_valid(&self) -> bool {
        self.total().is_one()
            && self.probabilities.iter().all(|p| !p.is_negative() && *p <= Q::one())
    }

    /// The outcome with probability 1, if there is one.
    pub fn point_mass(&self) -> Option<usize> {
        self.probabilities.iter().position(|p| p.is_one())
    }

    /// Deterministic draw for a given seed.
    pub fn sample(&self, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng)
    }

    pub fn sample_with<R: Rng>(&self, rng: &mut R) -> usize {
        if let Some(nu) = self.point_mass() {
            return nu;
        }
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        let mut last = 0;
        for (nu, p) in self.probabilities.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            cum += crate::rational::to_f64(p);
            last = nu;
            if u < cum {
                return nu;
            }
        }
        last
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(nu, p)| (nu.to_string(), Value::String(to_text(p))))
            .collect();
        Value::Object(map)
    }
}
