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

//! Dense reference simulator.
//!
//! Holds the complete state, function registers included, as one explicit
//! amplitude vector and applies each `Test_μ` through the actual coset-state
//! projectors `Σ_t |tK⟩⟨tK| ⊗ I`. Amplitudes are integers over a shared
//! denominator; the `N^{-s/2}` prefactor of the initial state is applied
//! squared at measurement time.

use std::collections::BTreeMap;

use num::{BigInt, Integer, Zero};

use crate::cascade::{counter_shift, OutcomeDistribution};
use crate::error::CascadeError;
use crate::group::FiniteGroup;
use crate::oracle::HiddenOracle;
use crate::rational::Q;
use crate::subgroup::SubgroupCatalog;

/// Default amplitude cap, `2^20`.
pub const DEFAULT_DENSE_CAP: u128 = 1 << 20;

/// Number of amplitudes the dense state needs: `(r+1)^2 (N·R)^s`.
pub fn dense_size(group_order: usize, range: usize, r: usize, s: u32) -> u128 {
    let couplet = (group_order * range) as u128;
    let slots = ((r + 1) * (r + 1)) as u128;
    couplet.checked_pow(s).and_then(|c| c.checked_mul(slots)).unwrap_or(u128::MAX)
}

/// `|K| Σ_t |tK⟩⟨tK| ⊗ I_R` as adjacency lists over couplet indices
/// `g·R + v`; every listed entry is 1.
fn couplet_projector(
    group: &FiniteGroup,
    catalog: &SubgroupCatalog,
    i: usize,
    range: usize,
) -> Vec<Vec<usize>> {
    let k = catalog.get(i);
    let dim = group.order() * range;
    let mut rows = vec![Vec::new(); dim];
    for &t in catalog.transversal(i) {
        let coset: Vec<usize> = k.members().iter().map(|&x| group.mul(t, x)).collect();
        for &a in &coset {
            for &b in &coset {
                for v in 0..range {
                    rows[a * range + v].push(b * range + v);
                }
            }
        }
    }
    rows
}

struct DenseState {
    dim: usize,
    s: u32,
    denominator: i128,
    slots: BTreeMap<(usize, usize), Vec<i128>>,
}

impl DenseState {
    /// `Π` along every couplet mode of a slot vector, with integer rows.
    fn project(&self, rows: &[Vec<usize>], v: &[i128]) -> Result<Vec<i128>, CascadeError> {
        let mut cur = v.to_vec();
        let mut stride = 1usize;
        for _ in 0..self.s {
            let mut next = vec![0i128; cur.len()];
            let block = stride * self.dim;
            for base in (0..cur.len()).step_by(block) {
                for low in 0..stride {
                    for (i, row) in rows.iter().enumerate() {
                        let mut acc: i128 = 0;
                        for &j in row {
                            let x = cur[base + j * stride + low];
                            if x != 0 {
                                acc = acc.checked_add(x).ok_or(CascadeError::DenseOverflow)?;
                            }
                        }
                        next[base + i * stride + low] = acc;
                    }
                }
            }
            cur = next;
            stride = block;
        }
        Ok(cur)
    }

    fn normalize(&mut self) {
        let mut g = self.denominator;
        for v in self.slots.values() {
            for &x in v {
                if x != 0 {
                    g = g.gcd(&x);
                    if g == 1 {
                        return;
                    }
                }
            }
        }
        if g > 1 {
            self.denominator /= g;
            for v in self.slots.values_mut() {
                for x in v.iter_mut() {
                    *x /= g;
                }
            }
        }
    }
}

/// Outcome distribution of the full cascade, computed on the dense state.
///
/// `candidates` supplies both the ordering and the transversals used to
/// build each projector.
pub fn dense_reference_distribution(
    group: &FiniteGroup,
    oracle: &HiddenOracle,
    s: u32,
    candidates: &SubgroupCatalog,
    cap: u128,
) -> Result<OutcomeDistribution, CascadeError> {
    if s == 0 {
        return Err(CascadeError::ZeroCouplets);
    }
    if let Some(i) = candidates.ordering_violation() {
        return Err(CascadeError::BadOrdering(i + 1));
    }
    let n = group.order();
    let range = oracle.range_size();
    let r = candidates.len();
    let needed = dense_size(n, range, r, s);
    if needed > cap {
        return Err(CascadeError::CapExceeded { needed, cap });
    }
    let dim = n * range;
    let total = dim.pow(s);
    let labels = oracle.labels();

    // (Σ_g |g⟩|f(g)⟩)^{⊗s}, unnormalized.
    let mut init = vec![0i128; total];
    let mut digits = vec![0usize; s as usize];
    loop {
        let mut idx = 0usize;
        for &g in digits.iter().rev() {
            idx = idx * dim + g * range + labels[g];
        }
        init[idx] = 1;
        let mut m = 0;
        while m < digits.len() {
            digits[m] += 1;
            if digits[m] < n {
                break;
            }
            digits[m] = 0;
            m += 1;
        }
        if m == digits.len() {
            break;
        }
    }
    let mut state = DenseState { dim, s, denominator: 1, slots: BTreeMap::new() };
    state.slots.insert((0, 0), init);

    for mu in 1..=r {
        let rows = couplet_projector(group, candidates, mu - 1, range);
        let scale = (candidates.get(mu - 1).order() as i128)
            .checked_pow(s)
            .ok_or(CascadeError::DenseOverflow)?;
        // Test_μ = Q_μ ⊗ P + I ⊗ (I − P), over the new denominator d·|K|^s.
        let mut next: BTreeMap<(usize, usize), Vec<i128>> = BTreeMap::new();
        for (&(nu, ell), v) in &state.slots {
            let pv = state.project(&rows, v)?;
            let keep = next.entry((nu, ell)).or_insert_with(|| vec![0; total]);
            for (k, (&x, &p)) in v.iter().zip(&pv).enumerate() {
                let t = x
                    .checked_mul(scale)
                    .and_then(|y| y.checked_sub(p))
                    .and_then(|y| y.checked_add(keep[k]))
                    .ok_or(CascadeError::DenseOverflow)?;
                keep[k] = t;
            }
            let target = counter_shift(mu, r, nu, ell);
            let moved = next.entry(target).or_insert_with(|| vec![0; total]);
            for (k, &p) in pv.iter().enumerate() {
                moved[k] = moved[k].checked_add(p).ok_or(CascadeError::DenseOverflow)?;
            }
        }
        next.retain(|_, v| v.iter().any(|&x| x != 0));
        state.denominator =
            state.denominator.checked_mul(scale).ok_or(CascadeError::DenseOverflow)?;
        state.slots = next;
        state.normalize();
    }

    let mut weights = vec![BigInt::zero(); r + 1];
    for (&(nu, _), v) in &state.slots {
        for &x in v {
            if x != 0 {
                let b = BigInt::from(x);
                weights[nu] += &b * &b;
            }
        }
    }
    let d = BigInt::from(state.denominator);
    let norm = &d * &d * BigInt::from(n).pow(s);
    let probabilities = weights.into_iter().map(|w| Q::new(w, norm.clone())).collect();
    Ok(OutcomeDistribution::from_probabilities(probabilities))
}
