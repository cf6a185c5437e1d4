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

//! Invariant suite run by the `verify` mode.

use std::sync::Arc;

use num::{BigInt, One, Zero};
use serde_json::{json, Value};

use crate::cascade::BranchState;
use crate::dense::{dense_reference_distribution, dense_size};
use crate::engine::{
    amplify_once, binary_search_targets, choose_s_exact, decide_trivial, exact_test_probability,
    identify_subgroup, invert_exact, one_sided_trivial, plan_with_escalation, ceil_log2,
    EngineOptions,
};
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::linalg;
use crate::oracle::HiddenOracle;
use crate::rational::{pow, q, qi, Q};
use crate::subgroup::{closure, coset_overlap, generating_set, Subgroup, SubgroupCatalog};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, failures: Vec<String>, total: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{total} cases")
        } else {
            format!("{} of {total} failed; first: {}", failures.len(), failures[0])
        };
        Check { name: name.to_string(), passed, detail }
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "detail": self.detail })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub dense_cap: u128,
    pub dense_max_s: u32,
    pub s_cap: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { dense_cap: crate::dense::DEFAULT_DENSE_CAP, dense_max_s: 8, s_cap: crate::engine::DEFAULT_S_CAP }
    }
}

/// `1 − 4r / 2^{⌊s/2⌋}`, a rational lower bound implied by `1 − 4r/2^{s/2}`.
pub fn success_bound(r: usize, s: u32) -> Q {
    let denom = BigInt::one() << (s / 2);
    Q::one() - Q::new(BigInt::from(4 * r), denom)
}

/// Transversal taking the largest id in each coset.
pub fn max_transversals(group: &FiniteGroup, catalog: &SubgroupCatalog) -> Vec<Vec<usize>> {
    catalog
        .subgroups()
        .iter()
        .enumerate()
        .map(|(i, k)| {
            catalog
                .transversal(i)
                .iter()
                .map(|&t| *k.left_coset(group, t).last().unwrap())
                .collect()
        })
        .collect()
}

fn oracle_for(group: &Arc<FiniteGroup>, h: &Subgroup) -> Result<HiddenOracle> {
    Ok(HiddenOracle::new(group.clone(), h)?)
}

/// Runs every invariant check on one group.
pub fn verify_group(group: Arc<FiniteGroup>, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let catalog = Arc::new(SubgroupCatalog::enumerate(&group)?);
    let r = catalog.len();
    let subs = catalog.subgroups();
    let mut checks = Vec::new();

    checks.push(Check::new(
        "group_axioms",
        group.check_axioms().err().map(|e| e.to_string()).into_iter().collect(),
        1,
    ));

    let mut fails = Vec::new();
    if catalog.ordering_violation().is_some() {
        fails.push("size ordering".into());
    }
    if subs.first() != Some(&Subgroup::whole(&group)) || subs.last() != Some(&Subgroup::trivial(&group)) {
        fails.push("endpoints".into());
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            if catalog.position(&closure(&group, &[a, b])).is_none() {
                fails.push(format!("<{a},{b}> missing"));
            }
        }
    }
    for k in subs {
        if closure(&group, &generating_set(&group, k)) != *k {
            fails.push(format!("generating set of {:?}", k.members()));
        }
    }
    checks.push(Check::new("catalog", fails, r));

    // The cascade halts with certainty at H when fed H-cosets.
    let mut fails = Vec::new();
    for (i, k) in subs.iter().enumerate() {
        let st = BranchState::initial(group.clone(), catalog.clone(), k, 3)?.apply_test(i + 1)?;
        if st.first_register_distribution().point_mass() != Some(i + 1) || st.len() != 1 {
            fails.push(format!("K_{}", i + 1));
        }
    }
    checks.push(Check::new("exact_fire", fails, r));

    // Squared distance after a test, and per-couplet overlap.
    let mut fails = Vec::new();
    let mut total = 0;
    for (i, k) in subs.iter().enumerate() {
        for h in subs {
            if k.is_subgroup_of(h) {
                continue;
            }
            let overlap = coset_overlap(k, h)?;
            if overlap > q(1, 2) {
                fails.push(format!("overlap {:?} {:?}", k.members(), h.members()));
            }
            for s in [2u32, 4, 6] {
                total += 1;
                let init = BranchState::initial(group.clone(), catalog.clone(), h, s)?;
                let d2 = init.apply_test(i + 1)?.distance_squared(&init);
                let closed = qi(2) * pow(&overlap, s);
                let bound = Q::new(BigInt::from(4), BigInt::one() << s);
                if d2 != closed || d2 > bound {
                    fails.push(format!("K={:?} H={:?} s={s}", k.members(), h.members()));
                }
            }
        }
    }
    checks.push(Check::new("squared_distance", fails, total));

    // Linear drift bound on the prefix preceding H's own test, plus unitarity.
    let mut fails = Vec::new();
    let mut unitarity = Vec::new();
    let mut total = 0;
    for (pos, h) in subs.iter().enumerate() {
        for s in [2u32, 4, 6] {
            let init = BranchState::initial(group.clone(), catalog.clone(), h, s)?;
            let mut st = init.clone();
            for j in 1..=r {
                st = st.apply_test(j)?;
                if !st.norm_squared().is_one() {
                    unitarity.push(format!("H={:?} s={s} after Test_{j}", h.members()));
                }
                if j <= pos {
                    total += 1;
                    let bound = Q::new(BigInt::from(4 * j * j), BigInt::one() << s);
                    if st.distance_squared(&init) > bound {
                        fails.push(format!("H={:?} s={s} j={j}", h.members()));
                    }
                }
            }
        }
    }
    checks.push(Check::new("linear_drift", fails, total));
    checks.push(Check::new("unitarity", unitarity, r * 3));

    // Probability of halting at H.
    let mut fails = Vec::new();
    for s in [8u32, 12, 16] {
        for (pos, h) in subs.iter().enumerate() {
            let st = BranchState::initial(group.clone(), catalog.clone(), h, s)?.run_cascade()?;
            let d = st.first_register_distribution();
            if !d.is_valid() || d.probability(pos + 1) < success_bound(r, s) {
                fails.push(format!("H={:?} s={s}", h.members()));
            }
        }
    }
    checks.push(Check::new("success_bound", fails, 3 * r));

    // Branch representation vs dense reference.
    let alt = (*catalog).clone().with_transversals(&group, max_transversals(&group, &catalog))?;
    let mut fails = Vec::new();
    let mut total = 0;
    for h in subs {
        let oracle = oracle_for(&group, h)?;
        let perm: Vec<usize> = (0..oracle.range_size()).rev().collect();
        let relabeled = oracle.relabeled(&perm)?;
        for s in 1..=opts.dense_max_s {
            if dense_size(group.order(), oracle.range_size(), r, s) > opts.dense_cap {
                break;
            }
            total += 1;
            let branch = BranchState::initial(group.clone(), catalog.clone(), h, s)?
                .run_cascade()?
                .first_register_distribution();
            let dense = dense_reference_distribution(&group, &oracle, s, &catalog, opts.dense_cap)?;
            let moved = dense_reference_distribution(&group, &relabeled, s, &alt, opts.dense_cap)?;
            if branch != dense || dense != moved {
                fails.push(format!("H={:?} s={s}", h.members()));
            }
        }
    }
    checks.push(Check::new("dense_equivalence", fails, total));

    if r >= 2 {
        let targets = binary_search_targets(r);
        let (m, plans) =
            plan_with_escalation(group.clone(), catalog.clone(), &targets, choose_s_exact(r), opts.s_cap)?;
        let mut fails = Vec::new();
        if !m.rows_stochastic() {
            fails.push("rows".into());
        }
        if !linalg::is_identity(&linalg::mul(m.entries(), &invert_exact(&m)?)) {
            fails.push("M M^-1 != I".into());
        }
        if m.s() == choose_s_exact(r) && !m.neumann_bounds_hold() {
            fails.push("Delta bound".into());
        }
        for (k, plan) in plans.iter().enumerate() {
            if linalg::mul_vec(m.entries(), &plan.x) != plan.y {
                fails.push(format!("round {k}: Mx != y"));
            }
            for nu in 0..r {
                let p = exact_test_probability(&m, &plan.x, nu);
                let amp = amplify_once(&p)?;
                let want = if plan.y[nu] == q(3, 4) { Q::zero() } else { Q::one() };
                if p != plan.y[nu] || amp != want {
                    fails.push(format!("round {k} row {nu}"));
                }
            }
        }
        checks.push(Check::new("exact_plan", fails, plans.len() * r));
    }

    let mut fails = Vec::new();
    let engine = EngineOptions { s: None, s_cap: opts.s_cap };
    for h in subs {
        let mut oracle = oracle_for(&group, h)?;
        let id = identify_subgroup(&mut oracle, engine)?;
        if closure(&group, &id.generators) != *h {
            fails.push(format!("identify {:?}", h.members()));
        }
        let expect = if r == 1 {
            0
        } else {
            3 * id.s as u64 * ceil_log2(r) as u64 + id.generators.len() as u64 + 1
        };
        if id.ledger.total() != expect || !id.ledger.is_consistent() {
            fails.push(format!("identify ledger {:?}", h.members()));
        }
        let mut oracle = oracle_for(&group, h)?;
        let d = decide_trivial(&mut oracle, engine)?;
        let expect = if r == 1 { 0 } else { 3 * d.s as u64 };
        if d.non_trivial == h.is_trivial() || d.ledger.total() != expect {
            fails.push(format!("decide {:?}", h.members()));
        }
        if h.is_cyclic(&group) {
            let mut oracle = oracle_for(&group, h)?;
            let d = one_sided_trivial(&mut oracle, 0, engine)?;
            if d.non_trivial == h.is_trivial() {
                fails.push(format!("one-sided {:?}", h.members()));
            }
        }
    }
    checks.push(Check::new("identification", fails, r));

    Ok(checks)
}
