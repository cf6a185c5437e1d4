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

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{BigInt, One, Zero};
use proptest::prelude::*;

use hspsim::cascade::{projector_apply, BranchState};
use hspsim::engine::{amplify_once, ConditionalMatrix};
use hspsim::linalg;
use hspsim::rational::{q, qi, Q};
use hspsim::subgroup::{closure, coset_overlap, generating_set};
use hspsim::{FiniteGroup, Subgroup, SubgroupCatalog};

const SMALL: [&str; 8] = ["Z:2", "Z:4", "Z:6", "Z2^2", "S:3", "Q8", "D:4", "Z2^3"];

fn setup(spec: &str) -> (Arc<FiniteGroup>, Arc<SubgroupCatalog>) {
    let g = Arc::new(FiniteGroup::build(spec).unwrap());
    let c = Arc::new(SubgroupCatalog::enumerate(&g).unwrap());
    (g, c)
}

/// Every closed subset, by checking all `2^N` subsets.
fn brute_force_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let closed = members
            .iter()
            .all(|&a| members.iter().all(|&b| mask & (1 << g.mul(a, b)) != 0));
        if closed {
            out.insert(members);
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    let specs = [
        "Z:1", "Z:2", "Z:3", "Z:4", "Z:5", "Z:6", "Z:7", "Z:8", "Z:9", "Z:10", "Z:11", "Z:12",
        "Z2^2", "Z2^3", "S:3", "D:3", "D:4", "D:5", "D:6", "Q8",
    ];
    for spec in specs {
        let g = FiniteGroup::build(spec).unwrap();
        let c = SubgroupCatalog::enumerate(&g).unwrap();
        let got: BTreeSet<Vec<usize>> = c.subgroups().iter().map(|k| k.members().to_vec()).collect();
        assert_eq!(got.len(), c.len(), "{spec}: duplicates");
        assert_eq!(got, brute_force_subgroups(&g), "{spec}");
    }
}

#[test]
fn overlap_is_squared_projection_norm() {
    // ‖Π_K 1_H‖² / |H| = |K ∩ H| / |K|, and at most 1/2 unless K ⊆ H.
    for spec in SMALL {
        let (g, c) = setup(spec);
        for (i, k) in c.subgroups().iter().enumerate() {
            for h in c.subgroups() {
                let mut ind = vec![Q::zero(); g.order()];
                for &x in h.members() {
                    ind[x] = Q::one();
                }
                let p = projector_apply(&g, k, c.transversal(i), &ind).unwrap();
                let norm = p.iter().fold(Q::zero(), |a, x| a + x * x) / qi(h.order() as i64);
                let overlap = coset_overlap(k, h).unwrap();
                assert_eq!(norm, overlap);
                if !k.is_subgroup_of(h) {
                    assert!(overlap <= q(1, 2));
                }
            }
        }
    }
}

#[test]
fn generating_sets_close_to_their_subgroup() {
    for spec in SMALL.iter().chain(["S:4", "D:6"].iter()) {
        let (g, c) = setup(spec);
        for k in c.subgroups() {
            let gens = generating_set(&g, k);
            assert_eq!(&closure(&g, &gens), k);
            let bound = (k.order() as f64).log2().ceil() as usize;
            assert!(gens.len() <= bound, "{spec} {:?}", k.members());
        }
    }
}

#[test]
fn parallel_rows_match_sequential() {
    let (g, c) = setup("D:4");
    let m = ConditionalMatrix::build(g.clone(), c.clone(), 6).unwrap();
    for (i, h) in c.subgroups().iter().enumerate() {
        let d = BranchState::initial(g.clone(), c.clone(), h, 6)
            .unwrap()
            .run_cascade()
            .unwrap()
            .first_register_distribution();
        assert_eq!(&m.entries()[i][..], &d.probabilities()[1..]);
    }
}

fn small_rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projector_is_idempotent(
        spec in prop::sample::select(&SMALL[..]),
        which in 0usize..16,
        phi in prop::collection::vec(small_rational(), 8),
    ) {
        let (g, c) = setup(spec);
        let i = which % c.len();
        let phi = &phi[..g.order()];
        let once = projector_apply(&g, c.get(i), c.transversal(i), phi).unwrap();
        let twice = projector_apply(&g, c.get(i), c.transversal(i), &once).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn tests_preserve_norm_and_register_invariants(
        spec in prop::sample::select(&SMALL[..]),
        hidden in 0usize..16,
        s in 1u32..7,
        order in prop::collection::vec(0usize..16, 1..6),
    ) {
        let (g, c) = setup(spec);
        let h = c.get(hidden % c.len()).clone();
        let mut st = BranchState::initial(g, c.clone(), &h, s).unwrap();
        // The counter stays in its populated range for at most r tests.
        for mu in order.into_iter().take(c.len()) {
            st = st.apply_test(mu % c.len() + 1).unwrap();
            prop_assert!(st.norm_squared().is_one());
            let branches = st.branches();
            for b in &branches {
                prop_assert!(b.counter > 0 || b.outcome == 0);
                prop_assert!(!b.coefficient.is_zero());
                prop_assert!(b.couplet.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_one()));
            }
            let keys: BTreeSet<_> = branches.iter().map(|b| (b.outcome, b.counter, b.couplet.clone())).collect();
            prop_assert_eq!(keys.len(), branches.len());
        }
    }

    #[test]
    fn random_closures_are_catalogued(
        spec in prop::sample::select(&SMALL[..]),
        gens in prop::collection::vec(0usize..8, 0..4),
    ) {
        let (g, c) = setup(spec);
        let gens: Vec<usize> = gens.into_iter().map(|x| x % g.order()).collect();
        prop_assert!(c.position(&closure(&g, &gens)).is_some());
    }

    #[test]
    fn diagonally_dominant_inverse(entries in prop::collection::vec(small_rational(), 16)) {
        let mut m: Vec<Vec<Q>> = entries.chunks(4).map(|r| r.to_vec()).collect();
        for (i, row) in m.iter_mut().enumerate() {
            let off = row.iter().fold(Q::zero(), |a, x| a + num::Signed::abs(x));
            row[i] = off + qi(1);
        }
        let inv = linalg::invert(&m).unwrap();
        prop_assert!(linalg::is_identity(&linalg::mul(&m, &inv)));
        prop_assert!(linalg::is_identity(&linalg::mul(&inv, &m)));
    }

    #[test]
    fn amplification_stays_in_unit_interval(n in 0i64..=1000) {
        let p = Q::new(BigInt::from(n), BigInt::from(1000));
        let a = amplify_once(&p).unwrap();
        prop_assert!(a >= Q::zero() && a <= Q::one());
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>()) {
        let (g, c) = setup("S:3");
        let d = BranchState::initial(g.clone(), c.clone(), &Subgroup::trivial(&g), 2)
            .unwrap()
            .run_cascade()
            .unwrap()
            .first_register_distribution();
        let nu = d.sample(seed);
        prop_assert_eq!(nu, d.sample(seed));
        prop_assert!(!d.probability(nu).is_zero());
    }
}
