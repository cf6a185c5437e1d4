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

//! Black-box strictly H-periodic oracle with query accounting.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::group::FiniteGroup;
use crate::subgroup::{left_transversal, Subgroup};

pub const PHASE_QUERY: &str = "query";
pub const PHASE_PREPARE: &str = "prepare";
pub const PHASE_UNPREPARE: &str = "unprepare";
pub const PHASE_SANITIZE: &str = "sanitize";

/// Oracle call counts, total and per phase.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    total: u64,
    phases: BTreeMap<String, u64>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, phase: &str, n: u64) {
        self.total += n;
        *self.phases.entry(phase.to_string()).or_insert(0) += n;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn phase(&self, phase: &str) -> u64 {
        self.phases.get(phase).copied().unwrap_or(0)
    }

    pub fn phases(&self) -> &BTreeMap<String, u64> {
        &self.phases
    }

    /// Charges recorded since `earlier`, which must be a prior snapshot.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        let mut out = QueryLedger::new();
        for (k, &v) in &self.phases {
            let d = v - earlier.phase(k);
            if d > 0 {
                out.charge(k, d);
            }
        }
        out
    }

    pub fn merge(&mut self, other: &QueryLedger) {
        for (k, &v) in &other.phases {
            self.charge(k, v);
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.phases.values().sum::<u64>() == self.total
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "total": self.total, "phases": self.phases })
    }
}

/// Strictly H-periodic labeling `f: G -> coset index` of a hidden subgroup.
#[derive(Debug, Clone)]
pub struct HiddenOracle {
    group: Arc<FiniteGroup>,
    hidden: Subgroup,
    labels: Vec<usize>,
    ledger: QueryLedger,
}

impl HiddenOracle {
    /// Canonical labeling: coset `gH` gets the rank of its minimal element
    /// among all coset minima.
    pub fn new(group: Arc<FiniteGroup>, hidden: &Subgroup) -> Result<Self, OracleError> {
        let hidden = Subgroup::new(&group, hidden.members())?;
        let reps = left_transversal(&group, &hidden)?;
        let mut labels = vec![0; group.order()];
        for (i, &t) in reps.iter().enumerate() {
            for g in hidden.left_coset(&group, t) {
                labels[g] = i;
            }
        }
        Ok(HiddenOracle { group, hidden, labels, ledger: QueryLedger::new() })
    }

    /// Same hidden subgroup, coset labels permuted by `perm`
    /// (`new label = perm[old label]`).
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, OracleError> {
        let m = self.hidden.index();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
            return Err(OracleError::ElementOutOfRange { id: perm.len(), order: m });
        }
        let labels = self.labels.iter().map(|&l| perm[l]).collect();
        Ok(HiddenOracle {
            group: self.group.clone(),
            hidden: self.hidden.clone(),
            labels,
            ledger: QueryLedger::new(),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<FiniteGroup> {
        self.group.clone()
    }

    /// The promised subgroup. Only the simulator and the test harness look
    /// at this; algorithms go through [`HiddenOracle::query`].
    pub fn hidden(&self) -> &Subgroup {
        &self.hidden
    }

    /// Number of distinct labels, `N / |H|`.
    pub fn range_size(&self) -> usize {
        self.hidden.index()
    }

    /// Uncharged view of the labeling, for building reference states.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn query(&mut self, g: usize) -> Result<usize, OracleError> {
        self.query_in(PHASE_QUERY, g)
    }

    fn query_in(&mut self, phase: &str, g: usize) -> Result<usize, OracleError> {
        let order = self.group.order();
        if g >= order {
            return Err(OracleError::ElementOutOfRange { id: g, order });
        }
        self.ledger.charge(phase, 1);
        Ok(self.labels[g])
    }

    /// Records `n` oracle applications made inside a quantum subroutine.
    pub fn charge(&mut self, phase: &str, n: u64) {
        self.ledger.charge(phase, n);
    }

    pub fn query_count(&self) -> u64 {
        self.ledger.total()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    /// Keeps `x` iff `f(x) = f(1_G)`; costs `|X| + 1` queries.
    pub fn sanitize_output(&mut self, xs: &[usize]) -> Result<Vec<usize>, OracleError> {
        for &x in xs {
            if x >= self.group.order() {
                return Err(OracleError::ElementOutOfRange { id: x, order: self.group.order() });
            }
        }
        let base = self.query_in(PHASE_SANITIZE, 0)?;
        let mut kept = Vec::new();
        for &x in xs {
            if self.query_in(PHASE_SANITIZE, x)? == base {
                kept.push(x);
            }
        }
        Ok(kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(spec: &str, members: &[usize]) -> HiddenOracle {
        let g = Arc::new(FiniteGroup::build(spec).unwrap());
        let h = Subgroup::new(&g, members).unwrap();
        HiddenOracle::new(g, &h).unwrap()
    }

    fn assert_strict(o: &HiddenOracle) {
        let g = o.group();
        for a in 0..g.order() {
            for b in 0..g.order() {
                let same_coset = o.hidden().contains(g.mul(g.inv(a), b));
                assert_eq!(o.labels()[a] == o.labels()[b], same_coset);
            }
        }
    }

    #[test]
    fn labelings() {
        let o = oracle("Z:2", &[0]);
        assert_eq!(o.labels(), &[0, 1]);
        let o = oracle("Z:2", &[0, 1]);
        assert_eq!(o.labels(), &[0, 0]);
        let o = oracle("Z:6", &[0, 3]);
        assert_eq!(o.labels(), &[0, 1, 2, 0, 1, 2]);
        assert_eq!(o.range_size(), 3);
        for (spec, h) in [("S:3", vec![0, 1]), ("D:4", vec![0, 4]), ("Q8", vec![0, 1])] {
            let o = oracle(spec, &h);
            assert_strict(&o);
            assert_eq!(o.labels()[0], o.labels()[h[1]]);
        }
    }

    #[test]
    fn queries_are_counted() {
        let mut o = oracle("Z:6", &[0, 3]);
        assert_eq!(o.query(0).unwrap(), 0);
        assert_eq!(o.query_count(), 1);
        assert_eq!(o.query(4).unwrap(), o.query(4).unwrap());
        assert_eq!(o.query_count(), 3);
        assert_eq!(o.query(3).unwrap(), o.query(0).unwrap());
        assert!(o.query(6).is_err());
        assert_eq!(o.query_count(), 5);
        assert!(o.ledger().is_consistent());
    }

    #[test]
    fn sanitize() {
        let mut o = oracle("Z:6", &[0, 3]);
        assert_eq!(o.sanitize_output(&[]).unwrap(), Vec::<usize>::new());
        assert_eq!(o.query_count(), 1);
        assert_eq!(o.sanitize_output(&[0, 3]).unwrap(), vec![0, 3]);
        assert_eq!(o.query_count(), 4);
        assert_eq!(o.sanitize_output(&[2, 3]).unwrap(), vec![3]);
        assert_eq!(o.ledger().phase(PHASE_SANITIZE), 7);
    }

    #[test]
    fn relabel_keeps_partition() {
        let o = oracle("S:3", &[0, 1]);
        let p = o.relabeled(&[2, 0, 1]).unwrap();
        assert_strict(&p);
        assert_ne!(o.labels(), p.labels());
        assert!(o.relabeled(&[0, 0, 1]).is_err());
    }

    #[test]
    fn ledger_json_and_diff() {
        let mut l = QueryLedger::new();
        l.charge(PHASE_PREPARE, 4);
        let snap = l.clone();
        l.charge(PHASE_UNPREPARE, 2);
        l.charge(PHASE_PREPARE, 1);
        let d = l.since(&snap);
        assert_eq!(d.total(), 3);
        assert_eq!(
            serde_json::to_string(&l.to_json()).unwrap(),
            r#"{"phases":{"prepare":5,"unprepare":2},"total":7}"#
        );
    }
}
