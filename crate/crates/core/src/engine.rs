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

//! Error-free identification: conditional matrix, bias vector, exact
//! amplitude amplification and binary search over the subgroup catalog.

use std::sync::Arc;

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cascade::{BranchState, OutcomeDistribution};
use crate::error::{CascadeError, EngineError};
use crate::group::FiniteGroup;
use crate::linalg::{self, Matrix};
use crate::oracle::{HiddenOracle, QueryLedger, PHASE_PREPARE, PHASE_UNPREPARE};
use crate::rational::{in_unit_interval, mat_to_text, q, qi, to_text, vec_to_text, Q};
use crate::subgroup::{generating_set, Subgroup, SubgroupCatalog};

/// Default upper limit for `s` during escalation.
pub const DEFAULT_S_CAP: u32 = 512;

fn ceil_log2_big(x: &BigInt) -> u32 {
    // smallest k with 2^k >= x, for x >= 1
    let mut k = 0u32;
    let mut p = BigInt::one();
    while &p < x {
        p <<= 1;
        k += 1;
    }
    k
}

/// `⌈log2 n⌉` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    ceil_log2_big(&BigInt::from(n))
}

/// Smallest even `s` with `4r / 2^{s/2} <= ε`.
pub fn choose_s_bounded(r: usize, epsilon: &Q) -> Result<u32, EngineError> {
    if *epsilon <= Q::zero() || *epsilon >= Q::one() {
        return Err(EngineError::EpsilonOutOfRange(to_text(epsilon)));
    }
    let ratio = qi(4 * r as i64) / epsilon;
    // 2^k >= a/b  <=>  2^k b >= a
    let (a, b) = (ratio.numer().clone(), ratio.denom().clone());
    let mut k = 0u32;
    while (BigInt::one() << k) * &b < a {
        k += 1;
    }
    Ok(2 * k)
}

/// `s = ⌈2 log2(4 r^3)⌉`: the least `s` with `2^s >= 16 r^6`.
pub fn choose_s_exact(r: usize) -> u32 {
    let r = BigInt::from(r.max(1));
    ceil_log2_big(&(BigInt::from(16) * num::pow(r, 6)))
}

/// `sin²(3 arcsin √p) = p (3 − 4p)²`, success probability after one
/// amplitude-amplification iteration.
pub fn amplify_once(p: &Q) -> Result<Q, EngineError> {
    if !in_unit_interval(p) {
        return Err(EngineError::ProbabilityOutOfRange(to_text(p)));
    }
    let t = qi(3) - qi(4) * p;
    Ok(p * &t * &t)
}

/// `M[H, K_μ] = Prob[K_μ | H]` over one candidate list.
#[derive(Debug, Clone)]
pub struct ConditionalMatrix {
    candidates: Arc<SubgroupCatalog>,
    s: u32,
    entries: Matrix,
}

impl ConditionalMatrix {
    /// Row `H` is the simulated cascade distribution with hidden subgroup
    /// `H`, restricted to outcomes `1..=r`. No oracle is involved. Rows are
    /// computed in parallel; the result does not depend on scheduling.
    pub fn build(
        group: Arc<FiniteGroup>,
        candidates: Arc<SubgroupCatalog>,
        s: u32,
    ) -> Result<Self, CascadeError> {
        if let Some(i) = candidates.ordering_violation() {
            return Err(CascadeError::BadOrdering(i + 1));
        }
        let entries = candidates
            .subgroups()
            .par_iter()
            .map(|h| cascade_distribution(group.clone(), candidates.clone(), h, s).map(|d| row_of(&d)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConditionalMatrix { candidates, s, entries })
    }

    pub fn from_entries(candidates: Arc<SubgroupCatalog>, s: u32, entries: Matrix) -> Self {
        ConditionalMatrix { candidates, s, entries }
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn candidates(&self) -> &SubgroupCatalog {
        &self.candidates
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn entry(&self, h: usize, mu: usize) -> &Q {
        &self.entries[h][mu]
    }

    pub fn rows_stochastic(&self) -> bool {
        self.entries.iter().all(|row| {
            row.iter().all(in_unit_interval) && row.iter().fold(Q::zero(), |a, b| a + b).is_one()
        })
    }

    /// `Δ = I − M`.
    pub fn delta(&self) -> Matrix {
        let id = linalg::identity(self.r());
        id.iter()
            .zip(&self.entries)
            .map(|(i, m)| i.iter().zip(m).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// Whether every entry of `Δ` has absolute value at most `1/r²`.
    pub fn neumann_bounds_hold(&self) -> bool {
        let r = self.r() as i64;
        let bound = q(1, r * r);
        self.delta().iter().flatten().all(|d| num::Signed::abs(d) <= bound)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s,
            "r": self.r(),
            "candidates": self.candidates.subgroups().iter().map(|k| k.members().to_vec()).collect::<Vec<_>>(),
            "M": mat_to_text(&self.entries),
        })
    }
}

/// The full cascade distribution for a hidden subgroup.
pub fn cascade_distribution(
    group: Arc<FiniteGroup>,
    candidates: Arc<SubgroupCatalog>,
    hidden: &Subgroup,
    s: u32,
) -> Result<OutcomeDistribution, CascadeError> {
    let state = BranchState::initial(group, candidates, hidden, s)?;
    Ok(state.run_cascade()?.first_register_distribution())
}

fn row_of(d: &OutcomeDistribution) -> Vec<Q> {
    d.probabilities()[1..].to_vec()
}

pub fn invert_exact(m: &ConditionalMatrix) -> Result<Matrix, EngineError> {
    linalg::invert(&m.entries)
}

/// Target vector `y` and bias vector `x = M⁻¹ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPlan {
    pub y: Vec<Q>,
    pub x: Vec<Q>,
    pub s: u32,
}

impl ExactPlan {
    pub fn to_json(&self) -> Value {
        json!({ "s": self.s, "y": vec_to_text(&self.y), "x": vec_to_text(&self.x) })
    }
}

fn quarter() -> Q {
    q(1, 4)
}

fn three_quarters() -> Q {
    q(3, 4)
}

/// Solves `M x = y`; fails with `EscalationNeeded` if some `x_μ ∉ [0, 1]`.
pub fn solve_bias_vector(m: &ConditionalMatrix, y: &[Q]) -> Result<ExactPlan, EngineError> {
    if y.len() != m.r() || y.iter().any(|v| *v != quarter() && *v != three_quarters()) {
        return Err(EngineError::BadTarget);
    }
    let inv = invert_exact(m)?;
    let x = linalg::mul_vec(&inv, y);
    if let Some((index, value)) = x.iter().enumerate().find(|(_, v)| !in_unit_interval(v)) {
        return Err(EngineError::EscalationNeeded { index, value: to_text(value) });
    }
    Ok(ExactPlan { y: y.to_vec(), x, s: m.s })
}

/// Ancilla-1 probability of ExactTest when the hidden subgroup is row `nu`:
/// `Σ_μ x_μ M[ν, μ]`.
pub fn exact_test_probability(m: &ConditionalMatrix, x: &[Q], nu: usize) -> Q {
    m.entries[nu].iter().zip(x).fold(Q::zero(), |acc, (p, w)| acc + p * w)
}

/// Same quantity for an arbitrary cascade distribution.
pub fn ancilla_probability(dist: &OutcomeDistribution, x: &[Q]) -> Q {
    dist.probabilities()[1..].iter().zip(x).fold(Q::zero(), |acc, (p, w)| acc + p * w)
}

/// Builds `M` and solves every target in `targets`, doubling `s` from
/// `start` until all bias vectors lie in `[0, 1]`.
pub fn plan_with_escalation(
    group: Arc<FiniteGroup>,
    candidates: Arc<SubgroupCatalog>,
    targets: &[Vec<Q>],
    start: u32,
    s_cap: u32,
) -> Result<(ConditionalMatrix, Vec<ExactPlan>), EngineError> {
    let mut s = start.max(1);
    while s <= s_cap {
        let m = ConditionalMatrix::build(group.clone(), candidates.clone(), s)?;
        let plans: Result<Vec<_>, _> = targets.iter().map(|y| solve_bias_vector(&m, y)).collect();
        match plans {
            Ok(p) => return Ok((m, p)),
            Err(EngineError::EscalationNeeded { .. }) | Err(EngineError::Singular) => s *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(EngineError::EscalationExhausted { cap: s_cap })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Fixed starting `s`; defaults to [`choose_s_exact`].
    pub s: Option<u32>,
    pub s_cap: u32,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { s: None, s_cap: DEFAULT_S_CAP }
    }
}

/// Binary-search round schedule: round `k` assigns `3/4` to candidates
/// whose index has bit `d-1-k` clear and `1/4` to the rest, `d = ⌈log2 r⌉`.
pub fn binary_search_targets(r: usize) -> Vec<Vec<Q>> {
    let d = ceil_log2(r);
    (0..d)
        .map(|k| {
            let bit = d - 1 - k;
            (0..r)
                .map(|i| if (i >> bit) & 1 == 1 { quarter() } else { three_quarters() })
                .collect()
        })
        .collect()
}

/// Charges one ExactTest round with a single amplification iteration
/// (`A`, `A⁻¹`, `A`).
fn charge_round(oracle: &mut HiddenOracle, s: u32) {
    oracle.charge(PHASE_PREPARE, 2 * s as u64);
    oracle.charge(PHASE_UNPREPARE, s as u64);
}

/// Maps the amplified probability to the measured bit; exact plans give 0 or 1.
fn certain_bit(amplified: &Q) -> Option<bool> {
    if amplified.is_one() {
        Some(true)
    } else if amplified.is_zero() {
        Some(false)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTranscript {
    pub round: usize,
    /// Live candidates (zero-based) assigned 3/4 and 1/4.
    pub three_quarters: Vec<usize>,
    pub one_quarter: Vec<usize>,
    pub probability: Q,
    pub amplified: Q,
    pub bit: bool,
    pub ledger: QueryLedger,
}

impl RoundTranscript {
    pub fn to_json(&self) -> Value {
        json!({
            "round": self.round,
            "Y_3/4": self.three_quarters,
            "Y_1/4": self.one_quarter,
            "p": to_text(&self.probability),
            "amplified": to_text(&self.amplified),
            "bit": self.bit as u8,
            "ledger": self.ledger.to_json(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Identification {
    pub generators: Vec<usize>,
    pub subgroup: Subgroup,
    pub catalog_index: Option<usize>,
    pub s: u32,
    pub r: usize,
    pub rounds: Vec<RoundTranscript>,
    pub ledger: QueryLedger,
}

impl Identification {
    pub fn to_json(&self) -> Value {
        json!({
            "subgroup": self.generators,
            "members": self.subgroup.members(),
            "catalog_index": self.catalog_index,
            "rounds": self.rounds.len(),
            "s": self.s,
            "r": self.r,
            "transcript": self.rounds.iter().map(RoundTranscript::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Identifies the hidden subgroup with certainty.
///
/// The driver sees only the measured bit of each round. The simulator
/// derives that bit from the row of `M` belonging to the oracle's subgroup.
pub fn identify_subgroup(
    oracle: &mut HiddenOracle,
    opts: EngineOptions,
) -> Result<Identification, EngineError> {
    let group = oracle.group_arc();
    let start = oracle.ledger().clone();
    let catalog = Arc::new(SubgroupCatalog::enumerate(&group).map_err(CascadeError::from)?);
    let r = catalog.len();
    if group.order() == 1 || r == 1 {
        return Ok(Identification {
            generators: Vec::new(),
            subgroup: Subgroup::trivial(&group),
            catalog_index: Some(0),
            s: 0,
            r,
            rounds: Vec::new(),
            ledger: QueryLedger::new(),
        });
    }
    let targets = binary_search_targets(r);
    let first = opts.s.unwrap_or_else(|| choose_s_exact(r));
    let (m, plans) = plan_with_escalation(group.clone(), catalog.clone(), &targets, first, opts.s_cap)?;
    let hidden_row = catalog.position(oracle.hidden()).ok_or(EngineError::UnknownHidden)?;

    let (mut lo, mut hi) = (0usize, 1usize << targets.len());
    let mut rounds = Vec::with_capacity(plans.len());
    for (k, plan) in plans.iter().enumerate() {
        let before = oracle.ledger().clone();
        charge_round(oracle, m.s());
        let mid = lo + (hi - lo) / 2;
        let p = exact_test_probability(&m, &plan.x, hidden_row);
        let amplified = amplify_once(&p)?;
        let bit = certain_bit(&amplified)
            .ok_or_else(|| EngineError::ProbabilityOutOfRange(to_text(&amplified)))?;
        rounds.push(RoundTranscript {
            round: k + 1,
            three_quarters: (lo..mid.min(r)).collect(),
            one_quarter: (mid.min(r)..hi.min(r)).collect(),
            probability: p,
            amplified,
            bit,
            ledger: oracle.ledger().since(&before),
        });
        if bit {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let found = catalog.get(lo).clone();
    let gens = generating_set(&group, &found);
    let generators = oracle.sanitize_output(&gens)?;
    Ok(Identification {
        generators,
        subgroup: found,
        catalog_index: Some(lo),
        s: m.s(),
        r,
        rounds,
        ledger: oracle.ledger().since(&start),
    })
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub non_trivial: bool,
    pub s: u32,
    pub r: usize,
    pub probability: Q,
    pub amplified: Q,
    pub ledger: QueryLedger,
}

impl Decision {
    pub fn to_json(&self) -> Value {
        json!({
            "answer": if self.non_trivial { "non-trivial" } else { "trivial" },
            "s": self.s,
            "r": self.r,
            "p": to_text(&self.probability),
            "amplified": to_text(&self.amplified),
        })
    }
}

fn degenerate_decision(r: usize) -> Decision {
    Decision {
        non_trivial: false,
        s: 0,
        r,
        probability: Q::zero(),
        amplified: Q::zero(),
        ledger: QueryLedger::new(),
    }
}

/// Exact triviality test: one round with `Y_{3/4} = {1_G}`.
pub fn decide_trivial(oracle: &mut HiddenOracle, opts: EngineOptions) -> Result<Decision, EngineError> {
    let group = oracle.group_arc();
    let start = oracle.ledger().clone();
    let catalog = Arc::new(SubgroupCatalog::enumerate(&group).map_err(CascadeError::from)?);
    let r = catalog.len();
    if group.order() == 1 || r == 1 {
        return Ok(degenerate_decision(r));
    }
    let y: Vec<Q> = (0..r).map(|i| if i + 1 == r { three_quarters() } else { quarter() }).collect();
    let first = opts.s.unwrap_or_else(|| choose_s_exact(r));
    let (m, plans) = plan_with_escalation(group, catalog.clone(), &[y], first, opts.s_cap)?;
    let row = catalog.position(oracle.hidden()).ok_or(EngineError::UnknownHidden)?;
    charge_round(oracle, m.s());
    let p = exact_test_probability(&m, &plans[0].x, row);
    let amplified = amplify_once(&p)?;
    let bit = certain_bit(&amplified).ok_or_else(|| EngineError::ProbabilityOutOfRange(to_text(&amplified)))?;
    Ok(Decision {
        non_trivial: bit,
        s: m.s(),
        r,
        probability: p,
        amplified,
        ledger: oracle.ledger().since(&start),
    })
}

/// One-sided triviality test over the cyclic subgroups only.
///
/// A trivial `H` always gives "trivial" and a cyclic non-trivial `H` always
/// gives "non-trivial". For a non-cyclic `H` the measured bit is random with
/// the exact amplified probability and is drawn from `seed`.
pub fn one_sided_trivial(
    oracle: &mut HiddenOracle,
    seed: u64,
    opts: EngineOptions,
) -> Result<Decision, EngineError> {
    let group = oracle.group_arc();
    let start = oracle.ledger().clone();
    let cyclic = Arc::new(SubgroupCatalog::cyclic(&group).map_err(CascadeError::from)?);
    let r = cyclic.len();
    if group.order() == 1 || r == 1 {
        return Ok(degenerate_decision(r));
    }
    let y: Vec<Q> = (0..r).map(|i| if i + 1 == r { quarter() } else { three_quarters() }).collect();
    let first = opts.s.unwrap_or_else(|| choose_s_exact(r));
    let (m, plans) = plan_with_escalation(group.clone(), cyclic.clone(), &[y], first, opts.s_cap)?;
    let x = &plans[0].x;
    let p = match cyclic.position(oracle.hidden()) {
        Some(row) => exact_test_probability(&m, x, row),
        None => {
            let d = cascade_distribution(group, cyclic.clone(), oracle.hidden(), m.s())?;
            ancilla_probability(&d, x)
        }
    };
    charge_round(oracle, m.s());
    let amplified = amplify_once(&p)?;
    let trivial_bit = match certain_bit(&amplified) {
        Some(b) => b,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.gen::<f64>() < crate::rational::to_f64(&amplified)
        }
    };
    Ok(Decision {
        non_trivial: !trivial_bit,
        s: m.s(),
        r,
        probability: p,
        amplified,
        ledger: oracle.ledger().since(&start),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> (Arc<FiniteGroup>, Arc<SubgroupCatalog>) {
        let g = Arc::new(FiniteGroup::build("Z:2").unwrap());
        let c = Arc::new(SubgroupCatalog::enumerate(&g).unwrap());
        (g, c)
    }

    fn oracle(spec: &str, h: &[usize]) -> HiddenOracle {
        let g = Arc::new(FiniteGroup::build(spec).unwrap());
        let h = Subgroup::new(&g, h).unwrap();
        HiddenOracle::new(g, &h).unwrap()
    }

    #[test]
    fn s_choices() {
        assert_eq!(choose_s_bounded(2, &q(1, 4)).unwrap(), 10);
        let eps = Q::new(BigInt::one(), BigInt::one() << 20);
        assert_eq!(choose_s_bounded(6, &eps).unwrap(), 50);
        // r = 1: 2⌈log2(4/ε)⌉
        assert_eq!(choose_s_bounded(1, &q(1, 2)).unwrap(), 6);
        assert_eq!(choose_s_bounded(1, &q(1, 3)).unwrap(), 8);
        assert!(choose_s_bounded(2, &qi(1)).is_err());
        assert!(choose_s_bounded(2, &qi(0)).is_err());
        assert_eq!(choose_s_exact(2), 10);
        assert_eq!(choose_s_exact(6), 20);
        assert_eq!(choose_s_exact(10), 24);
        assert_eq!(choose_s_exact(16), 28);
    }

    #[test]
    fn amplification_values() {
        assert_eq!(amplify_once(&q(1, 4)).unwrap(), qi(1));
        assert_eq!(amplify_once(&q(3, 4)).unwrap(), qi(0));
        assert_eq!(amplify_once(&qi(0)).unwrap(), qi(0));
        assert_eq!(amplify_once(&qi(1)).unwrap(), qi(1));
        assert!(amplify_once(&q(5, 4)).is_err());
        assert!(amplify_once(&q(-1, 4)).is_err());
    }

    #[test]
    fn z2_matrices() {
        let (g, c) = z2();
        let m = ConditionalMatrix::build(g.clone(), c.clone(), 2).unwrap();
        assert_eq!(m.entries(), &vec![vec![qi(1), qi(0)], vec![q(1, 4), q(3, 4)]]);
        let m4 = ConditionalMatrix::build(g, c, 4).unwrap();
        assert_eq!(m4.entries(), &vec![vec![qi(1), qi(0)], vec![q(1, 16), q(15, 16)]]);
        assert_eq!(invert_exact(&m).unwrap(), vec![vec![qi(1), qi(0)], vec![q(-1, 3), q(4, 3)]]);
    }

    #[test]
    fn z2_plan() {
        let (g, c) = z2();
        let m = ConditionalMatrix::build(g, c, 2).unwrap();
        let plan = solve_bias_vector(&m, &[q(3, 4), q(1, 4)]).unwrap();
        assert_eq!(plan.x, vec![q(3, 4), q(1, 12)]);
        assert_eq!(linalg::mul_vec(m.entries(), &plan.x), plan.y);
        assert_eq!(exact_test_probability(&m, &plan.x, 1), q(1, 4));
        assert_eq!(exact_test_probability(&m, &plan.x, 0), q(3, 4));
        assert_eq!(solve_bias_vector(&m, &[q(1, 2), q(1, 4)]), Err(EngineError::BadTarget));
    }

    #[test]
    fn identity_matrix_plan() {
        let (_, c) = z2();
        let m = ConditionalMatrix::from_entries(c, 1, linalg::identity(2));
        let y = vec![q(1, 4), q(3, 4)];
        let plan = solve_bias_vector(&m, &y).unwrap();
        assert_eq!(plan.x, y);
        assert_eq!(exact_test_probability(&m, &plan.x, 1), q(3, 4));
    }

    #[test]
    fn escalation_reported() {
        let (_, c) = z2();
        // x = M⁻¹ y leaves [0,1] for this (artificial) matrix.
        let m = ConditionalMatrix::from_entries(c, 1, vec![vec![q(1, 2), q(1, 2)], vec![qi(0), qi(1)]]);
        assert!(matches!(
            solve_bias_vector(&m, &[q(3, 4), q(1, 4)]),
            Err(EngineError::EscalationNeeded { index: 0, .. })
        ));
    }

    #[test]
    fn schedule_shape() {
        let t = binary_search_targets(6);
        assert_eq!(t.len(), 3);
        assert_eq!(t[0][..4], vec![q(3, 4); 4][..]);
        assert_eq!(t[0][4..], vec![q(1, 4); 2][..]);
        assert!(binary_search_targets(1).is_empty());
    }

    #[test]
    fn identify_z2_trivial() {
        let mut o = oracle("Z:2", &[0]);
        let id = identify_subgroup(&mut o, EngineOptions::default()).unwrap();
        assert!(id.generators.is_empty());
        assert_eq!(id.rounds.len(), 1);
        assert_eq!(id.ledger.total(), 3 * id.s as u64 + 1);
    }

    #[test]
    fn identify_z6() {
        for h in [vec![0, 1, 2, 3, 4, 5], vec![0, 2, 4], vec![0, 3], vec![0]] {
            let mut o = oracle("Z:6", &h);
            let id = identify_subgroup(&mut o, EngineOptions::default()).unwrap();
            assert_eq!(id.subgroup.members(), &h[..]);
            assert_eq!(id.rounds.len(), 2);
            let expect = 3 * id.s as u64 * 2 + id.generators.len() as u64 + 1;
            assert_eq!(id.ledger.total(), expect);
        }
    }

    #[test]
    fn decide_examples() {
        let mut o = oracle("Z:6", &[0]);
        let d = decide_trivial(&mut o, EngineOptions::default()).unwrap();
        assert!(!d.non_trivial);
        assert_eq!(d.ledger.total(), 3 * d.s as u64);
        let mut o = oracle("Z:6", &[0, 3]);
        assert!(decide_trivial(&mut o, EngineOptions::default()).unwrap().non_trivial);
        let mut o = oracle("Z:6", &[0, 1, 2, 3, 4, 5]);
        assert!(decide_trivial(&mut o, EngineOptions::default()).unwrap().non_trivial);
    }

    #[test]
    fn degenerate_group() {
        let mut o = oracle("Z:1", &[0]);
        let id = identify_subgroup(&mut o, EngineOptions::default()).unwrap();
        assert!(id.generators.is_empty());
        assert_eq!(id.ledger.total(), 0);
        assert!(!decide_trivial(&mut o, EngineOptions::default()).unwrap().non_trivial);
        assert_eq!(o.query_count(), 0);
    }

    #[test]
    fn one_sided_examples() {
        for seed in 0..5 {
            let mut o = oracle("Z:6", &[0]);
            assert!(!one_sided_trivial(&mut o, seed, EngineOptions::default()).unwrap().non_trivial);
            let mut o = oracle("Z:6", &[0, 2, 4]);
            assert!(one_sided_trivial(&mut o, seed, EngineOptions::default()).unwrap().non_trivial);
        }
        let mut o = oracle("Z2^2", &[0, 1, 2, 3]);
        let d = one_sided_trivial(&mut o, 1, EngineOptions::default()).unwrap();
        assert!(in_unit_interval(&d.amplified));
    }

    #[test]
    fn escalation_cap() {
        let mut o = oracle("Z:6", &[0, 3]);
        let opts = EngineOptions { s: Some(2), s_cap: 1 };
        let res = identify_subgroup(&mut o, opts);
        assert!(matches!(res, Err(EngineError::EscalationExhausted { cap: 1 })));
        assert_eq!(o.query_count(), 0);
    }
}
