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

use thiserror::Error;

/// Errors raised while building or validating a finite group.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unrecognised group spec `{0}`")]
    UnknownSpec(String),
    #[error("malformed group table: {0}")]
    MalformedTable(String),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("group order {order} exceeds the cap of {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("element id {0} is out of range")]
    ElementOutOfRange(usize),
    #[error("element set is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroups belong to different parent groups (orders {0} and {1})")]
    MismatchedParents(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("element id {id} out of range for group of order {order}")]
    ElementOutOfRange { id: usize, order: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CascadeError {
    #[error("number of couplets must be at least 1")]
    ZeroCouplets,
    #[error("subgroup index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("candidate ordering violates |K_{0}| >= |K_{next}|", next = .0 + 1)]
    BadOrdering(usize),
    #[error("dense state needs {needed} amplitudes, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("integer overflow in dense amplitudes")]
    DenseOverflow,
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    EpsilonOutOfRange(String),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("bias vector leaves [0, 1] at index {index} (x = {value})")]
    EscalationNeeded { index: usize, value: String },
    #[error("no valid plan found up to s = {cap}")]
    EscalationExhausted { cap: u32 },
    #[error("target vector entries must be 1/4 or 3/4")]
    BadTarget,
    #[error("hidden subgroup is not among the candidates")]
    UnknownHidden,
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Top-level error, tagged with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group_core: {0}")]
    Group(#[from] GroupError),
    #[error("oracle_model: {0}")]
    Oracle(#[from] OracleError),
    #[error("cascade_sim: {0}")]
    Cascade(#[from] CascadeError),
    #[error("exact_engine: {0}")]
    Engine(#[from] EngineError),
    #[error("cli_harness: {0}")]
    Config(String),
    #[error("cli_harness: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error stems from a resource cap (dense size or s escalation).
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::Cascade(CascadeError::CapExceeded { .. })
                | Error::Cascade(CascadeError::DenseOverflow)
                | Error::Group(GroupError::TooLarge { .. })
                | Error::Engine(EngineError::EscalationExhausted { .. })
                | Error::Engine(EngineError::Cascade(CascadeError::CapExceeded { .. }))
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
