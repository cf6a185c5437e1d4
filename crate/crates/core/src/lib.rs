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

//! Exact, desk-scale simulation of the polynomial-query hidden subgroup
//! algorithm: Test cascade, conditional-probability matrix, and the
//! error-free identification by matrix inversion, one round of amplitude
//! amplification and binary search, all in exact rational arithmetic.

pub mod cascade;
pub mod dense;
pub mod engine;
pub mod error;
pub mod group;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod subgroup;
pub mod verify;

pub use cascade::{projector_apply, Branch, BranchState, OutcomeDistribution};
pub use dense::dense_reference_distribution;
pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use oracle::{HiddenOracle, QueryLedger};
pub use rational::Q;
pub use subgroup::{coset_overlap, generating_set, left_transversal, Subgroup, SubgroupCatalog};
