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

//! Exact rational helpers and the lossless `"p/q"` text encoding.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn to_text(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn from_text(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn pow(x: &Q, e: u32) -> Q {
    num::pow(x.clone(), e as usize)
}

pub fn in_unit_interval(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn vec_to_text(v: &[Q]) -> Vec<String> {
    v.iter().map(to_text).collect()
}

pub fn mat_to_text(m: &[Vec<Q>]) -> Vec<Vec<String>> {
    m.iter().map(|r| vec_to_text(r)).collect()
}
