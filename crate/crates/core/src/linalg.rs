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

//! Dense rational matrices and exact Gauss-Jordan inversion.

use num::{One, Signed, Zero};

use crate::error::EngineError;
use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn is_identity(m: &Matrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.len() == m.len()
            && row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Q::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Matrix, x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (m, v)| acc + m * v))
        .collect()
}

/// Exact inverse by Gauss-Jordan elimination, pivoting on the entry of
/// largest magnitude in each column.
pub fn invert(m: &Matrix) -> Result<Matrix, EngineError> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(EngineError::NotSquare { rows: n, cols: row.len() });
    }
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&i| !a[i][col].is_zero())
            .max_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()).then(j.cmp(&i)))
            .ok_or(EngineError::Singular)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
            *x /= &p;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let da = &f * &a[col][j];
                a[i][j] -= da;
                let di = &f * &inv[col][j];
                inv[i][j] -= di;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn identity_inverse() {
        assert_eq!(invert(&identity(3)).unwrap(), identity(3));
    }

    #[test]
    fn two_by_two() {
        let m = vec![vec![qi(1), qi(0)], vec![q(1, 4), q(3, 4)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![qi(1), qi(0)], vec![q(-1, 3), q(4, 3)]]);
        assert!(is_identity(&mul(&m, &inv)));
    }

    #[test]
    fn needs_row_swap() {
        let m = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
        assert_eq!(invert(&m).unwrap(), m);
    }

    #[test]
    fn singular_and_ragged() {
        let m = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert_eq!(invert(&m), Err(EngineError::Singular));
        let m = vec![vec![qi(1), qi(2)], vec![qi(2)]];
        assert!(matches!(invert(&m), Err(EngineError::NotSquare { .. })));
    }
}
