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

//! Finite groups given by their multiplication table.

use serde::Deserialize;

use crate::error::GroupError;

/// Largest group order the simulator accepts.
pub const MAX_ORDER: usize = 64;

/// A finite group with elements numbered `0..order`, identity at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    names: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct TableDoc {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Parses a group spec: `Z:<n>`, `Z2^<k>`, `D:<n>`, `S:<n>`, `Q8` or a
    /// JSON document `{"order": N, "table": [[...]]}`.
    pub fn build(spec: &str) -> Result<Self, GroupError> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            let doc: TableDoc = serde_json::from_str(spec)
                .map_err(|e| GroupError::MalformedTable(e.to_string()))?;
            if doc.table.len() != doc.order {
                return Err(GroupError::MalformedTable(format!(
                    "order is {} but table has {} rows",
                    doc.order,
                    doc.table.len()
                )));
            }
            return Self::from_table(doc.table);
        }
        let bad = || GroupError::UnknownSpec(spec.to_string());
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        if spec == "Q8" {
            Ok(Self::quaternion())
        } else if let Some(k) = spec.strip_prefix("Z2^") {
            Self::elementary_abelian(num(k)?)
        } else if let Some(n) = spec.strip_prefix("Z:") {
            Self::cyclic(num(n)?)
        } else if let Some(n) = spec.strip_prefix("D:") {
            Self::dihedral(num(n)?)
        } else if let Some(n) = spec.strip_prefix("S:") {
            Self::symmetric(num(n)?)
        } else {
            Err(bad())
        }
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::UnknownSpec("Z:0".into()));
        }
        check_cap(n)?;
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut g = Self::from_table_unchecked(rows);
        g.names = Some((0..n).map(|a| a.to_string()).collect());
        Ok(g)
    }

    pub fn elementary_abelian(k: usize) -> Result<Self, GroupError> {
        if k >= usize::BITS as usize {
            return Err(GroupError::TooLarge { order: usize::MAX, cap: MAX_ORDER });
        }
        let n = 1usize << k;
        check_cap(n)?;
        let rows = (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect();
        let mut g = Self::from_table_unchecked(rows);
        g.names = Some((0..n).map(|a| format!("{a:0width$b}", width = k.max(1))).collect());
        Ok(g)
    }

    /// Dihedral group of order `2n`: ids `0..n` are rotations `r^k`, ids
    /// `n..2n` are reflections `s r^k`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::UnknownSpec("D:0".into()));
        }
        check_cap(2 * n)?;
        // (s^a r^b)(s^c r^d) = s^(a+c) r^(d + (-1)^c b)
        let decode = |x: usize| (x / n, x % n);
        let encode = |a: usize, b: usize| a * n + b;
        let rows = (0..2 * n)
            .map(|x| {
                (0..2 * n)
                    .map(|y| {
                        let (a, b) = decode(x);
                        let (c, d) = decode(y);
                        let rot = if c == 0 { (d + b) % n } else { (d + n - b) % n };
                        encode((a + c) % 2, rot)
                    })
                    .collect()
            })
            .collect();
        let mut g = Self::from_table_unchecked(rows);
        g.names = Some(
            (0..2 * n)
                .map(|x| {
                    let (a, b) = decode(x);
                    match (a, b) {
                        (0, 0) => "1".to_string(),
                        (0, b) => format!("r^{b}"),
                        (_, 0) => "s".to_string(),
                        (_, b) => format!("s r^{b}"),
                    }
                })
                .collect(),
        );
        Ok(g)
    }

    /// Symmetric group on `n <= 4` points; elements are permutations in
    /// lexicographic one-line order and `(p q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 4 {
            return Err(GroupError::UnknownSpec(format!("S:{n}")));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap();
        let rows = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let composed: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                        index(&composed)
                    })
                    .collect()
            })
            .collect();
        let mut g = Self::from_table_unchecked(rows);
        g.names = Some(
            perms
                .iter()
                .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(""))
                .collect(),
        );
        Ok(g)
    }

    /// Quaternion group; ids are `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit index 0..4 = 1,i,j,k; element id = 2*unit + sign
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let rows = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, neg) = UNIT[x / 2][y / 2];
                        let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
                        2 * u + sign as usize
                    })
                    .collect()
            })
            .collect();
        let mut g = Self::from_table_unchecked(rows);
        g.names = Some(
            ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        );
        g
    }

    /// Validates an explicit table. If the identity is not element 0 it is
    /// swapped into position 0; names record the original ids.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        check_cap(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::ElementOutOfRange(bad));
            }
            if !is_permutation(row.iter().copied(), n) {
                return Err(GroupError::MalformedTable(format!("row {i} is not a permutation")));
            }
        }
        for j in 0..n {
            if !is_permutation(rows.iter().map(|r| r[j]), n) {
                return Err(GroupError::MalformedTable(format!("column {j} is not a permutation")));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|g| rows[e][g] == g && rows[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        for (g, row) in rows.iter().enumerate() {
            if !(0..n).any(|h| row[h] == e && rows[h][g] == e) {
                return Err(GroupError::NoInverse(g));
            }
        }
        let swap = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let renumbered = (0..n)
            .map(|a| (0..n).map(|b| swap(rows[swap(a)][swap(b)])).collect())
            .collect();
        let mut g = Self::from_table_unchecked(renumbered);
        if e != 0 {
            g.names = Some((0..n).map(|a| format!("e{}", swap(a))).collect());
        }
        Ok(g)
    }

    fn from_table_unchecked(rows: Vec<Vec<usize>>) -> Self {
        let order = rows.len();
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let inverse = (0..order)
            .map(|g| (0..order).find(|&h| table[g * order + h] == 0).expect("inverse"))
            .collect();
        FiniteGroup { order, table, inverse, names: None }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(n) => n[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exhaustive check of the group axioms; returns the first failing triple.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(GroupError::NoIdentity);
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(GroupError::NoInverse(a));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_element(&self, a: usize) -> Result<(), GroupError> {
        if a < self.order {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange(a))
        }
    }
}

fn check_cap(n: usize) -> Result<(), GroupError> {
    if n > MAX_ORDER {
        Err(GroupError::TooLarge { order: n, cap: MAX_ORDER })
    } else {
        Ok(())
    }
}

fn is_permutation(it: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for x in it {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    seen.into_iter().all(|b| b)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
