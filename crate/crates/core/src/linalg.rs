//! Exact Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Rank of a set of sparse row vectors over `dim` coordinates.
pub fn rank_sparse<'a, I>(rows: I, dim: usize) -> usize
where
    I: IntoIterator<Item = &'a [(usize, Q)]>,
{
    let mut m: Matrix = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![Q::zero(); dim];
            for (i, x) in r {
                v[*i] += x;
            }
            v
        })
        .collect();
    rref(&mut m).len()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let p = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, p);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..p {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mul(&m, &inv), identity(2));
        assert_eq!(inv[0][0], q(1));
        assert_eq!(inv[0][1], q(-1));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = vec![vec![q(1), q(2)], vec![frac(1, 2), q(1)]];
        assert!(inverse(&m).is_none());
        assert_eq!(rank(&m), 1);
    }
}

/// Row echelon form built one sparse vector at a time.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, BTreeMap<K, Q>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; keeps it if independent.
    pub fn insert(&mut self, v: &BTreeMap<K, Q>) -> bool {
        let mut v = v.clone();
        v.retain(|_, x| !x.is_zero());
        while let Some((key, lead)) = v.iter().find(|(k, _)| self.rows.contains_key(*k)) {
            let (key, lead) = (key.clone(), lead.clone());
            let row = &self.rows[&key];
            for (k, x) in row {
                let slot = v.entry(k.clone()).or_insert_with(Q::zero);
                *slot -= &lead * x;
                if slot.is_zero() {
                    v.remove(k);
                }
            }
        }
        let Some((pivot, lead)) = v.iter().next().map(|(k, x)| (k.clone(), x.clone())) else {
            return false;
        };
        let inv = Q::one() / lead;
        let row: BTreeMap<K, Q> = v.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }
}
