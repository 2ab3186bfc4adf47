//! Exact linear algebra over the rationals on sparse vectors keyed by basis labels.
//!
//! Ranks go through fraction-free (Bareiss) elimination on integer rows; kernels
//! and incremental spans use reduced row echelon form over `Q`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Q;

/// A sparse vector: basis label to nonzero coefficient.
pub type SparseVec<K> = BTreeMap<K, Q>;

pub fn add_scaled<K: Ord + Clone>(target: &mut SparseVec<K>, src: &SparseVec<K>, factor: &Q) {
    if factor.is_zero() {
        return;
    }
    for (k, v) in src {
        add_entry(target, k.clone(), v * factor);
    }
}

pub fn add_entry<K: Ord>(target: &mut SparseVec<K>, key: K, value: Q) {
    if value.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match target.entry(key) {
        Entry::Vacant(e) => {
            e.insert(value);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Rows of integers obtained by clearing denominators; columns indexed by the
/// union of labels.
fn integer_rows<K: Ord + Clone>(vectors: &[SparseVec<K>]) -> (Vec<Vec<BigInt>>, usize) {
    let labels: BTreeSet<&K> = vectors.iter().flat_map(|v| v.keys()).collect();
    let index: BTreeMap<&K, usize> = labels.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let ncols = index.len();
    let rows = vectors
        .iter()
        .map(|v| {
            let lcm = v.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let mut row = vec![BigInt::zero(); ncols];
            for (k, q) in v {
                row[index[k]] = q.numer() * (&lcm / q.denom());
            }
            row
        })
        .collect();
    (rows, ncols)
}

/// Rank of a dense integer matrix by fraction-free Gaussian elimination.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    let nrows = rows.len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        let (top, below) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below.iter_mut() {
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                // exact by Sylvester's identity
                *x = (&pivot * &*x - &factor * p) / &prev_pivot;
            }
        }
        // entries left of `col` in lower rows are already zero
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

/// Rank of the span of sparse rational vectors.
pub fn rank<K: Ord + Clone>(vectors: &[SparseVec<K>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let (rows, ncols) = integer_rows(vectors);
    bareiss_rank(rows, ncols)
}

/// Basis of linear relations among `columns`: each returned vector `c` satisfies
/// `Σ_i c_i · columns[i] = 0`. The basis is in reduced form with one free column each.
pub fn kernel<K: Ord + Clone>(columns: &[SparseVec<K>]) -> Vec<Vec<Q>> {
    let ncols = columns.len();
    let labels: BTreeSet<&K> = columns.iter().flat_map(|v| v.keys()).collect();
    // dense matrix, rows = labels, cols = columns
    let mut m: Vec<Vec<Q>> = labels
        .iter()
        .map(|k| columns.iter().map(|c| c.get(*k).cloned().unwrap_or_else(Q::zero)).collect())
        .collect();
    let pivots = rref(&mut m, ncols);
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for &(r, c) in &pivots {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// In-place reduced row echelon form; returns (row, column) pivot positions.
pub fn rref(m: &mut [Vec<Q>], ncols: usize) -> Vec<(usize, usize)> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

/// Incrementally maintained echelon basis of a subspace of sparse vectors.
///
/// Each stored vector has its pivot (largest label) equal to 1 and no other stored
/// vector has a nonzero entry at that pivot, so `reduce` yields a canonical
/// representative of the coset `v + span`.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Canonical remainder of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut v = v.clone();
        loop {
            // largest label of v that is a pivot
            let hit = v.iter().rev().find(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone()));
            match hit {
                Some((k, c)) => add_scaled(&mut v, &self.rows[&k], &-c),
                None => return v,
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Q::one() / lead;
        let r: SparseVec<K> = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        // keep the basis fully reduced at the new pivot
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                add_scaled(row, &r, &-c);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int};

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, q_int(c))).filter(|(_, c)| !c.is_zero()).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 3)])];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank::<u32>(&[]), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let mut a = SparseVec::new();
        a.insert(0u32, q_frac(1, 3));
        a.insert(1, q_frac(1, 2));
        let mut b = SparseVec::new();
        b.insert(0u32, q_int(2));
        b.insert(1, q_int(3));
        assert_eq!(rank(&[a, b]), 1);
    }

    #[test]
    fn kernel_vectors_are_relations() {
        let cols = vec![v(&[(0, 1), (1, 1)]), v(&[(0, 2), (1, 2)]), v(&[(1, 1)]), v(&[(0, 1)])];
        let ker = kernel(&cols);
        assert_eq!(ker.len(), cols.len() - rank(&cols));
        for rel in &ker {
            let mut acc = SparseVec::new();
            for (c, col) in rel.iter().zip(&cols) {
                add_scaled(&mut acc, col, c);
            }
            assert!(acc.is_empty());
        }
    }

    #[test]
    fn echelon_reduce_is_canonical() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 1), (2, 1)])));
        assert!(e.insert(&v(&[(1, 1), (2, 2)])));
        assert!(!e.insert(&v(&[(0, 2), (1, 3), (2, 8)])));
        assert_eq!(e.dim(), 2);
        let r1 = e.reduce(&v(&[(2, 5)]));
        let r2 = e.reduce(&v(&[(0, -5)]));
        assert_eq!(r1, r2);
        assert!(e.contains(&v(&[(0, 1), (1, -1), (2, -1)])));
    }

    #[test]
    fn bareiss_agrees_with_rref() {
        // 4x4 matrix of rank 3
        let data = [[2, 4, 1, 3], [1, 2, 0, 1], [3, 6, 1, 4], [0, 1, 5, 2]];
        let rows: Vec<Vec<BigInt>> = data.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut m: Vec<Vec<Q>> = data.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect();
        assert_eq!(bareiss_rank(rows, 4), rref(&mut m, 4).len());
        assert_eq!(rref(&mut m, 4).len(), 3);
    }
}
