//! Dense and sparse linear algebra over `F_p`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::field::Prime;

/// Dense `rows x cols` matrix over `F_p`, row-major. Acts on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn nonzero_entries(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, p: Prime, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, p.add(cur, p.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, p: Prime, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b)))
            })
            .collect()
    }

    pub fn add_scaled(&mut self, p: Prime, c: u32, rhs: &Matrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a = p.add(*a, p.mul(c, b));
        }
    }

    pub fn scaled(&self, p: Prime, c: u32) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| p.mul(x, c)).collect(),
        }
    }

    /// Row-reduce in place, returning the pivot columns.
    pub fn row_reduce(&mut self, p: Prime) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = p.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = self.get(r, j);
                self.set(r, j, p.mul(v, inv));
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && f != 0 {
                    for j in 0..self.cols {
                        let v = p.sub(self.get(i, j), p.mul(f, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self, p: Prime) -> usize {
        self.clone().row_reduce(p).len()
    }

    /// Basis of `{ v : self * v = 0 }`.
    pub fn kernel(&self, p: Prime) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.row_reduce(p);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = p.neg(m.get(r, f));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, p: Prime) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.row_reduce(p);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, p: Prime) -> bool {
        self.rows == self.cols && self.rank(p) == self.rows
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[u32]> = (0..self.rows).map(|r| self.row(r)).collect();
        rows.serialize(s)
    }
}

/// A sparse vector keyed by an ordered basis label.
pub type SparseVec<K> = BTreeMap<K, u32>;

/// Incremental Gaussian elimination on sparse vectors that remembers how each
/// echelon row was built from the inserted vectors, so that membership and
/// coordinates relative to the inserted vectors can be read off.
#[derive(Clone, Debug)]
pub struct SpanTracker<K: Ord + Clone> {
    p: Prime,
    // (pivot key, echelon row with coefficient 1 at pivot, combination of inserted vectors)
    rows: Vec<(K, SparseVec<K>, Vec<u32>)>,
    inserted: usize,
}

impl<K: Ord + Clone> SpanTracker<K> {
    pub fn new(p: Prime) -> Self {
        SpanTracker { p, rows: Vec::new(), inserted: 0 }
    }

    pub fn len(&self) -> usize {
        self.inserted
    }

    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    fn eliminate(&self, v: &SparseVec<K>) -> (SparseVec<K>, Vec<u32>) {
        let p = self.p;
        let mut rest = v.clone();
        let mut combo = vec![0u32; self.inserted];
        for (pivot, row, how) in &self.rows {
            let c = rest.get(pivot).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            for (k, &x) in row {
                let e = rest.entry(k.clone()).or_insert(0);
                *e = p.sub(*e, p.mul(c, x));
                if *e == 0 {
                    rest.remove(k);
                }
            }
            for (slot, &h) in combo.iter_mut().zip(how) {
                *slot = p.add(*slot, p.mul(c, h));
            }
        }
        (rest, combo)
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` is in their span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<u32>> {
        let (rest, combo) = self.eliminate(v);
        rest.is_empty().then_some(combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.eliminate(v).0.is_empty()
    }

    /// Insert `v` if it is independent of what is already there; returns whether it was.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let p = self.p;
        let (mut rest, combo) = self.eliminate(v);
        let Some((pivot, &lead)) = rest.iter().next().map(|(k, c)| (k.clone(), c)) else {
            return false;
        };
        // rest = v - sum combo_i e_i, so the new echelon row is (v - sum combo_i e_i) / lead
        let inv = p.inv(lead);
        for x in rest.values_mut() {
            *x = p.mul(*x, inv);
        }
        let mut how: Vec<u32> = combo.iter().map(|&c| p.neg(p.mul(c, inv))).collect();
        how.push(inv);
        for (_, _, h) in &mut self.rows {
            h.push(0);
        }
        // keep the echelon rows reduced against the new pivot
        for (_, row, h) in &mut self.rows {
            let c = row.get(&pivot).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            for (k, &x) in &rest {
                let e = row.entry(k.clone()).or_insert(0);
                *e = p.sub(*e, p.mul(c, x));
                if *e == 0 {
                    row.remove(k);
                }
            }
            for (slot, &n) in h.iter_mut().zip(&how) {
                *slot = p.sub(*slot, p.mul(c, n));
            }
        }
        self.rows.push((pivot, rest, how));
        self.inserted += 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_kernel_inverse() {
        let p = Prime::THREE;
        let m = Matrix::from_rows(vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // rows 1 and 2 are dependent mod 3
        assert_eq!(m.rank(p), 2);
        let ker = m.kernel(p);
        assert_eq!(ker.len(), 1);
        assert!(m.apply(p, &ker[0]).iter().all(|&x| x == 0));
        assert!(m.inverse(p).is_none());

        let g = Matrix::from_rows(vec![vec![1, 1], vec![0, 2]]);
        let gi = g.inverse(p).unwrap();
        assert_eq!(g.mul(p, &gi), Matrix::identity(2));
    }

    #[test]
    fn span_tracker_coordinates() {
        let p = Prime::new(5).unwrap();
        let mut t: SpanTracker<u32> = SpanTracker::new(p);
        let a: SparseVec<u32> = [(0, 1), (1, 2)].into_iter().collect();
        let b: SparseVec<u32> = [(1, 1), (2, 3)].into_iter().collect();
        assert!(t.insert(&a));
        assert!(t.insert(&b));
        // 2a + 3b
        let v: SparseVec<u32> = [(0, 2), (1, 2 * 2 + 3), (2, 9)]
            .into_iter()
            .map(|(k, x)| (k, x % 5))
            .filter(|&(_, x)| x != 0)
            .collect();
        assert_eq!(t.coordinates(&v), Some(vec![2, 3]));
        assert!(!t.insert(&v));
        let c: SparseVec<u32> = [(2, 1)].into_iter().collect();
        assert_eq!(t.coordinates(&c), None);
    }
}
