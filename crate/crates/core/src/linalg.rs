//! Sparse exact-rational matrices and fraction-free kernel computation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Column-major sparse matrix. Column `j` is the image of basis vector `j`.
/// Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<BTreeMap<usize, Q>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.cols[col].get(&row).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Q) {
        assert!(
            row < self.rows && col < self.cols.len(),
            "index out of range"
        );
        if value.is_zero() {
            self.cols[col].remove(&row);
        } else {
            self.cols[col].insert(row, value);
        }
    }

    /// Adds `value` into `(row, col)`, dropping the entry if it cancels.
    pub fn add_to(&mut self, row: usize, col: usize, value: &Q) {
        let new = self.get(row, col) + value;
        self.set(row, col, new);
    }

    pub fn column(&self, col: usize) -> &BTreeMap<usize, Q> {
        &self.cols[col]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// Nonzero entries as `(row, col, value)`, sorted by `(row, col)`.
    pub fn triples(&self) -> Vec<(usize, usize, &Q)> {
        let mut out: Vec<_> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(&i, v)| (i, j, v)))
            .collect();
        out.sort_by_key(|&(i, j, _)| (i, j));
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.ncols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (&i, v) in col {
                out[i][j] = v.clone();
            }
        }
        out
    }

    fn check_same_shape(&self, other: &SparseMatrix) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                actual: other.rows,
            });
        }
        if self.ncols() != other.ncols() {
            return Err(Error::Dimension {
                expected: self.ncols(),
                actual: other.ncols(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (j, col) in other.cols.iter().enumerate() {
            for (&i, v) in col {
                out.add_to(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> SparseMatrix {
        if c.is_zero() {
            return Self::zeros(self.rows, self.ncols());
        }
        SparseMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(&i, v)| (i, v * c)).collect())
                .collect(),
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols() != rhs.rows {
            return Err(Error::Dimension {
                expected: self.ncols(),
                actual: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.ncols());
        for (j, rcol) in rhs.cols.iter().enumerate() {
            for (&mid, rv) in rcol {
                for (&i, lv) in &self.cols[mid] {
                    out.add_to(i, j, &(lv * rv));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.ncols() {
            return Err(Error::Dimension {
                expected: self.ncols(),
                actual: v.len(),
            });
        }
        let mut out = vec![Q::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (&i, a) in col {
                out[i] += a * &v[j];
            }
        }
        Ok(out)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&SparseMatrix]) -> Result<SparseMatrix> {
        let ncols = blocks.first().map_or(0, |b| b.ncols());
        let mut out = Self::zeros(blocks.iter().map(|b| b.rows).sum(), ncols);
        let mut offset = 0;
        for b in blocks {
            if b.ncols() != ncols {
                return Err(Error::Dimension {
                    expected: ncols,
                    actual: b.ncols(),
                });
            }
            for (j, col) in b.cols.iter().enumerate() {
                for (&i, v) in col {
                    out.cols[j].insert(offset + i, v.clone());
                }
            }
            offset += b.rows;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        Echelon::of(self).pivots.len()
    }

    /// Basis of the right kernel. Each vector has a `1` in its own free
    /// column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        Echelon::of(self).kernel()
    }
}

/// Integer row-reduced form: every pivot column is zero outside its pivot row,
/// and each row is divided by the gcd of its entries after every update.
struct Echelon {
    ncols: usize,
    rows: Vec<Vec<BigInt>>,
    // (row, column) of each pivot, in increasing column order.
    pivots: Vec<(usize, usize)>,
}

impl Echelon {
    fn of(m: &SparseMatrix) -> Self {
        let ncols = m.ncols();
        let dense = m.to_dense();
        let mut rows: Vec<Vec<BigInt>> = dense
            .into_iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                let mut r: Vec<BigInt> =
                    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
                remove_content(&mut r);
                r
            })
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();

        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..ncols {
            let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(next, found);
            let (head, tail) = rows.split_at_mut(next);
            let (pivot_row, tail) = tail.split_first_mut().expect("pivot row exists");
            let p = pivot_row[col].clone();
            for row in head.iter_mut().chain(tail.iter_mut()) {
                let a = row[col].clone();
                if a.is_zero() {
                    continue;
                }
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = &*x * &p - &a * y;
                }
                remove_content(row);
            }
            pivots.push((next, col));
            next += 1;
        }
        rows.truncate(next);
        Echelon {
            ncols,
            rows,
            pivots,
        }
    }

    fn kernel(&self) -> Vec<Vec<Q>> {
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|&(_, c)| c).collect();
        (0..self.ncols)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![Q::zero(); self.ncols];
                v[free] = Q::one();
                for &(r, c) in &self.pivots {
                    let row = &self.rows[r];
                    v[c] = -Q::new(row[free].clone(), row[c].clone());
                }
                v
            })
            .collect()
    }
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
    // keep a canonical sign for the leading entry
    if let Some(first) = row.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn kernel_of_small_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ker = a.nullspace();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rational_entries() {
        let a = SparseMatrix::from_dense(&[vec![frac(1, 2), frac(-1, 3)]]);
        let ker = a.nullspace();
        assert_eq!(ker, vec![vec![frac(2, 3), int(1)]]);
    }

    #[test]
    fn empty_shapes() {
        let a = SparseMatrix::zeros(0, 3);
        assert_eq!(a.nullspace().len(), 3);
        let b = SparseMatrix::zeros(2, 0);
        assert!(b.nullspace().is_empty());
        assert_eq!(b.rank(), 0);
    }

    #[test]
    fn mul_and_vstack() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let b = m(&[&[1, -1], &[0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2));
        assert!(a.mul(&m(&[&[1, 2, 3]])).is_err());
        let s = SparseMatrix::vstack(&[&a, &b]).unwrap();
        assert_eq!(s.nrows(), 4);
        assert_eq!(s.get(2, 1), int(-1));
    }

    #[test]
    fn zeros_are_not_stored() {
        let mut a = SparseMatrix::zeros(2, 2);
        a.set(0, 0, int(3));
        a.add_to(0, 0, &int(-3));
        assert!(a.is_zero());
        assert_eq!(a.nnz(), 0);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 20), rows in 1usize..5) {
            let cols = 20 / rows;
            let dense: Vec<Vec<Q>> = (0..rows)
                .map(|i| (0..cols).map(|j| frac(entries[i * cols + j], 1 + (i + j) as i64 % 3)).collect())
                .collect();
            let a = SparseMatrix::from_dense(&dense);
            let ker = a.nullspace();
            prop_assert_eq!(a.rank() + ker.len(), cols);
            for v in &ker {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
        }
    }
}
