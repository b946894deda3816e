use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::model::{Cocharacter, GradedBasis};
use crate::rational::{int, Q};

/// A homogeneous operator of degree `shift` on a truncated graded basis.
///
/// `blocks[d]` maps the degree-`d` stratum to the degree-`d + shift` stratum.
/// A block whose target degree is negative has zero rows. An operator built
/// from scratch is total on source degrees `0..=D - max(0, shift)`; products
/// and sums live on the intersection of their factors' domains.
#[derive(Debug, Clone)]
pub struct GradedOperator {
    basis: Arc<GradedBasis>,
    shift: i64,
    blocks: BTreeMap<usize, SparseMatrix>,
}

impl PartialEq for GradedOperator {
    fn eq(&self, other: &Self) -> bool {
        self.basis.same_space(&other.basis)
            && self.shift == other.shift
            && self.blocks == other.blocks
    }
}

/// Degrees `d` with `d + shift <= D`.
pub(crate) fn natural_domain(max_degree: usize, shift: i64) -> impl Iterator<Item = usize> {
    let top = max_degree as i64 - shift.max(0);
    0..(top + 1).max(0) as usize
}

impl GradedOperator {
    pub(crate) fn from_blocks(
        basis: Arc<GradedBasis>,
        shift: i64,
        blocks: BTreeMap<usize, SparseMatrix>,
    ) -> Result<Self> {
        for (&d, m) in &blocks {
            let rows = basis.dim(d as i64 + shift);
            let cols = basis.dim(d as i64);
            if m.nrows() != rows || m.ncols() != cols || d > basis.max_degree() {
                return Err(Error::Dimension {
                    expected: rows * cols,
                    actual: m.nrows() * m.ncols(),
                });
            }
        }
        Ok(GradedOperator {
            basis,
            shift,
            blocks,
        })
    }

    pub fn zero(basis: Arc<GradedBasis>, shift: i64) -> Self {
        let blocks = natural_domain(basis.max_degree(), shift)
            .map(|d| {
                let m = SparseMatrix::zeros(basis.dim(d as i64 + shift), basis.dim(d as i64));
                (d, m)
            })
            .collect();
        GradedOperator {
            basis,
            shift,
            blocks,
        }
    }

    pub fn identity(basis: Arc<GradedBasis>) -> Self {
        Self::diagonal(basis, |_| Q::one())
    }

    /// Degree-0 operator acting by `eigenvalue(A)` on `|A⟩`.
    pub fn diagonal(basis: Arc<GradedBasis>, eigenvalue: impl Fn(&Cocharacter) -> Q) -> Self {
        let blocks = basis
            .iter()
            .map(|(d, stratum)| {
                let mut m = SparseMatrix::zeros(stratum.len(), stratum.len());
                for (i, a) in stratum.iter().enumerate() {
                    m.set(i, i, eigenvalue(a));
                }
                (d, m)
            })
            .collect();
        GradedOperator {
            basis,
            shift: 0,
            blocks,
        }
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn domain(&self) -> Vec<usize> {
        self.blocks.keys().copied().collect()
    }

    pub fn block(&self, d: usize) -> Option<&SparseMatrix> {
        self.blocks.get(&d)
    }

    pub fn blocks(&self) -> &BTreeMap<usize, SparseMatrix> {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(SparseMatrix::is_zero)
    }

    /// Overwrites one matrix entry. Used to corrupt operators in fault-injection tests.
    pub fn set_entry(&mut self, degree: usize, row: usize, col: usize, value: Q) -> Result<()> {
        let m = self
            .blocks
            .get_mut(&degree)
            .ok_or(Error::Truncation { degree })?;
        if row >= m.nrows() || col >= m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows().max(m.ncols()),
                actual: row.max(col),
            });
        }
        m.set(row, col, value);
        Ok(())
    }

    /// Nonzero entries as `(source degree, row, col, value)`, sorted.
    pub fn triples(&self) -> Vec<(usize, usize, usize, &Q)> {
        self.blocks
            .iter()
            .flat_map(|(&d, m)| m.triples().into_iter().map(move |(i, j, v)| (d, i, j, v)))
            .collect()
    }

    fn check_space(&self, other: &GradedOperator) -> Result<()> {
        if self.basis.same_space(&other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    fn check_shift(&self, other: &GradedOperator) -> Result<()> {
        if self.shift != other.shift {
            return Err(Error::InvalidArgument(format!(
                "cannot add operators of degree {} and {}",
                self.shift, other.shift
            )));
        }
        Ok(())
    }

    /// `self ∘ rhs`, on the source degrees where both factors are defined.
    pub fn compose(&self, rhs: &GradedOperator) -> Result<GradedOperator> {
        self.check_space(rhs)?;
        let shift = self.shift + rhs.shift;
        let max = self.basis.max_degree() as i64;
        let mut blocks = BTreeMap::new();
        for (&d, inner) in &rhs.blocks {
            let mid = d as i64 + rhs.shift;
            let target = mid + self.shift;
            if target > max {
                continue;
            }
            if mid < 0 {
                // rhs lands in the zero space
                let rows = self.basis.dim(target);
                blocks.insert(d, SparseMatrix::zeros(rows, inner.ncols()));
            } else if let Some(outer) = self.blocks.get(&(mid as usize)) {
                blocks.insert(d, outer.mul(inner)?);
            }
        }
        Self::from_blocks(self.basis.clone(), shift, blocks)
    }

    pub fn add(&self, rhs: &GradedOperator) -> Result<GradedOperator> {
        self.check_space(rhs)?;
        self.check_shift(rhs)?;
        let mut blocks = BTreeMap::new();
        for (d, a) in &self.blocks {
            if let Some(b) = rhs.blocks.get(d) {
                blocks.insert(*d, a.add(b)?);
            }
        }
        Ok(GradedOperator {
            basis: self.basis.clone(),
            shift: self.shift,
            blocks,
        })
    }

    pub fn scale(&self, c: &Q) -> GradedOperator {
        GradedOperator {
            basis: self.basis.clone(),
            shift: self.shift,
            blocks: self.blocks.iter().map(|(d, m)| (*d, m.scale(c))).collect(),
        }
    }

    pub fn sub(&self, rhs: &GradedOperator) -> Result<GradedOperator> {
        self.add(&rhs.scale(&int(-1)))
    }

    /// `[self, rhs] = self∘rhs - rhs∘self` on the common domain.
    pub fn commutator(&self, rhs: &GradedOperator) -> Result<GradedOperator> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    /// First entry where `self` and `expected` differ on their common domain.
    pub fn first_difference(&self, expected: &GradedOperator) -> Result<Option<EntryDifference>> {
        let diff = self.sub(expected)?;
        for (&d, m) in &diff.blocks {
            if let Some(&(row, col, _)) = m.triples().first() {
                return Ok(Some(EntryDifference {
                    degree: d,
                    row,
                    col,
                    expected: expected.blocks[&d].get(row, col),
                    actual: self.blocks[&d].get(row, col),
                }));
            }
        }
        Ok(None)
    }

    pub fn apply(&self, v: &GradedVector) -> Result<GradedVector> {
        let mut out = GradedVector::default();
        for (&d, coords) in &v.components {
            let m = self.blocks.get(&d).ok_or(Error::Truncation { degree: d })?;
            let target = d as i64 + self.shift;
            if target < 0 {
                continue;
            }
            out.insert(target as usize, m.mul_vec(coords)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDifference {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub expected: Q,
    pub actual: Q,
}

/// Finite sum of homogeneous components, each a coordinate vector in the
/// canonical order of its stratum. All-zero components are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedVector {
    components: BTreeMap<usize, Vec<Q>>,
}

impl GradedVector {
    pub fn basis_vector(basis: &GradedBasis, a: &Cocharacter) -> Result<Self> {
        let pos = basis
            .position(a)
            .ok_or_else(|| Error::InvalidArgument(format!("{a} is not in the truncated basis")))?;
        let d = a.degree() as usize;
        let mut coords = vec![Q::zero(); basis.dim(d as i64)];
        coords[pos] = Q::one();
        Ok(Self::homogeneous(d, coords))
    }

    pub fn homogeneous(degree: usize, coords: Vec<Q>) -> Self {
        let mut v = GradedVector::default();
        v.insert(degree, coords);
        v
    }

    fn insert(&mut self, degree: usize, coords: Vec<Q>) {
        if coords.iter().all(Zero::is_zero) {
            return;
        }
        match self.components.get_mut(&degree) {
            Some(existing) => {
                for (x, y) in existing.iter_mut().zip(coords) {
                    *x += y;
                }
                if existing.iter().all(Zero::is_zero) {
                    self.components.remove(&degree);
                }
            }
            None => {
                self.components.insert(degree, coords);
            }
        }
    }

    pub fn component(&self, degree: usize) -> Option<&[Q]> {
        self.components.get(&degree).map(Vec::as_slice)
    }

    pub fn components(&self) -> &BTreeMap<usize, Vec<Q>> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        for (&d, c) in &other.components {
            out.insert(d, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> GradedVector {
        let mut out = GradedVector::default();
        for (&d, coords) in &self.components {
            out.insert(d, coords.iter().map(|x| x * c).collect());
        }
        out
    }

    /// Coefficients by basis label, skipping zeros.
    pub fn terms<'a>(&'a self, basis: &'a GradedBasis) -> Vec<(&'a Cocharacter, &'a Q)> {
        self.components
            .iter()
            .flat_map(|(&d, coords)| {
                basis
                    .stratum(d as i64)
                    .iter()
                    .zip(coords)
                    .filter(|(_, c)| !c.is_zero())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_graded_basis, Params};

    fn basis(n: usize, k: usize, d: usize) -> Arc<GradedBasis> {
        Arc::new(build_graded_basis(&Params::new(n, k).unwrap(), d).unwrap())
    }

    #[test]
    fn natural_domains() {
        assert_eq!(natural_domain(3, 1).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(natural_domain(3, -2).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(natural_domain(1, 2).count(), 0);
    }

    #[test]
    fn identity_apply() {
        let b = basis(2, 3, 4);
        let id = GradedOperator::identity(b.clone());
        let v = GradedVector::basis_vector(&b, &Cocharacter::new(vec![1, 2]))
            .unwrap()
            .add(
                &GradedVector::basis_vector(&b, &Cocharacter::new(vec![0, 1]))
                    .unwrap()
                    .scale(&int(5)),
            );
        assert_eq!(id.apply(&v).unwrap(), v);
    }

    #[test]
    fn zero_and_scale() {
        let b = basis(2, 3, 4);
        let id = GradedOperator::identity(b.clone());
        assert!(id.scale(&int(0)).is_zero());
        assert!(id.commutator(&id).unwrap().is_zero());
        assert!(GradedOperator::zero(b, 1).is_zero());
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let a = GradedOperator::identity(basis(2, 3, 4));
        let b = GradedOperator::identity(basis(2, 3, 5));
        assert_eq!(a.compose(&b), Err(Error::BasisMismatch));
        let c = GradedOperator::identity(basis(2, 5, 4));
        assert_eq!(a.add(&c), Err(Error::BasisMismatch));
    }

    #[test]
    fn apply_outside_domain() {
        let b = basis(2, 3, 3);
        let raise = GradedOperator::zero(b.clone(), 1);
        let top = GradedVector::basis_vector(&b, &Cocharacter::new(vec![0, 3])).unwrap();
        assert_eq!(raise.apply(&top), Err(Error::Truncation { degree: 3 }));
    }
}
