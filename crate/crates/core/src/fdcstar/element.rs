use std::sync::Arc;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;

use super::{FdError, FiniteEquivRelation};

/// An element of `C*(R)`: one complex entry per pair of `R`, in coordinate
/// order. Entries off `R` are zero and not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    relation: Arc<FiniteEquivRelation>,
    entries: Vec<Complex64>,
}

pub(super) fn same_algebra(a: &Arc<FiniteEquivRelation>, b: &Arc<FiniteEquivRelation>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl AlgebraElement {
    pub fn zero(relation: &Arc<FiniteEquivRelation>) -> Self {
        Self {
            entries: vec![Complex64::zero(); relation.dimension()],
            relation: relation.clone(),
        }
    }

    pub fn identity(relation: &Arc<FiniteEquivRelation>) -> Self {
        Self::from_fn(relation, |x, y| {
            if x == y {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            }
        })
    }

    /// The matrix unit `e(x, y)`.
    pub fn unit(relation: &Arc<FiniteEquivRelation>, x: usize, y: usize) -> Result<Self, FdError> {
        let k = relation.coord(x, y).ok_or_else(|| FdError::NotRelated {
            x: relation.point_id(x).to_string(),
            y: relation.point_id(y).to_string(),
        })?;
        Ok(Self::basis_element(relation, k))
    }

    /// The matrix unit at coordinate `k`.
    pub fn basis_element(relation: &Arc<FiniteEquivRelation>, k: usize) -> Self {
        let mut e = Self::zero(relation);
        e.entries[k] = Complex64::new(1.0, 0.0);
        e
    }

    /// Canonical matrix units in coordinate order.
    pub fn basis(relation: &Arc<FiniteEquivRelation>) -> Vec<Self> {
        (0..relation.dimension())
            .map(|k| Self::basis_element(relation, k))
            .collect()
    }

    pub fn from_fn(relation: &Arc<FiniteEquivRelation>, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            entries: relation.pairs().iter().map(|&(x, y)| f(x, y)).collect(),
            relation: relation.clone(),
        }
    }

    pub fn from_entries(relation: &Arc<FiniteEquivRelation>, entries: Vec<Complex64>) -> Result<Self, FdError> {
        if entries.len() != relation.dimension() {
            return Err(FdError::ShapeMismatch(format!(
                "{} entries for an algebra of dimension {}",
                entries.len(),
                relation.dimension()
            )));
        }
        Ok(Self {
            relation: relation.clone(),
            entries,
        })
    }

    /// Reads a dense `|X| × |X|` matrix, rejecting entries off `R` above `tol`.
    pub fn from_dense(relation: &Arc<FiniteEquivRelation>, m: &DMatrix<Complex64>, tol: f64) -> Result<Self, FdError> {
        let n = relation.point_count();
        if m.nrows() != n || m.ncols() != n {
            return Err(FdError::ShapeMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        for x in 0..n {
            for y in 0..n {
                if !relation.related(x, y) && m[(x, y)].norm() > tol {
                    return Err(FdError::NotRelated {
                        x: relation.point_id(x).to_string(),
                        y: relation.point_id(y).to_string(),
                    });
                }
            }
        }
        Ok(Self::from_fn(relation, |x, y| m[(x, y)]))
    }

    pub fn relation(&self) -> &Arc<FiniteEquivRelation> {
        &self.relation
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Coordinates and values of the non-zero entries.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.entries.iter().copied().enumerate().filter(|(_, z)| !z.is_zero())
    }

    /// `f(x, y)`, zero off `R`.
    pub fn get(&self, x: usize, y: usize) -> Complex64 {
        self.relation.coord(x, y).map_or(Complex64::zero(), |k| self.entries[k])
    }

    pub fn set(&mut self, x: usize, y: usize, value: Complex64) -> Result<(), FdError> {
        let k = self.relation.coord(x, y).ok_or_else(|| FdError::NotRelated {
            x: self.relation.point_id(x).to_string(),
            y: self.relation.point_id(y).to_string(),
        })?;
        self.entries[k] = value;
        Ok(())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.relation.point_count();
        let mut m = DMatrix::zeros(n, n);
        for (k, &(x, y)) in self.relation.pairs().iter().enumerate() {
            m[(x, y)] = self.entries[k];
        }
        m
    }

    /// The full matrix block of class `v`, indexed by positions in the class.
    pub fn block(&self, v: usize) -> DMatrix<Complex64> {
        let s = self.relation.members(v).len();
        let o = self.relation.block_offset(v);
        DMatrix::from_fn(s, s, |i, j| self.entries[o + i * s + j])
    }

    fn check_same(&self, other: &Self) {
        assert!(
            same_algebra(&self.relation, &other.relation),
            "elements of different algebras"
        );
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = Self::zero(&self.relation);
        for v in 0..self.relation.class_count() {
            let s = self.relation.members(v).len();
            let o = self.relation.block_offset(v);
            for i in 0..s {
                for k in 0..s {
                    let a = self.entries[o + i * s + k];
                    if a.is_zero() {
                        continue;
                    }
                    for j in 0..s {
                        let b = other.entries[o + k * s + j];
                        if !b.is_zero() {
                            out.entries[o + i * s + j] += a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        Self {
            relation: self.relation.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        Self {
            relation: self.relation.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            relation: self.relation.clone(),
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(&self.relation, |x, y| self.get(y, x).conj())
    }

    /// `fg − gf`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.check_same(other);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.relation.point_count()).map(|x| self.get(x, x)).sum()
    }

    /// Non-zero entries as `(x, y, re, im)` with point ids.
    pub fn to_entry_list(&self) -> Vec<(String, String, f64, f64)> {
        self.nonzeros()
            .map(|(k, z)| {
                let (x, y) = self.relation.pair(k);
                (
                    self.relation.point_id(x).to_string(),
                    self.relation.point_id(y).to_string(),
                    z.re,
                    z.im,
                )
            })
            .collect()
    }
}
