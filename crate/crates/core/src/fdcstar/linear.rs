use std::sync::Arc;

use num::complex::Complex64;
use num::Zero;

use super::element::same_algebra;
use super::{AlgebraElement, FdError, FiniteEquivRelation};

/// A linear map `C*(R₀) → C*(R₁)` stored by the images of the canonical
/// matrix units, each as a sparse column.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    domain: Arc<FiniteEquivRelation>,
    codomain: Arc<FiniteEquivRelation>,
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl LinearMap {
    /// The map sending the unit at coordinate `k` to `image(k)`.
    pub fn from_images(
        domain: &Arc<FiniteEquivRelation>,
        codomain: &Arc<FiniteEquivRelation>,
        mut image: impl FnMut(usize) -> AlgebraElement,
    ) -> Self {
        let columns = (0..domain.dimension())
            .map(|k| {
                let out = image(k);
                assert!(same_algebra(out.relation(), codomain), "image outside the codomain");
                out.nonzeros().collect()
            })
            .collect();
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            columns,
        }
    }

    /// The map from explicit sparse columns; duplicate coordinates add up.
    pub fn from_columns(
        domain: &Arc<FiniteEquivRelation>,
        codomain: &Arc<FiniteEquivRelation>,
        columns: Vec<Vec<(usize, Complex64)>>,
    ) -> Result<Self, FdError> {
        if columns.len() != domain.dimension() {
            return Err(FdError::ShapeMismatch(format!(
                "{} columns for a domain of dimension {}",
                columns.len(),
                domain.dimension()
            )));
        }
        let mut merged = Vec::with_capacity(columns.len());
        for column in columns {
            let mut dense = vec![Complex64::zero(); codomain.dimension()];
            for (i, z) in column {
                *dense.get_mut(i).ok_or_else(|| {
                    FdError::ShapeMismatch(format!(
                        "row {i} outside a codomain of dimension {}",
                        codomain.dimension()
                    ))
                })? += z;
            }
            merged.push(dense.into_iter().enumerate().filter(|(_, z)| !z.is_zero()).collect());
        }
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            columns: merged,
        })
    }

    pub fn identity(relation: &Arc<FiniteEquivRelation>) -> Self {
        Self {
            domain: relation.clone(),
            codomain: relation.clone(),
            columns: (0..relation.dimension())
                .map(|k| vec![(k, Complex64::new(1.0, 0.0))])
                .collect(),
        }
    }

    pub fn domain(&self) -> &Arc<FiniteEquivRelation> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteEquivRelation> {
        &self.codomain
    }

    /// Image of the unit at coordinate `k`, as sparse entries.
    pub fn column(&self, k: usize) -> &[(usize, Complex64)] {
        &self.columns[k]
    }

    pub fn image_of_unit(&self, k: usize) -> AlgebraElement {
        let mut entries = vec![Complex64::zero(); self.codomain.dimension()];
        for &(i, z) in &self.columns[k] {
            entries[i] = z;
        }
        AlgebraElement::from_entries(&self.codomain, entries).expect("codomain dimension")
    }

    pub fn apply(&self, f: &AlgebraElement) -> Result<AlgebraElement, FdError> {
        if !same_algebra(f.relation(), &self.domain) {
            return Err(FdError::ShapeMismatch("element outside the domain".into()));
        }
        let mut entries = vec![Complex64::zero(); self.codomain.dimension()];
        for (k, a) in f.nonzeros() {
            for &(i, z) in &self.columns[k] {
                entries[i] += a * z;
            }
        }
        AlgebraElement::from_entries(&self.codomain, entries)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap, FdError> {
        if !same_algebra(&inner.codomain, &self.domain) {
            return Err(FdError::ShapeMismatch("maps do not compose".into()));
        }
        let columns = inner
            .columns
            .iter()
            .map(|col| {
                let mut dense = vec![Complex64::zero(); self.codomain.dimension()];
                for &(j, a) in col {
                    for &(i, z) in &self.columns[j] {
                        dense[i] += a * z;
                    }
                }
                dense.into_iter().enumerate().filter(|(_, z)| !z.is_zero()).collect()
            })
            .collect();
        Ok(LinearMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            columns,
        })
    }

    /// Largest entry distance between the two maps on the canonical basis.
    pub fn distance(&self, other: &LinearMap) -> Result<f64, FdError> {
        if !same_algebra(&self.domain, &other.domain) || !same_algebra(&self.codomain, &other.codomain) {
            return Err(FdError::ShapeMismatch("maps between different algebras".into()));
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.columns.iter().zip(&other.columns) {
            let mut dense = vec![Complex64::zero(); self.codomain.dimension()];
            for &(i, z) in a {
                dense[i] += z;
            }
            for &(i, z) in b {
                dense[i] -= z;
            }
            worst = dense.iter().map(|z| z.norm()).fold(worst, f64::max);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_composition() {
        let r = Arc::new(FiniteEquivRelation::from_ids(&[("a", "v"), ("b", "v")]).unwrap());
        let id = LinearMap::identity(&r);
        let transpose = LinearMap::from_images(&r, &r, |k| {
            let (x, y) = r.pair(k);
            AlgebraElement::unit(&r, y, x).unwrap()
        });
        assert_eq!(transpose.compose(&transpose).unwrap().distance(&id).unwrap(), 0.0);
        let f = AlgebraElement::from_fn(&r, |x, y| Complex64::new(x as f64, y as f64));
        let t = transpose.apply(&f).unwrap();
        assert_eq!(t.get(0, 1), f.get(1, 0));
    }
}
