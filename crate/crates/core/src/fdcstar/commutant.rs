use std::sync::Arc;

use num::complex::Complex64;
use num::Zero;

use super::element::same_algebra;
use super::linalg::RowSpace;
use super::{AlgebraElement, FiniteEquivRelation};

/// The linear span of some elements of one algebra.
#[derive(Debug, Clone)]
pub struct Span {
    relation: Arc<FiniteEquivRelation>,
    space: RowSpace,
}

impl Span {
    pub fn of(relation: &Arc<FiniteEquivRelation>, elements: &[AlgebraElement], tol: f64) -> Self {
        let mut space = RowSpace::new(relation.dimension(), tol);
        for f in elements {
            assert!(same_algebra(f.relation(), relation), "element outside the algebra");
            space.insert(f.entries().to_vec());
        }
        Self {
            relation: relation.clone(),
            space,
        }
    }

    pub fn dimension(&self) -> usize {
        self.space.rank()
    }

    pub fn contains(&self, f: &AlgebraElement) -> bool {
        **f.relation() == *self.relation && self.space.contains(f.entries())
    }
}

/// A basis of the commutant of a family of elements.
#[derive(Debug, Clone)]
pub struct Commutant {
    pub basis: Vec<AlgebraElement>,
}

impl Commutant {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// `{m : [m, g] = 0 for every generator g}` inside the ambient algebra, as
/// the null space of the stacked commutator equations.
pub fn brute_force_commutant(ambient: &Arc<FiniteEquivRelation>, generators: &[AlgebraElement]) -> Commutant {
    brute_force_commutant_with_tol(ambient, generators, 1e-9)
}

pub fn brute_force_commutant_with_tol(
    ambient: &Arc<FiniteEquivRelation>,
    generators: &[AlgebraElement],
    tol: f64,
) -> Commutant {
    let dim = ambient.dimension();
    let units = AlgebraElement::basis(ambient);
    let mut space = RowSpace::new(dim, tol);
    for g in generators {
        assert!(
            same_algebra(g.relation(), ambient),
            "generator outside the ambient algebra"
        );
        let mut rows = vec![vec![Complex64::zero(); dim]; dim];
        let mut touched = vec![false; dim];
        for (k, e) in units.iter().enumerate() {
            for (i, z) in e.commutator(g).nonzeros() {
                rows[i][k] += z;
                touched[i] = true;
            }
        }
        for (row, hit) in rows.into_iter().zip(touched) {
            if hit {
                space.insert(row);
            }
        }
        if space.rank() == dim {
            break;
        }
    }
    let basis = space
        .null_space()
        .into_iter()
        .map(|u| AlgebraElement::from_entries(ambient, u).expect("ambient dimension"))
        .collect();
    Commutant { basis }
}
