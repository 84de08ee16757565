use std::sync::Arc;

use nalgebra::DMatrix;
use num::complex::Complex64;

use super::{FdError, FiniteEquivRelation};

const IDENTITY_TOLERANCE: f64 = 1e-9;

/// A `𝕋`-valued function on a finite equivalence relation `S`, one value
/// per pair in coordinate order.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusCocycle {
    relation: Arc<FiniteEquivRelation>,
    values: Vec<Complex64>,
}

impl TorusCocycle {
    pub fn from_fn(relation: &Arc<FiniteEquivRelation>, mut c: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            values: relation.pairs().iter().map(|&(x, y)| c(x, y)).collect(),
            relation: relation.clone(),
        }
    }

    /// The coboundary `b(x) conj(b(y))`.
    pub fn coboundary(relation: &Arc<FiniteEquivRelation>, b: &[Complex64]) -> Self {
        Self::from_fn(relation, |x, y| b[x] * b[y].conj())
    }

    pub fn relation(&self) -> &Arc<FiniteEquivRelation> {
        &self.relation
    }

    /// `c(x, y)` for related `x`, `y`.
    pub fn get(&self, x: usize, y: usize) -> Option<Complex64> {
        self.relation.coord(x, y).map(|k| self.values[k])
    }

    /// The first failure of `|c| = 1` or `c(x, y) c(y, z) = c(x, z)`.
    pub fn violation(&self, tol: f64) -> Option<FdError> {
        let rel = &self.relation;
        let name = |x: usize| rel.point_id(x).to_string();
        for (k, &(x, y)) in rel.pairs().iter().enumerate() {
            if (self.values[k].norm() - 1.0).abs() > tol {
                return Some(FdError::NotUnitModulus { x: name(x), y: name(y) });
            }
        }
        for v in 0..rel.class_count() {
            for &x in rel.members(v) {
                for &y in rel.members(v) {
                    for &z in rel.members(v) {
                        let lhs = self.get(x, y).unwrap() * self.get(y, z).unwrap();
                        if (lhs - self.get(x, z).unwrap()).norm() > tol {
                            return Some(FdError::CocycleViolation {
                                x: name(x),
                                y: name(y),
                                z: name(z),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// `max |c(x, y) − b(x) conj(b(y))|` over `S`.
    pub fn reconstruction_error(&self, b: &[Complex64]) -> f64 {
        self.relation
            .pairs()
            .iter()
            .zip(&self.values)
            .map(|(&(x, y), c)| (c - b[x] * b[y].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// `b : X → 𝕋` with `c(x, y) = b(x) conj(b(y))`.
///
/// The first member of each class (in the order of `X`) is the
/// representative with `b = 1`; elsewhere `b(x) = c(x, rep)`.
pub fn trivialize_cocycle(tc: &TorusCocycle) -> Result<Vec<Complex64>, FdError> {
    if let Some(err) = tc.violation(IDENTITY_TOLERANCE) {
        return Err(err);
    }
    let rel = &tc.relation;
    Ok((0..rel.point_count())
        .map(|x| {
            let rep = rel.members(rel.class_of(x))[0];
            tc.get(x, rep).expect("same class")
        })
        .collect())
}

/// A family of matrices `e(x, y)`, `(x, y) ∈ R`, all of one size.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixUnits {
    relation: Arc<FiniteEquivRelation>,
    units: Vec<DMatrix<Complex64>>,
}

impl MatrixUnits {
    pub fn new(relation: &Arc<FiniteEquivRelation>, units: Vec<DMatrix<Complex64>>) -> Result<Self, FdError> {
        if units.len() != relation.dimension() {
            return Err(FdError::ShapeMismatch(format!(
                "{} matrices for {} pairs",
                units.len(),
                relation.dimension()
            )));
        }
        if let Some(first) = units.first() {
            let n = first.nrows();
            if units.iter().any(|u| u.nrows() != n || u.ncols() != n) {
                return Err(FdError::ShapeMismatch("matrix units of different sizes".into()));
            }
        }
        Ok(Self {
            relation: relation.clone(),
            units,
        })
    }

    /// `e(x, y) = E_xy` in `M_|X|`.
    pub fn standard(relation: &Arc<FiniteEquivRelation>) -> Self {
        let n = relation.point_count();
        let units = relation
            .pairs()
            .iter()
            .map(|&(x, y)| {
                let mut m = DMatrix::zeros(n, n);
                m[(x, y)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect();
        Self {
            relation: relation.clone(),
            units,
        }
    }

    pub fn relation(&self) -> &Arc<FiniteEquivRelation> {
        &self.relation
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&DMatrix<Complex64>> {
        self.relation.coord(x, y).map(|k| &self.units[k])
    }

    /// Every failure of `e(x, y)* = e(y, x)` and
    /// `e(x, y) e(z, w) = δ_yz e(x, w)` on the relation.
    pub fn identity_violations(&self, tol: f64) -> Vec<String> {
        let rel = &self.relation;
        let name = |x: usize| rel.point_id(x);
        let mut out = Vec::new();
        for &(x, y) in rel.pairs() {
            let exy = self.get(x, y).unwrap();
            if (exy.adjoint() - self.get(y, x).unwrap()).norm() > tol {
                out.push(format!("e({},{})* != e({},{})", name(x), name(y), name(y), name(x)));
            }
            for &(z, w) in rel.pairs() {
                let prod = exy * self.get(z, w).unwrap();
                let dev = if y == z {
                    (prod - self.get(x, w).unwrap()).norm()
                } else {
                    prod.norm()
                };
                if dev > tol {
                    out.push(format!(
                        "e({},{}) e({},{}) off by {dev:.3e}",
                        name(x),
                        name(y),
                        name(z),
                        name(w)
                    ));
                }
            }
        }
        out
    }
}

/// Extends a matrix unit given on a subrelation `S ⊂ R` to all of `R`.
///
/// Each partial unit must be a phase multiple of the reference unit; the
/// phases form a cocycle on `S`, trivialised as `b`, and the output is
/// `e(x, y) = b(x) ē(x, y) conj(b(y))`, which agrees with the input on `S`.
pub fn extend_matrix_unit(partial: &MatrixUnits, reference: &MatrixUnits) -> Result<MatrixUnits, FdError> {
    let tol = IDENTITY_TOLERANCE;
    let s = partial.relation();
    let r = reference.relation();
    if !s.is_subrelation_of(r) {
        return Err(FdError::NotPartialUnit(
            "partial units live on a relation not contained in R".into(),
        ));
    }
    let bad = reference.identity_violations(tol);
    if let Some(first) = bad.first() {
        return Err(FdError::NotPartialUnit(format!("reference units fail: {first}")));
    }
    let bad = partial.identity_violations(tol);
    if let Some(first) = bad.first() {
        return Err(FdError::NotPartialUnit(first.clone()));
    }
    let mut phases = Vec::with_capacity(s.dimension());
    for &(x, y) in s.pairs() {
        let e = partial.get(x, y).unwrap();
        let ref_e = reference.get(x, y).unwrap();
        let c = ref_e.dotc(e) / ref_e.dotc(ref_e);
        if (e - ref_e * c).norm() > tol {
            return Err(FdError::NotPartialUnit(format!(
                "e({},{}) is not a multiple of the reference unit",
                s.point_id(x),
                s.point_id(y)
            )));
        }
        phases.push(c);
    }
    let tc = TorusCocycle {
        relation: s.clone(),
        values: phases,
    };
    let b = trivialize_cocycle(&tc)?;
    let units = r
        .pairs()
        .iter()
        .map(|&(x, y)| reference.get(x, y).unwrap() * (b[x] * b[y].conj()))
        .collect();
    MatrixUnits::new(r, units)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phase(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, t)
    }

    #[test]
    fn trivial_cocycle() {
        let r = Arc::new(FiniteEquivRelation::from_ids(&[("a", "v"), ("b", "v"), ("c", "w")]).unwrap());
        let tc = TorusCocycle::from_fn(&r, |_, _| Complex64::new(1.0, 0.0));
        assert!(trivialize_cocycle(&tc)
            .unwrap()
            .iter()
            .all(|b| *b == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn coboundary_recovered_up_to_class_phase() {
        let r = Arc::new(FiniteEquivRelation::from_ids(&[("a", "v"), ("b", "v"), ("c", "w"), ("d", "w")]).unwrap());
        let b0 = [phase(0.3), phase(1.1), phase(-2.0), phase(0.7)];
        let tc = TorusCocycle::coboundary(&r, &b0);
        let b = trivialize_cocycle(&tc).unwrap();
        assert!(tc.reconstruction_error(&b) < 1e-12);
        let ratio_v = b[0] / b0[0];
        assert!((b[1] / b0[1] - ratio_v).norm() < 1e-12);
        assert_eq!(b[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn broken_cocycle_names_a_triple() {
        let r = Arc::new(FiniteEquivRelation::from_ids(&[("a", "v"), ("b", "v"), ("c", "v")]).unwrap());
        let tc = TorusCocycle::from_fn(&r, |x, y| match (x, y) {
            (0, 1) => phase(0.5),
            (1, 0) => phase(-0.5),
            _ => Complex64::new(1.0, 0.0),
        });
        assert!(matches!(trivialize_cocycle(&tc), Err(FdError::CocycleViolation { .. })));
    }

    #[test]
    fn diagonal_partial_units_extend_to_reference() {
        let r = Arc::new(FiniteEquivRelation::from_ids(&[("a", "v"), ("b", "v"), ("c", "w")]).unwrap());
        let reference = MatrixUnits::standard(&r);
        let diag = Arc::new(
            FiniteEquivRelation::new(
                r.pairs()
                    .iter()
                    .filter(|(x, y)| x == y)
                    .map(|&(x, _)| r.point_id(x).to_string())
                    .collect(),
                vec!["0".into(), "1".into(), "2".into()],
                vec![0, 1, 2],
            )
            .unwrap(),
        );
        let partial = MatrixUnits::standard(&diag);
        assert_eq!(extend_matrix_unit(&partial, &reference).unwrap(), reference);
        let twisted = MatrixUnits::new(
            &r,
            r.pairs()
                .iter()
                .map(|&(x, y)| reference.get(x, y).unwrap() * (phase(x as f64) * phase(y as f64).conj()))
                .collect(),
        )
        .unwrap();
        let full = extend_matrix_unit(&twisted, &reference).unwrap();
        for &(x, y) in r.pairs() {
            assert!((full.get(x, y).unwrap() - twisted.get(x, y).unwrap()).norm() < 1e-12);
        }
    }
}
