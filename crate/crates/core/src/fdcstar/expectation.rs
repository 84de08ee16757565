use std::sync::Arc;

use num::complex::Complex64;
use num::traits::{One, Signed};

use super::element::same_algebra;
use super::{include_j, AlgebraElement, FdError, InclusionGraph, LinearMap};
use crate::rational::{format_rational, rational_from_f64, to_f64, Rational};

const RECOVERY_TOLERANCE: f64 = 1e-12;
const RECOVERY_MAX_DEN: u64 = 1_000_000;

/// The model conditional expectation `Q : C*(R̲) → C*(R)` of a transition
/// probability `p` on an inclusion graph:
/// `Q(f̲)(x, y) = Σ_{s(c)=r(x)} p(c) f̲(xc, yc)`.
#[derive(Debug, Clone)]
pub struct ModelExpectation {
    graph: Arc<InclusionGraph>,
    p: Vec<Rational>,
}

impl ModelExpectation {
    /// `p` must be positive and sum to one over the edges leaving each vertex.
    pub fn new(graph: Arc<InclusionGraph>, p: Vec<Rational>) -> Result<Self, FdError> {
        if p.len() != graph.edge_count() {
            return Err(FdError::ShapeMismatch(format!(
                "{} weights for {} edges",
                p.len(),
                graph.edge_count()
            )));
        }
        if let Some(c) = (0..p.len()).find(|&c| !p[c].is_positive()) {
            return Err(FdError::Transition(format!(
                "p({}) = {} is not positive",
                graph.edge_ids()[c],
                format_rational(&p[c])
            )));
        }
        for (v, id) in graph.vertex_ids().iter().enumerate() {
            let total: Rational = graph.out_edges(v).map(|c| &p[c]).sum();
            if !total.is_one() {
                return Err(FdError::Transition(format!(
                    "weights leaving {id} sum to {}",
                    format_rational(&total)
                )));
            }
        }
        Ok(Self { graph, p })
    }

    /// `p(c) = 1 / #{c′ : s(c′) = s(c)}`.
    pub fn uniform(graph: Arc<InclusionGraph>) -> Self {
        let p = (0..graph.edge_count())
            .map(|c| Rational::new(1.into(), graph.out_edges(graph.src(c)).count().into()))
            .collect();
        Self::new(graph, p).expect("uniform weights")
    }

    pub fn graph(&self) -> &Arc<InclusionGraph> {
        &self.graph
    }

    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    /// `Q` as a map `C*(R̲) → C*(R)`.
    pub fn linear_map(&self) -> LinearMap {
        expectation_map(&self.graph, &self.p)
    }

    /// `j ∘ Q`, the expectation of `C*(R̲)` onto its subalgebra `j(C*(R))`.
    pub fn ambient_map(&self) -> LinearMap {
        let q = self.linear_map();
        let j = LinearMap::from_images(self.graph.relation(), self.graph.lifted_relation(), |k| {
            include_j(&self.graph, &AlgebraElement::basis_element(self.graph.relation(), k)).expect("unit of C*(R)")
        });
        j.compose(&q).expect("Q lands in C*(R)")
    }

    /// `j(e(x, y))` for every pair of `R`, a basis of the range of `j ∘ Q`.
    pub fn subalgebra_basis(&self) -> Vec<AlgebraElement> {
        AlgebraElement::basis(self.graph.relation())
            .iter()
            .map(|f| include_j(&self.graph, f).expect("unit of C*(R)"))
            .collect()
    }

    pub fn apply(&self, f: &AlgebraElement) -> Result<AlgebraElement, FdError> {
        model_expectation(self, f)
    }
}

/// `Q(f̲)` by the defining sum.
pub fn model_expectation(me: &ModelExpectation, f: &AlgebraElement) -> Result<AlgebraElement, FdError> {
    let g = &me.graph;
    if !same_algebra(f.relation(), g.lifted_relation()) {
        return Err(FdError::ShapeMismatch("element is not over R̲".into()));
    }
    let rel = g.relation();
    Ok(AlgebraElement::from_fn(rel, |x, y| {
        g.out_edges(rel.class_of(x))
            .map(|c| {
                let xc = g.lift(x, c).expect("r(x) = s(c)");
                let yc = g.lift(y, c).expect("r(y) = s(c)");
                f.get(xc, yc) * to_f64(&me.p[c])
            })
            .sum()
    }))
}

/// The map `f̲ ↦ Σ p(c) f̲(·c, ·c)` for arbitrary weights, with no check on
/// `p`. Useful for building maps that are not expectations.
pub fn expectation_map(g: &InclusionGraph, p: &[Rational]) -> LinearMap {
    let lifted = g.lifted_points();
    let weights: Vec<f64> = p.iter().map(to_f64).collect();
    let columns = g
        .lifted_relation()
        .pairs()
        .iter()
        .map(|&(i, j)| {
            let (x, a) = lifted[i];
            let (y, b) = lifted[j];
            if a == b {
                let k = g.relation().coord(x, y).expect("same source vertex");
                vec![(k, Complex64::new(weights[a], 0.0))]
            } else {
                Vec::new()
            }
        })
        .collect();
    LinearMap::from_columns(g.lifted_relation(), g.relation(), columns).expect("columns fit")
}

/// `Q = Q₁ ∘ Q₂`: the pinching `Q₂(f̲) = Σ_c ε(c) f̲ ε(c)` onto `C*(R₁)`
/// followed by the averaging `Q₁(f)(x, y) = Σ_{s(c)=r(x)} p(c) f(xc, yc)`.
#[derive(Debug, Clone)]
pub struct PinchAverage {
    pub pinching: LinearMap,
    pub averaging: LinearMap,
}

impl PinchAverage {
    pub fn composite(&self) -> LinearMap {
        self.averaging
            .compose(&self.pinching)
            .expect("pinching lands in C*(R₁)")
    }
}

pub fn pinch_average_decompose(me: &ModelExpectation) -> PinchAverage {
    let g = &me.graph;
    let lifted_rel = g.lifted_relation();
    let pinched_rel = g.pinched_relation();
    let projections: Vec<AlgebraElement> = (0..g.edge_count()).map(|c| g.edge_projection(c)).collect();
    let pinching = LinearMap::from_images(lifted_rel, pinched_rel, |k| {
        let f = AlgebraElement::basis_element(lifted_rel, k);
        let mut sum = AlgebraElement::zero(lifted_rel);
        for eps in &projections {
            sum = sum.add(&eps.mul(&f).mul(eps));
        }
        AlgebraElement::from_fn(pinched_rel, |i, j| sum.get(i, j))
    });
    let lifted = g.lifted_points();
    let weights: Vec<f64> = me.p.iter().map(to_f64).collect();
    let averaging = LinearMap::from_columns(
        pinched_rel,
        g.relation(),
        pinched_rel
            .pairs()
            .iter()
            .map(|&(i, j)| {
                let (x, c) = lifted[i];
                let (y, _) = lifted[j];
                let k = g.relation().coord(x, y).expect("same source vertex");
                vec![(k, Complex64::new(weights[c], 0.0))]
            })
            .collect(),
    )
    .expect("columns fit");
    PinchAverage { pinching, averaging }
}

/// Recovers `p` from `Q(ε(c)) = p(c) e(s(c))`.
///
/// `q` maps `C*(R̲) → C*(R)`. The read-off scalars are turned into exact
/// rationals and the model expectation rebuilt from them must reproduce `q`.
pub fn extract_transition(q: &LinearMap, g: &InclusionGraph) -> Result<Vec<Rational>, FdError> {
    if !same_algebra(q.domain(), g.lifted_relation()) || !same_algebra(q.codomain(), g.relation()) {
        return Err(FdError::ShapeMismatch("map is not C*(R̲) → C*(R)".into()));
    }
    let tol = 1e-9;
    let mut p = Vec::with_capacity(g.edge_count());
    for c in 0..g.edge_count() {
        let image = q.apply(&g.edge_projection(c))?;
        let v = g.src(c);
        let x0 = g.relation().members(v)[0];
        let scalar = image.get(x0, x0);
        let expected = g.vertex_projection(v).scale(scalar);
        if image.distance(&expected) > tol || scalar.im.abs() > tol {
            return Err(FdError::NotProportional(g.edge_ids()[c].clone()));
        }
        if scalar.re <= tol {
            return Err(FdError::NotFaithful(g.edge_ids()[c].clone()));
        }
        let exact = rational_from_f64(scalar.re, RECOVERY_TOLERANCE, RECOVERY_MAX_DEN).ok_or_else(|| {
            FdError::NotModelForm(format!(
                "p({}) = {} is not a small rational",
                g.edge_ids()[c],
                scalar.re
            ))
        })?;
        p.push(exact);
    }
    for (v, id) in g.vertex_ids().iter().enumerate() {
        let total: Rational = g.out_edges(v).map(|c| &p[c]).sum();
        if !total.is_one() {
            return Err(FdError::NotModelForm(format!(
                "recovered weights leaving {id} sum to {}",
                format_rational(&total)
            )));
        }
    }
    let rebuilt = expectation_map(g, &p);
    let gap = rebuilt.distance(q)?;
    if gap > tol {
        return Err(FdError::NotModelForm(format!("rebuilt map differs by {gap:e}")));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn two_edges() -> Arc<InclusionGraph> {
        Arc::new(InclusionGraph::from_ids(&[("x", "v")], &[("a", "v", "w"), ("b", "v", "w")]).unwrap())
    }

    #[test]
    fn half_half_on_a_diagonal_unit() {
        let g = two_edges();
        let me = ModelExpectation::new(g.clone(), vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let xa = g.lift(0, 0).unwrap();
        let out = me
            .apply(&AlgebraElement::unit(g.lifted_relation(), xa, xa).unwrap())
            .unwrap();
        assert_eq!(out.get(0, 0), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn single_edges_make_q_a_left_inverse_of_j() {
        let g = Arc::new(
            InclusionGraph::from_ids(
                &[("x", "v"), ("y", "v"), ("z", "u")],
                &[("a", "v", "w"), ("b", "u", "w")],
            )
            .unwrap(),
        );
        let me = ModelExpectation::new(g.clone(), vec![ratio(1, 1), ratio(1, 1)]).unwrap();
        for f in AlgebraElement::basis(g.relation()) {
            assert_eq!(me.apply(&include_j(&g, &f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn map_agrees_with_formula() {
        let g = Arc::new(
            InclusionGraph::from_ids(
                &[("x", "v"), ("y", "v"), ("z", "u")],
                &[("a", "v", "w"), ("b", "v", "t"), ("c", "u", "w")],
            )
            .unwrap(),
        );
        let me = ModelExpectation::new(g.clone(), vec![ratio(1, 3), ratio(2, 3), ratio(1, 1)]).unwrap();
        let map = me.linear_map();
        for (k, f) in AlgebraElement::basis(g.lifted_relation()).iter().enumerate() {
            assert_eq!(map.apply(f).unwrap(), me.apply(f).unwrap(), "unit {k}");
        }
    }

    #[test]
    fn extraction_reads_off_weights() {
        let g = two_edges();
        let me = ModelExpectation::new(g.clone(), vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        assert_eq!(
            extract_transition(&me.linear_map(), &g).unwrap(),
            vec![ratio(1, 3), ratio(2, 3)]
        );
    }

    #[test]
    fn extraction_rejects_zero_weight() {
        let g = two_edges();
        let q = expectation_map(&g, &[ratio(0, 1), ratio(1, 1)]);
        assert_eq!(extract_transition(&q, &g), Err(FdError::NotFaithful("a".into())));
    }

    #[test]
    fn pinching_kills_cross_terms() {
        let g = two_edges();
        let me = ModelExpectation::uniform(g.clone());
        let pa = pinch_average_decompose(&me);
        let (xa, xb) = (g.lift(0, 0).unwrap(), g.lift(0, 1).unwrap());
        let cross = AlgebraElement::unit(g.lifted_relation(), xa, xb).unwrap();
        assert_eq!(pa.pinching.apply(&cross).unwrap().max_abs(), 0.0);
        assert_eq!(pa.composite().distance(&me.linear_map()).unwrap(), 0.0);
    }

    #[test]
    fn invalid_weights() {
        let g = two_edges();
        assert!(matches!(
            ModelExpectation::new(g.clone(), vec![ratio(1, 2), ratio(1, 3)]),
            Err(FdError::Transition(_))
        ));
        assert!(matches!(
            ModelExpectation::new(g, vec![ratio(0, 1), ratio(1, 1)]),
            Err(FdError::Transition(_))
        ));
    }
}
