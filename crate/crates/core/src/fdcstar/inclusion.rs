use std::collections::HashMap;
use std::sync::Arc;

use num::complex::Complex64;

use super::element::same_algebra;
use super::{AlgebraElement, FdError, FiniteEquivRelation};

/// One floor `V → V̲` of a diagram together with a point set `X` over `V`.
///
/// `r : X → V`, `s : E → V` and `r : E → V̲` are surjective. The lifted
/// points are `X̲ = {(x, a) : r(x) = s(a)}` ordered by `x` then `a`, related
/// when their edges share a range. The edge relation `R′` relates parallel
/// edges.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionGraph {
    vertices: Vec<String>,
    edges: Vec<String>,
    targets: Vec<String>,
    edge_src: Vec<usize>,
    edge_rng: Vec<usize>,
    relation: Arc<FiniteEquivRelation>,
    lifted: Vec<(usize, usize)>,
    lifted_index: HashMap<(usize, usize), usize>,
    lifted_relation: Arc<FiniteEquivRelation>,
    edge_relation: Arc<FiniteEquivRelation>,
    pinched_relation: Arc<FiniteEquivRelation>,
}

fn surjective(map: &[usize], codomain: usize) -> Option<usize> {
    let mut hit = vec![false; codomain];
    for &v in map {
        hit[v] = true;
    }
    hit.iter().position(|h| !h)
}

impl InclusionGraph {
    /// `points[x] = r(x)`, `edges[c] = (s(c), r(c))` as indices.
    pub fn new(
        points: Vec<String>,
        vertices: Vec<String>,
        point_map: Vec<usize>,
        edges: Vec<String>,
        targets: Vec<String>,
        edge_src: Vec<usize>,
        edge_rng: Vec<usize>,
    ) -> Result<Self, FdError> {
        if edges.len() != edge_src.len() || edges.len() != edge_rng.len() {
            return Err(FdError::ShapeMismatch("one source and one range per edge".into()));
        }
        if let Some(&v) = edge_src.iter().find(|&&v| v >= vertices.len()) {
            return Err(FdError::Relation(format!("edge source #{v} out of range")));
        }
        if let Some(&w) = edge_rng.iter().find(|&&w| w >= targets.len()) {
            return Err(FdError::Relation(format!("edge range #{w} out of range")));
        }
        let relation = Arc::new(FiniteEquivRelation::new(points, vertices.clone(), point_map)?);
        if let Some(v) = surjective(&edge_src, vertices.len()) {
            return Err(FdError::Relation(format!("no edge leaves vertex {}", vertices[v])));
        }
        if let Some(w) = surjective(&edge_rng, targets.len()) {
            return Err(FdError::Relation(format!("no edge reaches vertex {}", targets[w])));
        }

        let mut lifted = Vec::new();
        for x in 0..relation.point_count() {
            for (c, &s) in edge_src.iter().enumerate() {
                if s == relation.class_of(x) {
                    lifted.push((x, c));
                }
            }
        }
        let lifted_index = lifted.iter().enumerate().map(|(i, &xa)| (xa, i)).collect();
        let names: Vec<String> = lifted
            .iter()
            .map(|&(x, c)| format!("{}.{}", relation.point_id(x), edges[c]))
            .collect();
        let lifted_relation = Arc::new(FiniteEquivRelation::new(
            names.clone(),
            targets.clone(),
            lifted.iter().map(|&(_, c)| edge_rng[c]).collect(),
        )?);
        let pinched_relation = Arc::new(FiniteEquivRelation::new(
            names,
            edges.clone(),
            lifted.iter().map(|&(_, c)| c).collect(),
        )?);

        let mut parallel: Vec<(usize, usize)> = Vec::new();
        let parallel_of: Vec<usize> = edge_src
            .iter()
            .zip(&edge_rng)
            .map(|(&s, &r)| match parallel.iter().position(|&k| k == (s, r)) {
                Some(i) => i,
                None => {
                    parallel.push((s, r));
                    parallel.len() - 1
                }
            })
            .collect();
        let edge_relation = Arc::new(FiniteEquivRelation::new(
            edges.clone(),
            parallel
                .iter()
                .map(|&(s, r)| format!("{}>{}", vertices[s], targets[r]))
                .collect(),
            parallel_of,
        )?);

        Ok(Self {
            vertices,
            edges,
            targets,
            edge_src,
            edge_rng,
            relation,
            lifted,
            lifted_index,
            lifted_relation,
            edge_relation,
            pinched_relation,
        })
    }

    /// Builds the graph from `(point, vertex)` and `(edge, source, range)`
    /// ids; `V` and `V̲` are ordered by first appearance.
    pub fn from_ids(points: &[(&str, &str)], edges: &[(&str, &str, &str)]) -> Result<Self, FdError> {
        fn intern(list: &mut Vec<String>, id: &str) -> usize {
            list.iter().position(|k| k == id).unwrap_or_else(|| {
                list.push(id.to_string());
                list.len() - 1
            })
        }
        let mut vertices = Vec::new();
        let point_map = points.iter().map(|(_, v)| intern(&mut vertices, v)).collect();
        let mut targets = Vec::new();
        let mut edge_src = Vec::new();
        let mut edge_rng = Vec::new();
        for (id, s, r) in edges {
            let si = vertices
                .iter()
                .position(|k| k == s)
                .ok_or_else(|| FdError::Relation(format!("edge {id} leaves unknown vertex {s}")))?;
            edge_src.push(si);
            edge_rng.push(intern(&mut targets, r));
        }
        Self::new(
            points.iter().map(|(p, _)| p.to_string()).collect(),
            vertices,
            point_map,
            edges.iter().map(|(e, _, _)| e.to_string()).collect(),
            targets,
            edge_src,
            edge_rng,
        )
    }

    /// `R` on `X`.
    pub fn relation(&self) -> &Arc<FiniteEquivRelation> {
        &self.relation
    }

    /// `R̲` on `X̲`, classes indexed by `V̲`.
    pub fn lifted_relation(&self) -> &Arc<FiniteEquivRelation> {
        &self.lifted_relation
    }

    /// `R′` on `E`: `a ~ b` iff `s(a) = s(b)` and `r(a) = r(b)`.
    pub fn edge_relation(&self) -> &Arc<FiniteEquivRelation> {
        &self.edge_relation
    }

    /// `R₁ ⊂ R̲` on `X̲`: `(xa, yb) ∈ R₁` iff `a = b`; classes indexed by `E`.
    pub fn pinched_relation(&self) -> &Arc<FiniteEquivRelation> {
        &self.pinched_relation
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_ids(&self) -> &[String] {
        &self.edges
    }

    pub fn target_ids(&self) -> &[String] {
        &self.targets
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn src(&self, c: usize) -> usize {
        self.edge_src[c]
    }

    pub fn rng(&self, c: usize) -> usize {
        self.edge_rng[c]
    }

    /// Edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&c| self.edge_src[c] == v)
    }

    /// `(x, a)` for each lifted point.
    pub fn lifted_points(&self) -> &[(usize, usize)] {
        &self.lifted
    }

    /// Index of `(x, a)` in `X̲`.
    pub fn lift(&self, x: usize, a: usize) -> Option<usize> {
        self.lifted_index.get(&(x, a)).copied()
    }

    /// `ε(c) = Σ_{r(x)=s(c)} e(xc, xc)`.
    pub fn edge_projection(&self, c: usize) -> AlgebraElement {
        AlgebraElement::from_fn(&self.lifted_relation, |i, j| {
            if i == j && self.lifted[i].1 == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `e(v) = Σ_{r(x)=v} e(x, x)`, the unit of the block of `v` in `C*(R)`.
    pub fn vertex_projection(&self, v: usize) -> AlgebraElement {
        AlgebraElement::from_fn(&self.relation, |x, y| {
            if x == y && self.relation.class_of(x) == v {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// `j(f)(xa, yb) = f(x, y) δ_ab`.
pub fn include_j(g: &InclusionGraph, f: &AlgebraElement) -> Result<AlgebraElement, FdError> {
    if !same_algebra(f.relation(), g.relation()) {
        return Err(FdError::ShapeMismatch("element is not over R".into()));
    }
    let lifted = g.lifted_points();
    Ok(AlgebraElement::from_fn(g.lifted_relation(), |i, j| {
        let (x, a) = lifted[i];
        let (y, b) = lifted[j];
        if a == b {
            f.get(x, y)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `k(h)(xa, yb) = h(a, b) δ_xy`, embedding `C*(R′)` as the commutant of
/// `j(C*(R))`.
pub fn commutant_embed_k(g: &InclusionGraph, h: &AlgebraElement) -> Result<AlgebraElement, FdError> {
    if !same_algebra(h.relation(), g.edge_relation()) {
        return Err(FdError::ShapeMismatch("element is not over R′".into()));
    }
    let lifted = g.lifted_points();
    Ok(AlgebraElement::from_fn(g.lifted_relation(), |i, j| {
        let (x, a) = lifted[i];
        let (y, b) = lifted[j];
        if x == y {
            h.get(a, b)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifted_structure() {
        let g = InclusionGraph::from_ids(
            &[("x", "v"), ("y", "v"), ("z", "u")],
            &[("a", "v", "w"), ("b", "v", "w"), ("c", "u", "w"), ("d", "u", "t")],
        )
        .unwrap();
        assert_eq!(g.lifted_points().len(), 2 * 2 + 2);
        assert_eq!(g.lifted_relation().block_sizes(), vec![5, 1]);
        assert_eq!(g.edge_relation().block_sizes(), vec![2, 1, 1]);
        assert_eq!(g.lifted_relation().point_id(1), "x.b");
    }

    #[test]
    fn j_of_scalar_on_two_edges() {
        let g = InclusionGraph::from_ids(&[("x", "v")], &[("a", "v", "w"), ("b", "v", "w")]).unwrap();
        let f = AlgebraElement::identity(g.relation()).scale(Complex64::new(2.0, -1.0));
        let jf = include_j(&g, &f).unwrap();
        assert_eq!(
            jf.to_dense(),
            nalgebra::DMatrix::identity(2, 2) * Complex64::new(2.0, -1.0)
        );
    }

    #[test]
    fn unitality() {
        let g = InclusionGraph::from_ids(&[("x", "v"), ("y", "v")], &[("a", "v", "w"), ("b", "v", "t")]).unwrap();
        assert_eq!(
            include_j(&g, &AlgebraElement::identity(g.relation())).unwrap(),
            AlgebraElement::identity(g.lifted_relation())
        );
        assert_eq!(
            commutant_embed_k(&g, &AlgebraElement::identity(g.edge_relation())).unwrap(),
            AlgebraElement::identity(g.lifted_relation())
        );
    }

    #[test]
    fn j_and_k_commute_on_units() {
        let g = InclusionGraph::from_ids(
            &[("x", "v"), ("y", "v")],
            &[("a", "v", "w"), ("b", "v", "w"), ("c", "v", "t")],
        )
        .unwrap();
        for f in AlgebraElement::basis(g.relation()) {
            for h in AlgebraElement::basis(g.edge_relation()) {
                let jf = include_j(&g, &f).unwrap();
                let kh = commutant_embed_k(&g, &h).unwrap();
                assert!(jf.commutator(&kh).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let g = InclusionGraph::from_ids(&[("x", "v")], &[("a", "v", "w"), ("b", "v", "w")]).unwrap();
        let wrong = AlgebraElement::identity(g.lifted_relation());
        assert!(matches!(include_j(&g, &wrong), Err(FdError::ShapeMismatch(_))));
    }

    #[test]
    fn surjectivity_enforced() {
        let err = InclusionGraph::new(
            vec!["x".into()],
            vec!["v".into(), "u".into()],
            vec![0],
            vec!["a".into()],
            vec!["w".into()],
            vec![0],
            vec![0],
        );
        assert!(matches!(err, Err(FdError::Relation(_))));
    }
}
