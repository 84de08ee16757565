//! Graded Bratteli diagrams of finite depth, their finite paths and the
//! level-n tail relations.
//!
//! A diagram of depth `N` has vertex levels `V(0)..V(N)` and edge levels
//! `E(1)..E(N)`, with every edge of `E(n)` going from `V(n-1)` to `V(n)`.
//! Identifiers are opaque strings on the way in and out; internally vertices
//! and edges are dense indices within their level. The infinite path space is
//! only ever seen through its truncations at a caller-chosen depth.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("edge {edge:?} at level {level} references unknown vertex {vertex:?}")]
    UnknownVertex { level: usize, edge: String, vertex: String },
    #[error("edge {edge:?} is not defined at level {level}")]
    UnknownEdge { level: usize, edge: String },
    #[error("expected {expected} edge levels for {vertex_levels} vertex levels, got {found}")]
    LevelCount {
        vertex_levels: usize,
        expected: usize,
        found: usize,
    },
    #[error("level {level} is outside 0..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("edges do not compose at level {level}")]
    BrokenPath { level: usize },
    #[error("path must start at level 0, starts at {0}")]
    NotRooted(usize),
    #[error("an empty path needs an anchor vertex")]
    EmptyPathWithoutAnchor,
}

impl DiagramError {
    /// Short name of the invariant behind the error.
    pub fn invariant(&self) -> &'static str {
        match self {
            DiagramError::UnknownVertex { .. } | DiagramError::UnknownEdge { .. } => "known identifiers",
            DiagramError::LevelCount { .. } => "one edge level per floor",
            DiagramError::LevelOutOfRange { .. } => "level in range",
            DiagramError::BrokenPath { .. } => "consecutive edges compose",
            DiagramError::NotRooted(_) => "rooted path",
            DiagramError::EmptyPathWithoutAnchor => "anchored empty path",
        }
    }
}

/// One floor `V(n-1) <- E(n) -> V(n)` of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGraph {
    n: usize,
    edge_ids: Vec<String>,
    src: Vec<usize>,
    rng: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl LevelGraph {
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edge_ids[e]
    }

    pub fn src(&self, e: usize) -> usize {
        self.src[e]
    }

    pub fn rng(&self, e: usize) -> usize {
        self.rng[e]
    }

    /// Edges leaving vertex `v` of `V(n-1)`, in index order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// Edges arriving at vertex `w` of `V(n)`, in index order.
    pub fn in_edges(&self, w: usize) -> &[usize] {
        &self.in_edges[w]
    }
}

/// Raw edge description used to assemble a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub rng: String,
}

impl EdgeSpec {
    pub fn new(id: impl Into<String>, src: impl Into<String>, rng: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            src: src.into(),
            rng: rng.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    vertex_ids: Vec<Vec<String>>,
    levels: Vec<LevelGraph>,
}

/// A rule broken by a diagram, as reported by [`validate_diagram`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub level: usize,
    pub item: String,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {} {}", self.level, self.item, self.rule)
    }
}

pub const RULE_NO_LEVELS: &str = "diagram has no edge levels";
pub const RULE_EMITS_NONE: &str = "emits no edge";
pub const RULE_RECEIVES_NONE: &str = "receives no edge";
pub const RULE_DUPLICATE_VERTEX: &str = "duplicate vertex id";
pub const RULE_DUPLICATE_EDGE: &str = "duplicate edge id";

impl BratteliDiagram {
    /// Assembles a diagram from per-level vertex ids and per-floor edges.
    ///
    /// `edges[i]` holds `E(i+1)`. Endpoint names must resolve in the adjacent
    /// vertex levels; everything else (emission, reception, uniqueness) is
    /// checked by [`validate_diagram`]. With duplicated ids the first
    /// occurrence wins for name resolution.
    pub fn new(vertices: Vec<Vec<String>>, edges: Vec<Vec<EdgeSpec>>) -> Result<Self, DiagramError> {
        if vertices.len() != edges.len() + 1 {
            return Err(DiagramError::LevelCount {
                vertex_levels: vertices.len(),
                expected: vertices.len().saturating_sub(1),
                found: edges.len(),
            });
        }
        let lookup: Vec<HashMap<&str, usize>> = vertices
            .iter()
            .map(|level| {
                let mut map = HashMap::new();
                for (i, id) in level.iter().enumerate() {
                    map.entry(id.as_str()).or_insert(i);
                }
                map
            })
            .collect();

        let mut levels = Vec::with_capacity(edges.len());
        for (i, floor) in edges.into_iter().enumerate() {
            let n = i + 1;
            let mut src = Vec::with_capacity(floor.len());
            let mut rng = Vec::with_capacity(floor.len());
            let mut edge_ids = Vec::with_capacity(floor.len());
            for edge in floor {
                let s = *lookup[n - 1]
                    .get(edge.src.as_str())
                    .ok_or_else(|| DiagramError::UnknownVertex {
                        level: n,
                        edge: edge.id.clone(),
                        vertex: edge.src.clone(),
                    })?;
                let r = *lookup[n]
                    .get(edge.rng.as_str())
                    .ok_or_else(|| DiagramError::UnknownVertex {
                        level: n,
                        edge: edge.id.clone(),
                        vertex: edge.rng.clone(),
                    })?;
                src.push(s);
                rng.push(r);
                edge_ids.push(edge.id);
            }
            let mut out_edges = vec![Vec::new(); vertices[n - 1].len()];
            let mut in_edges = vec![Vec::new(); vertices[n].len()];
            for e in 0..edge_ids.len() {
                out_edges[src[e]].push(e);
                in_edges[rng[e]].push(e);
            }
            levels.push(LevelGraph {
                n,
                edge_ids,
                src,
                rng,
                out_edges,
                in_edges,
            });
        }
        Ok(Self {
            vertex_ids: vertices,
            levels,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_ids(vertices: &[&[&str]], edges: &[&[(&str, &str, &str)]]) -> Result<Self, DiagramError> {
        Self::new(
            vertices
                .iter()
                .map(|l| l.iter().map(|s| s.to_string()).collect())
                .collect(),
            edges
                .iter()
                .map(|l| l.iter().map(|(id, s, r)| EdgeSpec::new(*id, *s, *r)).collect())
                .collect(),
        )
    }

    /// Number of edge levels `N`.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn vertex_count(&self, level: usize) -> usize {
        self.vertex_ids[level].len()
    }

    pub fn vertex_id(&self, level: usize, v: usize) -> &str {
        &self.vertex_ids[level][v]
    }

    pub fn vertex_ids(&self, level: usize) -> &[String] {
        &self.vertex_ids[level]
    }

    pub fn vertex_index(&self, level: usize, id: &str) -> Option<usize> {
        self.vertex_ids.get(level)?.iter().position(|v| v == id)
    }

    /// The floor `E(n)`, for `1 <= n <= depth`.
    pub fn level(&self, n: usize) -> &LevelGraph {
        &self.levels[n - 1]
    }

    pub fn levels(&self) -> &[LevelGraph] {
        &self.levels
    }

    pub fn edge_index(&self, n: usize, id: &str) -> Option<usize> {
        if n == 0 || n > self.depth() {
            return None;
        }
        self.level(n).edge_ids.iter().position(|e| e == id)
    }

    fn check_level(&self, level: usize) -> Result<(), DiagramError> {
        if level > self.depth() {
            Err(DiagramError::LevelOutOfRange {
                level,
                depth: self.depth(),
            })
        } else {
            Ok(())
        }
    }

    pub fn empty_path(&self, level: usize, vertex: usize) -> Result<FinitePath, DiagramError> {
        self.check_level(level)?;
        if vertex >= self.vertex_count(level) {
            return Err(DiagramError::EmptyPathWithoutAnchor);
        }
        Ok(FinitePath {
            start_level: level,
            start_vertex: vertex,
            end_vertex: vertex,
            edges: Vec::new(),
        })
    }

    /// Path `e_{m+1} .. e_{m+k}` starting at level `m`, given by edge indices.
    pub fn path(&self, start_level: usize, edges: &[usize]) -> Result<FinitePath, DiagramError> {
        self.check_level(start_level)?;
        self.check_level(start_level + edges.len())?;
        let Some(&first) = edges.first() else {
            return Err(DiagramError::EmptyPathWithoutAnchor);
        };
        let first_level = self.level(start_level + 1);
        if first >= first_level.edge_count() {
            return Err(DiagramError::BrokenPath { level: start_level + 1 });
        }
        let start_vertex = first_level.src(first);
        let mut at = start_vertex;
        for (i, &e) in edges.iter().enumerate() {
            let n = start_level + i + 1;
            let floor = self.level(n);
            if e >= floor.edge_count() || floor.src(e) != at {
                return Err(DiagramError::BrokenPath { level: n });
            }
            at = floor.rng(e);
        }
        Ok(FinitePath {
            start_level,
            start_vertex,
            end_vertex: at,
            edges: edges.to_vec(),
        })
    }

    /// Path from edge identifiers.
    pub fn path_from_ids<S: AsRef<str>>(&self, start_level: usize, ids: &[S]) -> Result<FinitePath, DiagramError> {
        let edges = ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let n = start_level + i + 1;
                self.edge_index(n, id.as_ref())
                    .ok_or_else(|| DiagramError::UnknownEdge {
                        level: n,
                        edge: id.as_ref().to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.path(start_level, &edges)
    }

    /// Comma-separated edge ids, or `@vertex` for an empty path.
    pub fn path_label(&self, path: &FinitePath) -> String {
        if path.edges.is_empty() {
            return format!("@{}", self.vertex_id(path.start_level, path.start_vertex));
        }
        path.edges
            .iter()
            .enumerate()
            .map(|(i, &e)| self.level(path.start_level + i + 1).edge_id(e))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// One-step extensions `a e` with `s(e) = r(a)`, in edge index order.
    pub fn extensions(&self, path: &FinitePath) -> Vec<FinitePath> {
        let n = path.end_level();
        if n >= self.depth() {
            return Vec::new();
        }
        let floor = self.level(n + 1);
        floor
            .out_edges(path.end_vertex)
            .iter()
            .map(|&e| {
                let mut edges = path.edges.clone();
                edges.push(e);
                FinitePath {
                    start_level: path.start_level,
                    start_vertex: path.start_vertex,
                    end_vertex: floor.rng(e),
                    edges,
                }
            })
            .collect()
    }

    /// Number of paths from `V(0)` to each vertex of `V(level)`, via the
    /// incidence recursion `count(w) = Σ_{r(e)=w} count(s(e))`.
    pub fn path_counts(&self, level: usize) -> Vec<u128> {
        let mut counts = vec![1u128; self.vertex_count(0)];
        for n in 1..=level {
            let floor = self.level(n);
            let mut next = vec![0u128; self.vertex_count(n)];
            for e in 0..floor.edge_count() {
                next[floor.rng(e)] += counts[floor.src(e)];
            }
            counts = next;
        }
        counts
    }
}

/// All violations of the diagram invariants, in level order.
///
/// The empty list means: at least one floor, unique ids per level, every
/// vertex of `V(n-1)` emits an edge of `E(n)` and every vertex of `V(n)`,
/// `n >= 1`, receives one.
pub fn validate_diagram(d: &BratteliDiagram) -> Vec<Violation> {
    let mut out = Vec::new();
    if d.depth() == 0 {
        out.push(Violation {
            level: 0,
            item: "diagram".into(),
            rule: RULE_NO_LEVELS,
        });
    }
    for (level, ids) in d.vertex_ids.iter().enumerate() {
        let mut seen = HashMap::new();
        for id in ids {
            if seen.insert(id.as_str(), ()).is_some() {
                out.push(Violation {
                    level,
                    item: format!("vertex {id}"),
                    rule: RULE_DUPLICATE_VERTEX,
                });
            }
        }
    }
    for floor in &d.levels {
        let n = floor.n;
        let mut seen = HashMap::new();
        for id in &floor.edge_ids {
            if seen.insert(id.as_str(), ()).is_some() {
                out.push(Violation {
                    level: n,
                    item: format!("edge {id}"),
                    rule: RULE_DUPLICATE_EDGE,
                });
            }
        }
        for (v, out_edges) in floor.out_edges.iter().enumerate() {
            if out_edges.is_empty() {
                out.push(Violation {
                    level: n - 1,
                    item: format!("vertex {}", d.vertex_id(n - 1, v)),
                    rule: RULE_EMITS_NONE,
                });
            }
        }
        for (w, in_edges) in floor.in_edges.iter().enumerate() {
            if in_edges.is_empty() {
                out.push(Violation {
                    level: n,
                    item: format!("vertex {}", d.vertex_id(n, w)),
                    rule: RULE_RECEIVES_NONE,
                });
            }
        }
    }
    out
}

/// A finite path `e_{m+1} .. e_{m+k}` with `e_i ∈ E(i)`; empty paths are
/// anchored at a vertex of `V(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePath {
    start_level: usize,
    start_vertex: usize,
    end_vertex: usize,
    edges: Vec<usize>,
}

impl FinitePath {
    pub fn start_level(&self) -> usize {
        self.start_level
    }

    pub fn end_level(&self) -> usize {
        self.start_level + self.edges.len()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// `s(a)`, a vertex of `V(start_level)`.
    pub fn source(&self) -> usize {
        self.start_vertex
    }

    /// `r(a)`, a vertex of `V(end_level)`.
    pub fn range(&self) -> usize {
        self.end_vertex
    }

    /// Prefix of length `k`.
    pub fn truncate(&self, d: &BratteliDiagram, k: usize) -> FinitePath {
        let edges = self.edges[..k].to_vec();
        let end_vertex = match edges.last() {
            Some(&e) => d.level(self.start_level + k).rng(e),
            None => self.start_vertex,
        };
        FinitePath {
            start_level: self.start_level,
            start_vertex: self.start_vertex,
            end_vertex,
            edges,
        }
    }
}

/// Cylinder `Z(a)` over a rooted path: all full-depth continuations of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cylinder {
    base: FinitePath,
}

impl Cylinder {
    pub fn new(base: FinitePath) -> Result<Self, DiagramError> {
        if base.start_level != 0 {
            return Err(DiagramError::NotRooted(base.start_level));
        }
        Ok(Self { base })
    }

    pub fn base(&self) -> &FinitePath {
        &self.base
    }

    /// `Z(a)` as the disjoint union of the `Z(ae)`.
    pub fn children(&self, d: &BratteliDiagram) -> Vec<Cylinder> {
        d.extensions(&self.base)
            .into_iter()
            .map(|base| Cylinder { base })
            .collect()
    }

    /// Full-depth paths in `Z(a)`, lexicographic.
    pub fn points(&self, d: &BratteliDiagram) -> Vec<FinitePath> {
        let mut out = Vec::new();
        let mut stack = vec![self.base.clone()];
        while let Some(p) = stack.pop() {
            if p.end_level() == d.depth() {
                out.push(p);
            } else {
                let mut ext = d.extensions(&p);
                ext.reverse();
                stack.extend(ext);
            }
        }
        out
    }
}

/// All paths from `from_level` to `to_level`, in lexicographic order of edge
/// indices. `from_level == to_level` gives one empty path per vertex.
pub fn enumerate_paths(
    d: &BratteliDiagram,
    from_level: usize,
    to_level: usize,
) -> Result<Vec<FinitePath>, DiagramError> {
    if from_level > to_level {
        return Err(DiagramError::LevelOutOfRange {
            level: from_level,
            depth: to_level,
        });
    }
    d.check_level(to_level)?;
    let mut current: Vec<FinitePath> = (0..d.vertex_count(from_level))
        .map(|v| FinitePath {
            start_level: from_level,
            start_vertex: v,
            end_vertex: v,
            edges: Vec::new(),
        })
        .collect();
    if from_level == to_level {
        return Ok(current);
    }
    // Seed with the first floor in edge order so the start vertex does not
    // take precedence over the first edge index.
    let floor = d.level(from_level + 1);
    current = (0..floor.edge_count())
        .map(|e| FinitePath {
            start_level: from_level,
            start_vertex: floor.src(e),
            end_vertex: floor.rng(e),
            edges: vec![e],
        })
        .collect();
    for _ in from_level + 1..to_level {
        current = current.iter().flat_map(|p| d.extensions(p)).collect();
    }
    Ok(current)
}

/// Membership in `R_n`: same length and same range.
pub fn tail_related(a: &FinitePath, b: &FinitePath) -> bool {
    a.start_level == 0 && b.start_level == 0 && a.len() == b.len() && a.range() == b.range()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// One vertex and one edge per level.
    pub fn chain(depth: usize) -> BratteliDiagram {
        let vertices = (0..=depth).map(|n| vec![format!("v{n}")]).collect();
        let edges = (1..=depth)
            .map(|n| vec![EdgeSpec::new(format!("e{n}"), format!("v{}", n - 1), format!("v{n}"))])
            .collect();
        BratteliDiagram::new(vertices, edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::chain;
    use super::*;

    fn branching() -> BratteliDiagram {
        // out-degrees 2 then 3 along a single-vertex spine
        BratteliDiagram::from_ids(
            &[&["r"], &["m"], &["t"]],
            &[
                &[("a", "r", "m"), ("b", "r", "m")],
                &[("x", "m", "t"), ("y", "m", "t"), ("z", "m", "t")],
            ],
        )
        .unwrap()
    }

    #[test]
    fn chain_is_valid() {
        assert!(validate_diagram(&chain(3)).is_empty());
    }

    #[test]
    fn unreached_vertex_is_reported() {
        let d = BratteliDiagram::from_ids(
            &[&["r"], &["a"], &["b", "lonely"]],
            &[&[("e", "r", "a")], &[("f", "a", "b")]],
        )
        .unwrap();
        let v = validate_diagram(&d);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].level, 2);
        assert_eq!(v[0].rule, RULE_RECEIVES_NONE);
        assert!(v[0].to_string().contains("receives no edge"));
    }

    #[test]
    fn silent_vertex_and_duplicates_are_reported() {
        let d = BratteliDiagram::from_ids(&[&["r", "s", "r"], &["a"]], &[&[("e", "r", "a"), ("e", "r", "a")]]).unwrap();
        let rules: Vec<_> = validate_diagram(&d).iter().map(|v| v.rule).collect();
        assert!(rules.contains(&RULE_DUPLICATE_VERTEX));
        assert!(rules.contains(&RULE_DUPLICATE_EDGE));
        assert!(rules.contains(&RULE_EMITS_NONE));
    }

    #[test]
    fn unknown_endpoint_is_an_error() {
        let err = BratteliDiagram::from_ids(&[&["r"], &["a"]], &[&[("e", "r", "zz")]]).unwrap_err();
        assert!(matches!(err, DiagramError::UnknownVertex { .. }));
    }

    #[test]
    fn chain_has_one_path() {
        let d = chain(4);
        assert_eq!(enumerate_paths(&d, 0, 4).unwrap().len(), 1);
    }

    #[test]
    fn product_of_out_degrees() {
        let d = branching();
        let paths = enumerate_paths(&d, 0, 2).unwrap();
        assert_eq!(paths.len(), 6);
        let labels: Vec<_> = paths.iter().map(|p| d.path_label(p)).collect();
        assert_eq!(labels, ["a,x", "a,y", "a,z", "b,x", "b,y", "b,z"]);
    }

    #[test]
    fn same_level_gives_empty_paths() {
        let d = branching();
        let paths = enumerate_paths(&d, 1, 1).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(paths[0].is_empty());
        assert_eq!(d.path_label(&paths[0]), "@m");
        assert!(enumerate_paths(&d, 0, 3).is_err());
        assert!(enumerate_paths(&d, 2, 1).is_err());
    }

    #[test]
    fn paths_must_compose() {
        let d = BratteliDiagram::from_ids(
            &[&["r"], &["a", "b"], &["c"]],
            &[&[("e", "r", "a"), ("f", "r", "b")], &[("g", "a", "c"), ("h", "b", "c")]],
        )
        .unwrap();
        assert!(d.path_from_ids(0, &["e", "g"]).is_ok());
        assert_eq!(
            d.path_from_ids(0, &["e", "h"]).unwrap_err(),
            DiagramError::BrokenPath { level: 2 }
        );
        let a = d.path_from_ids(0, &["e", "g"]).unwrap();
        let b = d.path_from_ids(0, &["f", "h"]).unwrap();
        assert!(tail_related(&a, &b));
        assert!(tail_related(&a, &a));
        assert!(!tail_related(&a, &a.truncate(&d, 1)));
    }

    #[test]
    fn cylinder_children_partition_points() {
        let d = branching();
        let root = Cylinder::new(d.empty_path(0, 0).unwrap()).unwrap();
        let all = root.points(&d);
        let from_children: Vec<_> = root.children(&d).iter().flat_map(|c| c.points(&d)).collect();
        assert_eq!(all, from_children);
        assert_eq!(d.path_counts(2), vec![6]);
    }
}
