//! The JSON diagram file format.
//!
//! ```json
//! {
//!   "vertices": [["r"], ["a", "b"]],
//!   "edges": [[{"id": "x", "src": "r", "rng": "a", "p": "1/3", "rho": [1]},
//!              {"id": "y", "src": "r", "rng": "b", "p": "2/3", "rho": [0]}]],
//!   "nu0": {"r": "1/1"},
//!   "X": {"x1": "r", "x2": "r"}
//! }
//! ```
//!
//! `p` and `nu0` hold rationals as `"num/den"` strings. `rho` is an integer
//! array for `ℤ^d` or a `"num/den"` string for the positive rationals. `X`
//! maps points to level-0 vertices and turns a one-floor diagram into an
//! inclusion graph. Side files for terminal values and cylinder masses are
//! flat JSON objects from vertex ids or path labels to rationals.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::diagram::{enumerate_paths, BratteliDiagram, DiagramError, EdgeSpec};
use crate::fdcstar::{FdError, InclusionGraph};
use crate::rational::{parse_rational, Rational};
use crate::skew::{EdgePotential, GroupElement, GroupSpec, SkewError};
use crate::walk::{InitialDistribution, RandomWalk, TransitionProbability, WalkError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Diagram(#[from] DiagramError),
    #[error("{0}")]
    Walk(#[from] WalkError),
    #[error("{0}")]
    Skew(#[from] SkewError),
    #[error("{0}")]
    Fd(#[from] FdError),
}

impl IoError {
    pub fn is_parse(&self) -> bool {
        matches!(self, IoError::Parse(_))
    }

    pub fn invariant(&self) -> &'static str {
        match self {
            IoError::Parse(_) => "well-formed input",
            IoError::Diagram(e) => e.invariant(),
            IoError::Walk(e) => e.invariant(),
            IoError::Skew(e) => e.invariant(),
            IoError::Fd(e) => e.invariant(),
        }
    }
}

fn parse_err(msg: impl Into<String>) -> IoError {
    IoError::Parse(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoValue {
    Lattice(Vec<i64>),
    Integer(i64),
    Rational(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub src: String,
    pub rng: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<Vec<EdgeRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu0: Option<Map<String, Value>>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Map<String, Value>>,
}

fn rational_value(key: &str, v: &Value) -> Result<Rational, IoError> {
    v.as_str()
        .and_then(parse_rational)
        .ok_or_else(|| parse_err(format!("{key}: expected a \"num/den\" string, got {v}")))
}

/// Reads a flat `{"key": "num/den"}` object.
pub fn parse_rational_map(text: &str) -> Result<Vec<(String, Rational)>, IoError> {
    let map: Map<String, Value> = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    map.iter()
        .map(|(k, v)| Ok((k.clone(), rational_value(k, v)?)))
        .collect()
}

impl DiagramFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Writes a diagram and a walk on it; `p` on every edge and `nu0` on every
    /// root.
    pub fn from_walk(walk: &RandomWalk) -> Self {
        let d = walk.diagram();
        let mut file = Self::from_diagram(d);
        for (n, level) in file.edges.iter_mut().enumerate() {
            for (e, rec) in level.iter_mut().enumerate() {
                rec.p = Some(crate::rational::format_rational(walk.transition().get(n + 1, e)));
            }
        }
        file.nu0 = Some(
            d.vertex_ids(0)
                .iter()
                .zip(walk.initial())
                .map(|(id, x)| (id.clone(), Value::String(crate::rational::format_rational(x))))
                .collect(),
        );
        file
    }

    pub fn from_diagram(d: &BratteliDiagram) -> Self {
        Self {
            vertices: (0..=d.depth()).map(|n| d.vertex_ids(n).to_vec()).collect(),
            edges: (1..=d.depth())
                .map(|n| {
                    let floor = d.level(n);
                    (0..floor.edge_count())
                        .map(|e| EdgeRecord {
                            id: floor.edge_id(e).to_string(),
                            src: d.vertex_id(n - 1, floor.src(e)).to_string(),
                            rng: d.vertex_id(n, floor.rng(e)).to_string(),
                            p: None,
                            rho: None,
                        })
                        .collect()
                })
                .collect(),
            nu0: None,
            x: None,
        }
    }

    pub fn diagram(&self) -> Result<BratteliDiagram, IoError> {
        let edges = self
            .edges
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|r| EdgeSpec::new(r.id.clone(), r.src.clone(), r.rng.clone()))
                    .collect()
            })
            .collect();
        Ok(BratteliDiagram::new(self.vertices.clone(), edges)?)
    }

    /// `p` from the edge records; every edge must carry one.
    pub fn transition(&self) -> Result<TransitionProbability, IoError> {
        let levels = self
            .edges
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|r| {
                        let text =
                            r.p.as_deref()
                                .ok_or_else(|| parse_err(format!("edge {} has no \"p\"", r.id)))?;
                        parse_rational(text).ok_or_else(|| parse_err(format!("edge {}: bad rational {text:?}", r.id)))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TransitionProbability::new(levels))
    }

    /// `ν₀` from `nu0` (absent roots get 0); without `nu0`, the point mass
    /// for a single root and the uniform distribution otherwise.
    pub fn initial(&self, d: &BratteliDiagram) -> Result<InitialDistribution, IoError> {
        let roots = d.vertex_count(0);
        match &self.nu0 {
            None if roots == 1 => Ok(InitialDistribution::point_mass(1, 0)),
            None => Ok(InitialDistribution::uniform(roots)),
            Some(map) => {
                let mut nu = vec![Rational::from_integer(0.into()); roots];
                for (k, v) in map {
                    let i = d
                        .vertex_index(0, k)
                        .ok_or_else(|| parse_err(format!("nu0 names unknown root {k}")))?;
                    nu[i] = rational_value(k, v)?;
                }
                Ok(InitialDistribution(nu))
            }
        }
    }

    pub fn walk(&self) -> Result<RandomWalk, IoError> {
        let d = Arc::new(self.diagram()?);
        let p = self.transition()?;
        let nu0 = self.initial(&d)?;
        Ok(RandomWalk::new(d, p, nu0)?)
    }

    /// `ρ` from the edge records; all values must come from one group.
    pub fn potential(&self) -> Result<EdgePotential, IoError> {
        let mut group: Option<GroupSpec> = None;
        let mut levels = Vec::with_capacity(self.edges.len());
        for level in &self.edges {
            let mut out = Vec::with_capacity(level.len());
            for r in level {
                let rho = r
                    .rho
                    .as_ref()
                    .ok_or_else(|| parse_err(format!("edge {} has no \"rho\"", r.id)))?;
                let (kind, g) = match rho {
                    RhoValue::Lattice(v) => (GroupSpec::Lattice(v.len()), GroupElement::Lattice(v.clone())),
                    RhoValue::Integer(k) => (GroupSpec::Lattice(1), GroupElement::Lattice(vec![*k])),
                    RhoValue::Rational(s) => {
                        let g = GroupSpec::PositiveRationals
                            .parse(s)
                            .ok_or_else(|| parse_err(format!("edge {}: bad group element {s:?}", r.id)))?;
                        (GroupSpec::PositiveRationals, g)
                    }
                };
                if kind == GroupSpec::Lattice(0) {
                    return Err(parse_err(format!("edge {}: empty lattice vector", r.id)));
                }
                match group {
                    None => group = Some(kind),
                    Some(existing) if existing != kind => {
                        return Err(parse_err(format!("edge {}: rho mixes groups", r.id)));
                    }
                    _ => {}
                }
                out.push(g);
            }
            levels.push(out);
        }
        let group = group.ok_or_else(|| parse_err("no edges carry \"rho\""))?;
        EdgePotential::new(group, levels).ok_or_else(|| parse_err("rho values outside the group"))
    }

    /// The inclusion graph of a one-floor diagram with an `X` section, and
    /// the `p` weights when every edge carries one.
    pub fn inclusion_graph(&self) -> Result<(InclusionGraph, Option<Vec<Rational>>), IoError> {
        let d = self.diagram()?;
        if d.depth() != 1 {
            return Err(parse_err(format!(
                "an inclusion graph has one floor, found {}",
                d.depth()
            )));
        }
        let x = self.x.as_ref().ok_or_else(|| parse_err("missing \"X\" section"))?;
        let mut points = Vec::with_capacity(x.len());
        let mut point_map = Vec::with_capacity(x.len());
        for (k, v) in x {
            let vertex = v
                .as_str()
                .ok_or_else(|| parse_err(format!("X.{k}: expected a vertex id")))?;
            let i = d
                .vertex_index(0, vertex)
                .ok_or_else(|| parse_err(format!("X.{k}: unknown vertex {vertex}")))?;
            points.push(k.clone());
            point_map.push(i);
        }
        let floor = d.level(1);
        let graph = InclusionGraph::new(
            points,
            d.vertex_ids(0).to_vec(),
            point_map,
            (0..floor.edge_count()).map(|e| floor.edge_id(e).to_string()).collect(),
            d.vertex_ids(1).to_vec(),
            (0..floor.edge_count()).map(|e| floor.src(e)).collect(),
            (0..floor.edge_count()).map(|e| floor.rng(e)).collect(),
        )?;
        let p = if self.edges[0].iter().all(|r| r.p.is_some()) {
            Some(self.transition()?.0.levels()[0].clone())
        } else {
            None
        };
        Ok((graph, p))
    }
}

/// Terminal values `h_N` keyed by vertex id of the last level; every vertex
/// needs a value.
pub fn terminal_values(d: &BratteliDiagram, entries: &[(String, Rational)]) -> Result<Vec<Rational>, IoError> {
    let depth = d.depth();
    let mut values: Vec<Option<Rational>> = vec![None; d.vertex_count(depth)];
    for (k, x) in entries {
        let i = d
            .vertex_index(depth, k)
            .ok_or_else(|| parse_err(format!("terminal value for unknown vertex {k}")))?;
        values[i] = Some(x.clone());
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| parse_err(format!("no terminal value for {}", d.vertex_id(depth, i)))))
        .collect()
}

/// Full-depth masses keyed by path label, in path order; absent paths get 0.
pub fn top_level_masses(d: &BratteliDiagram, entries: &[(String, Rational)]) -> Result<Vec<Rational>, IoError> {
    let paths = enumerate_paths(d, 0, d.depth())?;
    let labels: Vec<String> = paths.iter().map(|a| d.path_label(a)).collect();
    let mut masses = vec![Rational::from_integer(0.into()); paths.len()];
    for (k, x) in entries {
        let i = labels
            .iter()
            .position(|l| l == k)
            .ok_or_else(|| parse_err(format!("{k} is not a path of length {}", d.depth())))?;
        masses[i] = x.clone();
    }
    Ok(masses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const TWO: &str = r#"{
        "vertices": [["r"], ["a", "b"]],
        "edges": [[{"id": "x", "src": "r", "rng": "a", "p": "1/3", "rho": [1]},
                   {"id": "y", "src": "r", "rng": "b", "p": "2/3", "rho": [0]}]],
        "X": {"x1": "r", "x2": "r"}
    }"#;

    #[test]
    fn reads_walk_potential_and_graph() {
        let f = DiagramFile::parse(TWO).unwrap();
        let w = f.walk().unwrap();
        assert_eq!(w.distribution(1), &[ratio(1, 3), ratio(2, 3)]);
        let rho = f.potential().unwrap();
        assert_eq!(rho.group(), GroupSpec::Lattice(1));
        let (g, p) = f.inclusion_graph().unwrap();
        assert_eq!(g.lifted_points().len(), 4);
        assert_eq!(p.unwrap(), vec![ratio(1, 3), ratio(2, 3)]);
    }

    #[test]
    fn round_trips_through_json() {
        let f = DiagramFile::parse(TWO).unwrap();
        let w = f.walk().unwrap();
        let back = DiagramFile::parse(&DiagramFile::from_walk(&w).to_json())
            .unwrap()
            .walk()
            .unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn parse_errors() {
        assert!(DiagramFile::parse("{").unwrap_err().is_parse());
        assert!(DiagramFile::parse(r#"{"vertices": [], "edges": [], "extra": 1}"#)
            .unwrap_err()
            .is_parse());
        let no_p = r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "a"}]]}"#;
        assert!(DiagramFile::parse(no_p).unwrap().walk().unwrap_err().is_parse());
        let bad_vertex =
            r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "z", "p": "1/1"}]]}"#;
        assert!(matches!(
            DiagramFile::parse(bad_vertex).unwrap().walk(),
            Err(IoError::Diagram(DiagramError::UnknownVertex { .. }))
        ));
    }

    #[test]
    fn rational_potential() {
        let text = r#"{"vertices": [["r"], ["a"]], "edges": [[{"id": "x", "src": "r", "rng": "a", "rho": "3/2"}]]}"#;
        let rho = DiagramFile::parse(text).unwrap().potential().unwrap();
        assert_eq!(rho.get(1, 0), &GroupElement::Rational(ratio(3, 2)));
    }
}
