//! Group-valued walks: edge potentials, skew-product diagrams, group cocycles
//! and the worked Pascal and UHF constructions.
//!
//! The skew product of a diagram by `ρ : E → G` has vertices `(v, g)` and
//! edges `(e, g)` with `s(e, g) = (s(e), g)` and `r(e, g) = (r(e), g ρ(e))`.
//! Only the part reachable from a finite level-0 window `W₀ ⊂ G` is built, so
//! every level is finite. A finite positive weighting `λ₀` of `W₀` stands in
//! for a measure equivalent to Haar measure; the translation-invariant
//! picture is recovered through window equivariance
//! (`skew(hW) = h · skew(W)`).

mod group;
mod pascal;
mod uhf;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::traits::{Signed, Zero};
use thiserror::Error;

use crate::diagram::{tail_related, validate_diagram, BratteliDiagram, EdgeSpec, FinitePath};
use crate::harmonic::{harmonic_from_terminal, HarmonicSequence};
use crate::rational::{format_rational, Rational};
use crate::walk::{InitialDistribution, RandomWalk, TransitionProbability, WalkError};

pub use group::{EdgePotential, GroupElement, GroupSpec};
pub use pascal::{pascal_diagram, pascal_epsilon_potential, pascal_path};
pub use uhf::uhf_from_group_walk;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkewError {
    #[error("paths not tail equivalent")]
    NotTailRelated,
    #[error("initial window is empty")]
    EmptyWindow,
    #[error("window too small: {0} is not a reachable skew vertex")]
    OutsideWindow(String),
    #[error("no value given for skew vertex {0}")]
    MissingValue(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("weight violation: {0}")]
    Weights(String),
    #[error("potential does not match the diagram: {0}")]
    Potential(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

impl SkewError {
    pub fn invariant(&self) -> &'static str {
        match self {
            SkewError::NotTailRelated => "tail equivalence",
            SkewError::EmptyWindow => "non-empty window",
            SkewError::OutsideWindow(_) => "window contains reachable supports",
            SkewError::MissingValue(_) => "value on every skew vertex",
            SkewError::Parameter(_) => "parameter range",
            SkewError::Weights(_) => "probability weights",
            SkewError::Potential(_) => "potential covers every edge",
            SkewError::Walk(e) => e.invariant(),
        }
    }
}

/// A skew vertex or edge: base index plus group coordinate.
pub type SkewLabel = (usize, GroupElement);

/// Labels of a skew diagram, comparable across window translations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewLabels {
    pub vertices: Vec<BTreeSet<SkewLabel>>,
    /// `(edge, source, range)` per floor.
    pub edges: Vec<BTreeSet<(SkewLabel, SkewLabel, SkewLabel)>>,
}

/// The reachable part of `Γ(ρ)` from `V(0) × W₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewDiagram {
    base: Arc<BratteliDiagram>,
    potential: EdgePotential,
    windows: Vec<Vec<GroupElement>>,
    vertices: Vec<Vec<SkewLabel>>,
    edges: Vec<Vec<SkewLabel>>,
    diagram: Arc<BratteliDiagram>,
}

fn label_name(base_id: &str, g: &GroupElement) -> String {
    format!("{base_id}@{g}")
}

/// Builds the skew product level by level by forward reachability.
pub fn skew_product(
    base: Arc<BratteliDiagram>,
    potential: EdgePotential,
    initial_window: &[GroupElement],
) -> Result<SkewDiagram, SkewError> {
    if initial_window.is_empty() {
        return Err(SkewError::EmptyWindow);
    }
    let group = potential.group();
    if let Some(g) = initial_window.iter().find(|g| !group.contains(g)) {
        return Err(SkewError::Potential(format!("window element {g} is not in the group")));
    }
    if potential.levels().len() != base.depth()
        || (1..=base.depth()).any(|n| potential.levels()[n - 1].len() != base.level(n).edge_count())
    {
        return Err(SkewError::Potential("one value per edge required".into()));
    }
    let window0: BTreeSet<GroupElement> = initial_window.iter().cloned().collect();
    let mut vertices: Vec<Vec<SkewLabel>> = vec![(0..base.vertex_count(0))
        .flat_map(|v| window0.iter().map(move |g| (v, g.clone())))
        .collect()];
    let mut edges = Vec::with_capacity(base.depth());
    for n in 1..=base.depth() {
        let floor = base.level(n);
        let mut by_source: BTreeMap<usize, Vec<GroupElement>> = BTreeMap::new();
        for (v, g) in &vertices[n - 1] {
            by_source.entry(*v).or_default().push(g.clone());
        }
        let mut level_edges = Vec::new();
        let mut reached = BTreeSet::new();
        for e in 0..floor.edge_count() {
            let Some(gs) = by_source.get(&floor.src(e)) else {
                continue;
            };
            for g in gs {
                reached.insert((floor.rng(e), group.mul(g, potential.get(n, e))));
                level_edges.push((e, g.clone()));
            }
        }
        edges.push(level_edges);
        vertices.push(reached.into_iter().collect());
    }

    let vertex_names: Vec<Vec<String>> = vertices
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|(v, g)| label_name(base.vertex_id(n, *v), g))
                .collect()
        })
        .collect();
    let edge_specs: Vec<Vec<EdgeSpec>> = edges
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let n = i + 1;
            let floor = base.level(n);
            level
                .iter()
                .map(|(e, g)| {
                    let target = group.mul(g, potential.get(n, *e));
                    EdgeSpec::new(
                        label_name(floor.edge_id(*e), g),
                        label_name(base.vertex_id(n - 1, floor.src(*e)), g),
                        label_name(base.vertex_id(n, floor.rng(*e)), &target),
                    )
                })
                .collect()
        })
        .collect();
    let diagram = BratteliDiagram::new(vertex_names, edge_specs).map_err(|e| SkewError::Potential(e.to_string()))?;
    let windows = vertices
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|(_, g)| g.clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect();
    Ok(SkewDiagram {
        base,
        potential,
        windows,
        vertices,
        edges,
        diagram: Arc::new(diagram),
    })
}

impl SkewDiagram {
    /// The skew product as an ordinary diagram.
    pub fn diagram(&self) -> &Arc<BratteliDiagram> {
        &self.diagram
    }

    pub fn base(&self) -> &Arc<BratteliDiagram> {
        &self.base
    }

    pub fn potential(&self) -> &EdgePotential {
        &self.potential
    }

    /// Group coordinates present at level `n`, sorted.
    pub fn window(&self, n: usize) -> &[GroupElement] {
        &self.windows[n]
    }

    /// `(v, g)` for each skew vertex of level `n`, in index order.
    pub fn vertices(&self, n: usize) -> &[SkewLabel] {
        &self.vertices[n]
    }

    /// `(e, g)` for each skew edge of floor `n`, in index order.
    pub fn edges(&self, n: usize) -> &[SkewLabel] {
        &self.edges[n - 1]
    }

    pub fn vertex_index(&self, n: usize, v: usize, g: &GroupElement) -> Option<usize> {
        self.vertices[n]
            .binary_search_by(|(bv, bg)| (bv, bg).cmp(&(&v, g)))
            .ok()
    }

    pub fn labels(&self) -> SkewLabels {
        self.translated_labels(&self.potential.group().identity())
    }

    /// Labels after the left action `h·(v, g) = (v, hg)`.
    pub fn translated_labels(&self, h: &GroupElement) -> SkewLabels {
        let group = self.potential.group();
        let act = |(v, g): &SkewLabel| (*v, group.mul(h, g));
        let vertices = self.vertices.iter().map(|l| l.iter().map(act).collect()).collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, level)| {
                let floor = self.diagram.level(i + 1);
                level
                    .iter()
                    .enumerate()
                    .map(|(k, label)| {
                        (
                            act(label),
                            act(&self.vertices[i][floor.src(k)]),
                            act(&self.vertices[i + 1][floor.rng(k)]),
                        )
                    })
                    .collect()
            })
            .collect();
        SkewLabels { vertices, edges }
    }

    /// Every broken law: the source/range law on each skew edge, window
    /// membership, and the diagram invariants of the skew product.
    pub fn law_violations(&self) -> Vec<String> {
        let group = self.potential.group();
        let mut out: Vec<String> = validate_diagram(&self.diagram).iter().map(|v| v.to_string()).collect();
        for n in 1..=self.base.depth() {
            let base_floor = self.base.level(n);
            let floor = self.diagram.level(n);
            for (k, (e, g)) in self.edges[n - 1].iter().enumerate() {
                let (sv, sg) = &self.vertices[n - 1][floor.src(k)];
                let (rv, rg) = &self.vertices[n][floor.rng(k)];
                if *sv != base_floor.src(*e) || sg != g {
                    out.push(format!("floor {n}: source law fails on edge {}", floor.edge_id(k)));
                }
                if *rv != base_floor.rng(*e) || *rg != group.mul(g, self.potential.get(n, *e)) {
                    out.push(format!("floor {n}: range law fails on edge {}", floor.edge_id(k)));
                }
            }
        }
        for (n, level) in self.vertices.iter().enumerate() {
            for (_, g) in level {
                if self.windows[n].binary_search(g).is_err() {
                    out.push(format!("level {n}: {g} outside window"));
                }
            }
        }
        out
    }

    /// The walk `(p̃, ν₀ × λ₀)` with `p̃(e, g) = p(e)`; `lambda0` is normalised
    /// to a probability and must weight exactly the initial window.
    pub fn lift_walk(
        &self,
        base_walk: &RandomWalk,
        lambda0: &[(GroupElement, Rational)],
    ) -> Result<RandomWalk, SkewError> {
        let mut weights: BTreeMap<&GroupElement, &Rational> = BTreeMap::new();
        for (g, w) in lambda0 {
            if self.windows[0].binary_search(g).is_err() {
                return Err(SkewError::OutsideWindow(format!("{g} at level 0")));
            }
            if !w.is_positive() {
                return Err(SkewError::Weights(format!("λ₀({g}) = {}", format_rational(w))));
            }
            weights.insert(g, w);
        }
        if let Some(g) = self.windows[0].iter().find(|g| !weights.contains_key(g)) {
            return Err(SkewError::MissingValue(format!("λ₀ at {g}")));
        }
        let total: Rational = weights.values().copied().sum();
        let nu0 = self.vertices[0]
            .iter()
            .map(|(v, g)| &base_walk.initial()[*v] * weights[g] / &total)
            .collect();
        let p = (1..=self.base.depth())
            .map(|n| {
                self.edges[n - 1]
                    .iter()
                    .map(|(e, _)| base_walk.transition().get(n, *e).clone())
                    .collect()
            })
            .collect();
        Ok(RandomWalk::new(
            self.diagram.clone(),
            TransitionProbability::new(p),
            InitialDistribution(nu0),
        )?)
    }
}

/// `ρ(a) ρ(b)⁻¹` for tail-related `a`, `b`.
pub fn group_cocycle(potential: &EdgePotential, a: &FinitePath, b: &FinitePath) -> Result<GroupElement, SkewError> {
    if !tail_related(a, b) {
        return Err(SkewError::NotTailRelated);
    }
    let group = potential.group();
    Ok(group.mul(&potential.along(a), &group.inv(&potential.along(b))))
}

/// The cotransition `q` of a walk as a `ℚ₊*`-valued potential.
pub fn cotransition_potential(walk: &RandomWalk) -> EdgePotential {
    let levels = walk
        .cotransition()
        .0
        .levels()
        .iter()
        .map(|l| l.iter().cloned().map(GroupElement::Rational).collect())
        .collect();
    EdgePotential::new(GroupSpec::PositiveRationals, levels).expect("cotransition is positive")
}

/// Harmonic sequence of the lifted walk on the skew diagram with terminal
/// values given per skew vertex `(v, g)` of the last level.
///
/// Every terminal skew vertex needs a value, and every value must sit on a
/// reachable skew vertex.
pub fn skew_harmonic(
    sd: &SkewDiagram,
    base_walk: &RandomWalk,
    lambda0: &[(GroupElement, Rational)],
    terminal: &[(usize, GroupElement, Rational)],
) -> Result<HarmonicSequence, SkewError> {
    let lifted = sd.lift_walk(base_walk, lambda0)?;
    let depth = sd.base.depth();
    let mut values: Vec<Option<Rational>> = vec![None; sd.vertices[depth].len()];
    for (v, g, x) in terminal {
        let idx = sd.vertex_index(depth, *v, g).ok_or_else(|| {
            let name = sd
                .base
                .vertex_ids(depth)
                .get(*v)
                .map(|id| label_name(id, g))
                .unwrap_or_else(|| format!("#{v}@{g}"));
            SkewError::OutsideWindow(name)
        })?;
        values[idx] = Some(x.clone());
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| SkewError::MissingValue(sd.diagram.vertex_id(depth, i).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(harmonic_from_terminal(&lifted, &values).expect("one value per terminal skew vertex"))
}

/// Zero on every terminal skew vertex, for building terminal data.
pub fn terminal_labels(sd: &SkewDiagram) -> Vec<(usize, GroupElement, Rational)> {
    sd.vertices[sd.base.depth()]
        .iter()
        .map(|(v, g)| (*v, g.clone(), Rational::zero()))
        .collect()
}
