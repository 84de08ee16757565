//! Random walks on a Bratteli diagram.
//!
//! A walk is a transition probability `p` (weights on out-edges) together with
//! an initial distribution `ν₀`. Everything else is derived exactly: the
//! one-dimensional distributions `νₙ(w) = Σ_{r(e)=w} pₙ(e) ν_{n-1}(s(e))`, the
//! cotransition probability `qₙ(e) = ν_{n-1}(s(e)) pₙ(e) / νₙ(r(e))`, the
//! Markov measure of cylinders `μ(Z(a)) = ν₀(s(a)) p(a)` and the
//! Radon–Nikodym cocycle `D(az, bz) = q(a) / q(b)`.
//!
//! Full support is a constructor requirement: every `p(e)` and every `ν₀(v)`
//! must be strictly positive, so every `νₙ` is too and `q` is well defined.

mod qmeasure;
mod sample;

use std::sync::Arc;

use num::traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diagram::{tail_related, validate_diagram, BratteliDiagram, FinitePath};
use crate::rational::{format_rational, Rational};

pub use qmeasure::{check_q_measure, CylinderTable, QCheck, QMeasure};
pub use sample::PathSampler;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("diagram invalid: {0}")]
    InvalidDiagram(String),
    #[error("weights do not match the diagram shape: {0}")]
    Shape(String),
    #[error("support violation: {0}")]
    Support(String),
    #[error("q-compatibility fails at level {level}, vertex {vertex}: expected {expected}, found {found}")]
    Incompatible {
        level: usize,
        vertex: String,
        expected: String,
        found: String,
    },
    #[error("path must start at level 0")]
    NotRooted,
    #[error("path leaves the diagram")]
    PathOutOfDiagram,
    #[error("paths not tail equivalent")]
    NotTailRelated,
    #[error("not a measure on cylinders: {0}")]
    NotAdditive(String),
}

impl WalkError {
    /// Short name of the invariant behind the error.
    pub fn invariant(&self) -> &'static str {
        match self {
            WalkError::InvalidDiagram(_) => "valid diagram",
            WalkError::Shape(_) => "weights cover every edge",
            WalkError::Support(_) => "full support",
            WalkError::Incompatible { .. } => "q-compatibility",
            WalkError::NotRooted => "rooted path",
            WalkError::PathOutOfDiagram => "path in diagram",
            WalkError::NotTailRelated => "tail equivalence",
            WalkError::NotAdditive(_) => "additivity",
        }
    }
}

/// Per-level edge weights; `levels[n-1][e]` is the weight of edge `e ∈ E(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeights {
    levels: Vec<Vec<Rational>>,
}

impl EdgeWeights {
    pub fn new(levels: Vec<Vec<Rational>>) -> Self {
        Self { levels }
    }

    /// Weight of `e ∈ E(n)`.
    pub fn get(&self, n: usize, e: usize) -> &Rational {
        &self.levels[n - 1][e]
    }

    pub fn level(&self, n: usize) -> &[Rational] {
        &self.levels[n - 1]
    }

    pub fn levels(&self) -> &[Vec<Rational>] {
        &self.levels
    }

    fn check_shape(&self, d: &BratteliDiagram) -> Result<(), WalkError> {
        if self.levels.len() != d.depth() {
            return Err(WalkError::Shape(format!(
                "{} weight levels for depth {}",
                self.levels.len(),
                d.depth()
            )));
        }
        for (i, level) in self.levels.iter().enumerate() {
            if level.len() != d.level(i + 1).edge_count() {
                return Err(WalkError::Shape(format!(
                    "level {} has {} weights for {} edges",
                    i + 1,
                    level.len(),
                    d.level(i + 1).edge_count()
                )));
            }
        }
        Ok(())
    }

    fn check_positive(&self, d: &BratteliDiagram) -> Result<(), WalkError> {
        for (i, level) in self.levels.iter().enumerate() {
            for (e, w) in level.iter().enumerate() {
                if !w.is_positive() {
                    return Err(WalkError::Support(format!(
                        "weight {} on edge {} at level {}",
                        format_rational(w),
                        d.level(i + 1).edge_id(e),
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Product of the weights along a path.
    pub fn along(&self, path: &FinitePath) -> Rational {
        path.edges().iter().enumerate().fold(Rational::one(), |acc, (i, &e)| {
            acc * self.get(path.start_level() + i + 1, e)
        })
    }
}

/// Forward kernel: `Σ_{s(e)=v} p(e) = 1`, `p > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionProbability(pub EdgeWeights);

/// Backward kernel: `Σ_{r(e)=w} q(e) = 1`, `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotransitionProbability(pub EdgeWeights);

impl TransitionProbability {
    pub fn new(levels: Vec<Vec<Rational>>) -> Self {
        Self(EdgeWeights::new(levels))
    }

    pub fn validate(&self, d: &BratteliDiagram) -> Result<(), WalkError> {
        self.0.check_shape(d)?;
        self.0.check_positive(d)?;
        for n in 1..=d.depth() {
            let floor = d.level(n);
            for v in 0..d.vertex_count(n - 1) {
                let total: Rational = floor.out_edges(v).iter().map(|&e| self.0.get(n, e)).sum();
                if !total.is_one() {
                    return Err(WalkError::Support(format!(
                        "out-weights of vertex {} at level {} sum to {}",
                        d.vertex_id(n - 1, v),
                        n - 1,
                        format_rational(&total)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, n: usize, e: usize) -> &Rational {
        self.0.get(n, e)
    }
}

impl CotransitionProbability {
    pub fn new(levels: Vec<Vec<Rational>>) -> Self {
        Self(EdgeWeights::new(levels))
    }

    pub fn validate(&self, d: &BratteliDiagram) -> Result<(), WalkError> {
        self.0.check_shape(d)?;
        self.0.check_positive(d)?;
        for n in 1..=d.depth() {
            let floor = d.level(n);
            for w in 0..d.vertex_count(n) {
                let total: Rational = floor.in_edges(w).iter().map(|&e| self.0.get(n, e)).sum();
                if !total.is_one() {
                    return Err(WalkError::Support(format!(
                        "in-weights of vertex {} at level {} sum to {}",
                        d.vertex_id(n, w),
                        n,
                        format_rational(&total)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, n: usize, e: usize) -> &Rational {
        self.0.get(n, e)
    }

    /// `q(a) = q(a₁)···q(aₙ)`.
    pub fn along(&self, path: &FinitePath) -> Rational {
        self.0.along(path)
    }
}

/// Probability vector on `V(0)` with full support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialDistribution(pub Vec<Rational>);

impl InitialDistribution {
    pub fn point_mass(len: usize, at: usize) -> Self {
        Self(
            (0..len)
                .map(|i| if i == at { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }

    pub fn uniform(len: usize) -> Self {
        Self(vec![Rational::new(1.into(), (len as i64).into()); len])
    }

    pub fn validate(&self, d: &BratteliDiagram) -> Result<(), WalkError> {
        check_probability_vector(d, 0, &self.0)
    }
}

fn check_probability_vector(d: &BratteliDiagram, level: usize, nu: &[Rational]) -> Result<(), WalkError> {
    if nu.len() != d.vertex_count(level) {
        return Err(WalkError::Shape(format!(
            "distribution on level {level} has {} entries for {} vertices",
            nu.len(),
            d.vertex_count(level)
        )));
    }
    for (v, m) in nu.iter().enumerate() {
        if !m.is_positive() {
            return Err(WalkError::Support(format!(
                "mass {} at vertex {} of level {level}",
                format_rational(m),
                d.vertex_id(level, v)
            )));
        }
    }
    let total: Rational = nu.iter().sum();
    if !total.is_one() {
        return Err(WalkError::Support(format!(
            "distribution on level {level} sums to {}",
            format_rational(&total)
        )));
    }
    Ok(())
}

/// A random walk `(p, ν₀)` with its derived `(q, (νₙ))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomWalk {
    diagram: Arc<BratteliDiagram>,
    p: TransitionProbability,
    nu: Vec<Vec<Rational>>,
    q: CotransitionProbability,
}

impl RandomWalk {
    /// Builds the walk and derives `νₙ` and `qₙ` exactly.
    pub fn new(
        diagram: Arc<BratteliDiagram>,
        p: TransitionProbability,
        nu0: InitialDistribution,
    ) -> Result<Self, WalkError> {
        let violations = validate_diagram(&diagram);
        if let Some(v) = violations.first() {
            return Err(WalkError::InvalidDiagram(v.to_string()));
        }
        p.validate(&diagram)?;
        nu0.validate(&diagram)?;

        let depth = diagram.depth();
        let mut nu = Vec::with_capacity(depth + 1);
        nu.push(nu0.0);
        let mut q_levels = Vec::with_capacity(depth);
        for n in 1..=depth {
            let floor = diagram.level(n);
            let prev = &nu[n - 1];
            // μₙ(e) = ν_{n-1}(s(e)) pₙ(e)
            let edge_mass: Vec<Rational> = (0..floor.edge_count())
                .map(|e| &prev[floor.src(e)] * p.get(n, e))
                .collect();
            let mut next = vec![Rational::zero(); diagram.vertex_count(n)];
            for (e, m) in edge_mass.iter().enumerate() {
                next[floor.rng(e)] += m;
            }
            let q_n = edge_mass
                .into_iter()
                .enumerate()
                .map(|(e, m)| m / &next[floor.rng(e)])
                .collect();
            q_levels.push(q_n);
            nu.push(next);
        }
        Ok(Self {
            diagram,
            p,
            nu,
            q: CotransitionProbability::new(q_levels),
        })
    }

    /// The unique walk with cotransition `q` and one-dimensional
    /// distributions `nus[0..=N]`, which must be exactly q-compatible:
    /// `ν_{n-1}(v) = Σ_{s(e)=v} νₙ(r(e)) qₙ(e)`.
    pub fn from_cotransition(
        diagram: Arc<BratteliDiagram>,
        q: CotransitionProbability,
        nus: Vec<Vec<Rational>>,
    ) -> Result<Self, WalkError> {
        let violations = validate_diagram(&diagram);
        if let Some(v) = violations.first() {
            return Err(WalkError::InvalidDiagram(v.to_string()));
        }
        q.validate(&diagram)?;
        if nus.len() != diagram.depth() + 1 {
            return Err(WalkError::Shape(format!(
                "{} distributions for depth {}",
                nus.len(),
                diagram.depth()
            )));
        }
        for (n, nu) in nus.iter().enumerate() {
            check_probability_vector(&diagram, n, nu)?;
        }
        for n in 1..=diagram.depth() {
            let floor = diagram.level(n);
            for v in 0..diagram.vertex_count(n - 1) {
                let pushed: Rational = floor
                    .out_edges(v)
                    .iter()
                    .map(|&e| &nus[n][floor.rng(e)] * q.get(n, e))
                    .sum();
                if pushed != nus[n - 1][v] {
                    return Err(WalkError::Incompatible {
                        level: n,
                        vertex: diagram.vertex_id(n - 1, v).to_string(),
                        expected: format_rational(&nus[n - 1][v]),
                        found: format_rational(&pushed),
                    });
                }
            }
        }
        let p_levels = (1..=diagram.depth())
            .map(|n| {
                let floor = diagram.level(n);
                (0..floor.edge_count())
                    .map(|e| &nus[n][floor.rng(e)] * q.get(n, e) / &nus[n - 1][floor.src(e)])
                    .collect()
            })
            .collect();
        Ok(Self {
            diagram,
            p: TransitionProbability::new(p_levels),
            nu: nus,
            q,
        })
    }

    pub fn diagram(&self) -> &Arc<BratteliDiagram> {
        &self.diagram
    }

    pub fn depth(&self) -> usize {
        self.diagram.depth()
    }

    pub fn transition(&self) -> &TransitionProbability {
        &self.p
    }

    pub fn cotransition(&self) -> &CotransitionProbability {
        &self.q
    }

    pub fn initial(&self) -> &[Rational] {
        &self.nu[0]
    }

    /// `νₙ` on `V(n)`.
    pub fn distribution(&self, n: usize) -> &[Rational] {
        &self.nu[n]
    }

    pub fn distributions(&self) -> &[Vec<Rational>] {
        &self.nu
    }

    fn check_rooted(&self, a: &FinitePath) -> Result<(), WalkError> {
        if a.start_level() != 0 {
            return Err(WalkError::NotRooted);
        }
        if a.end_level() > self.depth() || a.source() >= self.diagram.vertex_count(0) {
            return Err(WalkError::PathOutOfDiagram);
        }
        Ok(())
    }

    /// `μ(Z(a)) = ν₀(s(a)) p(a)`.
    pub fn cylinder_measure(&self, a: &FinitePath) -> Result<Rational, WalkError> {
        self.check_rooted(a)?;
        Ok(&self.nu[0][a.source()] * self.p.0.along(a))
    }

    /// `q(a)`: probability of having travelled along `a` given the position
    /// `r(a)` at time `|a|`.
    pub fn path_cotransition(&self, a: &FinitePath) -> Result<Rational, WalkError> {
        self.check_rooted(a)?;
        Ok(self.q.along(a))
    }

    /// `D(az, bz) = q(a) / q(b)` for tail-related `a`, `b`.
    pub fn radon_nikodym(&self, a: &FinitePath, b: &FinitePath) -> Result<Rational, WalkError> {
        self.check_rooted(a)?;
        self.check_rooted(b)?;
        if !tail_related(a, b) {
            return Err(WalkError::NotTailRelated);
        }
        Ok(self.q.along(a) / self.q.along(b))
    }

    /// The Markov measure seen as a q-measure `(q, (νₙ))`.
    pub fn markov_measure(&self) -> QMeasure {
        QMeasure::new_unchecked(self.diagram.clone(), self.q.clone(), self.nu.clone())
    }

    /// Cylinder masses up to `depth`.
    pub fn cylinder_table(&self, depth: usize) -> Result<CylinderTable, WalkError> {
        CylinderTable::from_fn(self.diagram.clone(), depth, |a| {
            &self.nu[0][a.source()] * self.p.0.along(a)
        })
    }

    /// A path of length `depth` drawn from the Markov measure; fixed seed,
    /// fixed path.
    pub fn sample_path(&self, seed: u64, depth: usize) -> FinitePath {
        PathSampler::new(self).sample_seeded(seed, depth)
    }
}
