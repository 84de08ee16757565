use std::collections::HashMap;
use std::sync::Arc;

use num::traits::{Signed, Zero};

use super::{CotransitionProbability, WalkError};
use crate::diagram::{enumerate_paths, BratteliDiagram, FinitePath};
use crate::rational::{format_rational, Rational};

/// A finite measure on paths given by a cotransition `q` and q-compatible
/// one-dimensional masses `(νₙ)`: `m(Z(a)) = ν_{|a|}(r(a)) q(a)`.
///
/// Unlike [`super::RandomWalk`] this allows vertices of zero mass and total
/// mass other than one, which is what conditioned components and
/// harmonic reweightings produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMeasure {
    diagram: Arc<BratteliDiagram>,
    q: CotransitionProbability,
    nu: Vec<Vec<Rational>>,
}

impl QMeasure {
    pub(crate) fn new_unchecked(
        diagram: Arc<BratteliDiagram>,
        q: CotransitionProbability,
        nu: Vec<Vec<Rational>>,
    ) -> Self {
        Self { diagram, q, nu }
    }

    /// Checks non-negativity and exact q-compatibility of `nu`.
    pub fn new(
        diagram: Arc<BratteliDiagram>,
        q: CotransitionProbability,
        nu: Vec<Vec<Rational>>,
    ) -> Result<Self, WalkError> {
        q.validate(&diagram)?;
        if nu.len() != diagram.depth() + 1 {
            return Err(WalkError::Shape(format!(
                "{} mass levels for depth {}",
                nu.len(),
                diagram.depth()
            )));
        }
        for (n, level) in nu.iter().enumerate() {
            if level.len() != diagram.vertex_count(n) {
                return Err(WalkError::Shape(format!("level {n} has {} masses", level.len())));
            }
            if let Some(v) = level.iter().position(|m| m.is_negative()) {
                return Err(WalkError::Support(format!(
                    "negative mass at vertex {} of level {n}",
                    diagram.vertex_id(n, v)
                )));
            }
        }
        for n in 1..=diagram.depth() {
            let floor = diagram.level(n);
            for v in 0..diagram.vertex_count(n - 1) {
                let pushed: Rational = floor
                    .out_edges(v)
                    .iter()
                    .map(|&e| &nu[n][floor.rng(e)] * q.get(n, e))
                    .sum();
                if pushed != nu[n - 1][v] {
                    return Err(WalkError::Incompatible {
                        level: n,
                        vertex: diagram.vertex_id(n - 1, v).to_string(),
                        expected: format_rational(&nu[n - 1][v]),
                        found: format_rational(&pushed),
                    });
                }
            }
        }
        Ok(Self { diagram, q, nu })
    }

    pub fn diagram(&self) -> &Arc<BratteliDiagram> {
        &self.diagram
    }

    pub fn cotransition(&self) -> &CotransitionProbability {
        &self.q
    }

    pub fn distribution(&self, n: usize) -> &[Rational] {
        &self.nu[n]
    }

    pub fn total_mass(&self) -> Rational {
        self.nu[0].iter().sum()
    }

    pub fn cylinder_measure(&self, a: &FinitePath) -> Result<Rational, WalkError> {
        if a.start_level() != 0 {
            return Err(WalkError::NotRooted);
        }
        if a.end_level() > self.diagram.depth() {
            return Err(WalkError::PathOutOfDiagram);
        }
        Ok(&self.nu[a.len()][a.range()] * self.q.along(a))
    }

    pub fn cylinder_table(&self, depth: usize) -> Result<CylinderTable, WalkError> {
        CylinderTable::from_fn(self.diagram.clone(), depth, |a| {
            &self.nu[a.len()][a.range()] * self.q.along(a)
        })
    }
}

/// Masses of every rooted cylinder of length `0..=depth`, listed in the
/// lexicographic path order of [`enumerate_paths`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderTable {
    diagram: Arc<BratteliDiagram>,
    levels: Vec<Vec<(FinitePath, Rational)>>,
    index: HashMap<FinitePath, (usize, usize)>,
}

impl CylinderTable {
    pub fn from_fn(
        diagram: Arc<BratteliDiagram>,
        depth: usize,
        mut mass: impl FnMut(&FinitePath) -> Rational,
    ) -> Result<Self, WalkError> {
        let mut levels = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let paths = enumerate_paths(&diagram, 0, n).map_err(|_| WalkError::PathOutOfDiagram)?;
            levels.push(
                paths
                    .into_iter()
                    .map(|a| {
                        let m = mass(&a);
                        (a, m)
                    })
                    .collect(),
            );
        }
        Ok(Self::assemble(diagram, levels))
    }

    /// Table determined by its full-length masses, listed in path order;
    /// shorter cylinders get the sums of their extensions.
    pub fn from_top_level(diagram: Arc<BratteliDiagram>, depth: usize, top: Vec<Rational>) -> Result<Self, WalkError> {
        let paths = enumerate_paths(&diagram, 0, depth).map_err(|_| WalkError::PathOutOfDiagram)?;
        if paths.len() != top.len() {
            return Err(WalkError::Shape(format!(
                "{} masses for {} paths of length {depth}",
                top.len(),
                paths.len()
            )));
        }
        let mut sums: HashMap<FinitePath, Rational> = HashMap::new();
        for (a, m) in paths.iter().zip(&top) {
            for k in 0..depth {
                *sums.entry(a.truncate(&diagram, k)).or_insert_with(Rational::zero) += m;
            }
        }
        let mut levels = Vec::with_capacity(depth + 1);
        for n in 0..depth {
            let level = enumerate_paths(&diagram, 0, n)
                .map_err(|_| WalkError::PathOutOfDiagram)?
                .into_iter()
                .map(|a| {
                    let m = sums.get(&a).cloned().unwrap_or_else(Rational::zero);
                    (a, m)
                })
                .collect();
            levels.push(level);
        }
        levels.push(paths.into_iter().zip(top).collect());
        Ok(Self::assemble(diagram, levels))
    }

    fn assemble(diagram: Arc<BratteliDiagram>, levels: Vec<Vec<(FinitePath, Rational)>>) -> Self {
        let mut index = HashMap::new();
        for (n, level) in levels.iter().enumerate() {
            for (i, (a, _)) in level.iter().enumerate() {
                index.insert(a.clone(), (n, i));
            }
        }
        Self { diagram, levels, index }
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn diagram(&self) -> &Arc<BratteliDiagram> {
        &self.diagram
    }

    pub fn mass(&self, a: &FinitePath) -> Option<&Rational> {
        self.index.get(a).map(|&(n, i)| &self.levels[n][i].1)
    }

    pub fn set_mass(&mut self, a: &FinitePath, mass: Rational) -> bool {
        match self.index.get(a) {
            Some(&(n, i)) => {
                self.levels[n][i].1 = mass;
                true
            }
            None => false,
        }
    }

    /// `(path, mass)` pairs of length `n`, in path order.
    pub fn level(&self, n: usize) -> &[(FinitePath, Rational)] {
        &self.levels[n]
    }
}

/// Outcome of [`check_q_measure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QCheck {
    Holds,
    /// First cylinder where `m(Z(a)) ≠ ν^m_n(r(a)) q(a)`.
    Fails {
        path: FinitePath,
        mass: Rational,
        expected: Rational,
    },
}

impl QCheck {
    pub fn holds(&self) -> bool {
        matches!(self, QCheck::Holds)
    }
}

/// Decides whether the cylinder measure `table` factors through the
/// expectation chain of `q` up to `depth`.
///
/// At every length `n` the marginal `ν^m_n(w) = Σ_{|a|=n, r(a)=w} m(a)` is
/// pushed back through `qₙ, …, q₁`; `m` is a q-measure exactly when this
/// reproduces `m(Z(a)) = ν^m_n(r(a)) q(a)` on every cylinder. `table` must be
/// a probability measure on cylinders (non-negative, additive, total 1).
pub fn check_q_measure(
    d: &BratteliDiagram,
    q: &CotransitionProbability,
    table: &CylinderTable,
    depth: usize,
) -> Result<QCheck, WalkError> {
    q.validate(d)?;
    if depth > table.depth() || depth > d.depth() {
        return Err(WalkError::Shape(format!(
            "depth {depth} exceeds table depth {} or diagram depth {}",
            table.depth(),
            d.depth()
        )));
    }
    for n in 0..=depth {
        for (a, m) in table.level(n) {
            if m.is_negative() {
                return Err(WalkError::NotAdditive(format!("negative mass on {}", d.path_label(a))));
            }
        }
    }
    let total: Rational = table.level(0).iter().map(|(_, m)| m).sum();
    if total != Rational::from_integer(1.into()) {
        return Err(WalkError::NotAdditive(format!(
            "total mass {}",
            format_rational(&total)
        )));
    }
    for n in 0..depth {
        for (a, m) in table.level(n) {
            let children: Rational = d
                .extensions(a)
                .iter()
                .map(|c| table.mass(c).cloned().unwrap_or_else(Rational::zero))
                .sum();
            if &children != m {
                return Err(WalkError::NotAdditive(format!(
                    "cylinder {} has mass {} but its extensions sum to {}",
                    d.path_label(a),
                    format_rational(m),
                    format_rational(&children)
                )));
            }
        }
    }
    for n in 0..=depth {
        let mut marginal = vec![Rational::zero(); d.vertex_count(n)];
        for (a, m) in table.level(n) {
            marginal[a.range()] += m;
        }
        for (a, m) in table.level(n) {
            let expected = &marginal[a.range()] * q.along(a);
            if &expected != m {
                return Ok(QCheck::Fails {
                    path: a.clone(),
                    mass: m.clone(),
                    expected,
                });
            }
        }
    }
    Ok(QCheck::Holds)
}
