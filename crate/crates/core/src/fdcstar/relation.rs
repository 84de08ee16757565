use std::collections::HashSet;

use super::FdError;

/// A finite equivalence relation given by a surjection `r : X → V`; the
/// classes are the fibres of `r`.
///
/// Pairs of `R` are indexed by coordinates: classes in `V` order, and inside
/// the class of `v` the pairs `(x, y)` in row-major order of the members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteEquivRelation {
    points: Vec<String>,
    classes: Vec<String>,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    position: Vec<usize>,
    offsets: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

/// Dimension and block structure of `C*(R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraStructure {
    pub dimension: usize,
    pub block_sizes: Vec<usize>,
}

impl FiniteEquivRelation {
    pub fn new(points: Vec<String>, classes: Vec<String>, class_of: Vec<usize>) -> Result<Self, FdError> {
        if points.len() != class_of.len() {
            return Err(FdError::Relation(format!(
                "{} points but {} class labels",
                points.len(),
                class_of.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(p) = points.iter().find(|p| !seen.insert(p.as_str())) {
            return Err(FdError::Relation(format!("duplicate point {p}")));
        }
        let mut seen = HashSet::new();
        if let Some(c) = classes.iter().find(|c| !seen.insert(c.as_str())) {
            return Err(FdError::Relation(format!("duplicate class {c}")));
        }
        let mut members = vec![Vec::new(); classes.len()];
        let mut position = Vec::with_capacity(points.len());
        for (x, &v) in class_of.iter().enumerate() {
            let class = members
                .get_mut(v)
                .ok_or_else(|| FdError::Relation(format!("point {} maps to missing class #{v}", points[x])))?;
            position.push(class.len());
            class.push(x);
        }
        if let Some(v) = members.iter().position(|m| m.is_empty()) {
            return Err(FdError::Relation(format!("class {} is empty", classes[v])));
        }
        let mut offsets = Vec::with_capacity(classes.len());
        let mut pairs = Vec::new();
        for m in &members {
            offsets.push(pairs.len());
            for &x in m {
                for &y in m {
                    pairs.push((x, y));
                }
            }
        }
        Ok(Self {
            points,
            classes,
            class_of,
            members,
            position,
            offsets,
            pairs,
        })
    }

    /// Builds the relation from `(point, class)` pairs; classes are ordered by
    /// first appearance.
    pub fn from_ids(map: &[(&str, &str)]) -> Result<Self, FdError> {
        let mut classes: Vec<String> = Vec::new();
        let class_of = map
            .iter()
            .map(|(_, c)| match classes.iter().position(|k| k == c) {
                Some(i) => i,
                None => {
                    classes.push(c.to_string());
                    classes.len() - 1
                }
            })
            .collect();
        Self::new(map.iter().map(|(p, _)| p.to_string()).collect(), classes, class_of)
    }

    /// The identity relation on `n` points named `0..n`.
    pub fn discrete(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::new(names.clone(), names, (0..n).collect()).expect("discrete relation")
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn point_id(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn point_index(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }

    pub fn class_id(&self, v: usize) -> &str {
        &self.classes[v]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn members(&self, v: usize) -> &[usize] {
        &self.members[v]
    }

    /// Position of `x` inside its class.
    pub fn position(&self, x: usize) -> usize {
        self.position[x]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn dimension(&self) -> usize {
        self.pairs.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    /// First coordinate of the block of class `v`.
    pub fn block_offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    /// Coordinate of `(x, y)`, if related.
    pub fn coord(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.class_of[x];
        (self.class_of[y] == v).then(|| self.offsets[v] + self.position[x] * self.members[v].len() + self.position[y])
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.pairs[k]
    }

    /// All pairs of `R` in coordinate order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Whether every pair of `self` is a pair of `other`, on the same points.
    pub fn is_subrelation_of(&self, other: &FiniteEquivRelation) -> bool {
        self.points == other.points && self.pairs.iter().all(|&(x, y)| other.related(x, y))
    }
}

/// Dimension `Σ (class size)²` and the block sizes.
pub fn algebra_of(relation: &FiniteEquivRelation) -> AlgebraStructure {
    AlgebraStructure {
        dimension: relation.dimension(),
        block_sizes: relation.block_sizes(),
    }
}
