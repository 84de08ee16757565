use std::sync::Arc;

use num::traits::{One, Signed};

use super::{EdgePotential, GroupElement, GroupSpec, SkewError};
use crate::diagram::{BratteliDiagram, DiagramError, EdgeSpec, FinitePath};
use crate::rational::{format_rational, Rational};
use crate::walk::{InitialDistribution, RandomWalk, TransitionProbability};

/// The Pascal triangle of depth `depth` with the Bernoulli(`t`) walk.
///
/// `V(n) = {(n,k) : 0 ≤ k ≤ n}` with ids `"n:k"`; `E(n)` holds edges
/// `(n-1,k,ε)` with ids `"n-1:k:ε"` from `(n-1,k)` to `(n,k+ε)`, at index
/// `2k + ε`, so lexicographic path order is the order of bit strings. The
/// walk steps up with probability `t`.
pub fn pascal_diagram(depth: usize, t: Rational) -> Result<(Arc<BratteliDiagram>, RandomWalk), SkewError> {
    if depth == 0 {
        return Err(SkewError::Parameter("depth must be at least 1".into()));
    }
    let one = Rational::one();
    if !t.is_positive() || t >= one {
        return Err(SkewError::Parameter(format!(
            "t = {} not in (0, 1)",
            format_rational(&t)
        )));
    }
    let vertices = (0..=depth)
        .map(|n| (0..=n).map(|k| format!("{n}:{k}")).collect())
        .collect();
    let edges = (1..=depth)
        .map(|n| {
            (0..n)
                .flat_map(|k| {
                    (0..2).map(move |eps| {
                        EdgeSpec::new(
                            format!("{}:{k}:{eps}", n - 1),
                            format!("{}:{k}", n - 1),
                            format!("{n}:{}", k + eps),
                        )
                    })
                })
                .collect()
        })
        .collect();
    let diagram = Arc::new(BratteliDiagram::new(vertices, edges).expect("pascal edges resolve"));
    let down = &one - &t;
    let p = (1..=depth)
        .map(|n| (0..n).flat_map(|_| [down.clone(), t.clone()]).collect())
        .collect();
    let walk = RandomWalk::new(
        diagram.clone(),
        TransitionProbability::new(p),
        InitialDistribution::point_mass(1, 0),
    )?;
    Ok((diagram, walk))
}

/// The rooted Pascal path with steps `bits` (each 0 or 1).
pub fn pascal_path(d: &BratteliDiagram, bits: &[u8]) -> Result<FinitePath, DiagramError> {
    if bits.is_empty() {
        return d.empty_path(0, 0);
    }
    let mut k = 0usize;
    let edges: Vec<usize> = bits
        .iter()
        .map(|&b| {
            let e = 2 * k + usize::from(b);
            k += usize::from(b);
            e
        })
        .collect();
    d.path(0, &edges)
}

/// `ρ(n-1,k,ε) = ε` in `ℤ`: the potential whose skew product recovers the
/// height `k` as group coordinate.
pub fn pascal_epsilon_potential(d: &BratteliDiagram) -> EdgePotential {
    let levels = (1..=d.depth())
        .map(|n| {
            (0..d.level(n).edge_count())
                .map(|e| GroupElement::Lattice(vec![(e % 2) as i64]))
                .collect()
        })
        .collect();
    EdgePotential::new(GroupSpec::Lattice(1), levels).expect("lattice values")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::validate_diagram;
    use crate::rational::ratio;

    #[test]
    fn depth_five_is_valid() {
        let (d, _) = pascal_diagram(5, ratio(1, 2)).unwrap();
        assert!(validate_diagram(&d).is_empty());
        for n in 0..=5 {
            assert_eq!(d.vertex_count(n), n + 1);
        }
    }

    #[test]
    fn eight_paths_at_depth_three() {
        let (d, _) = pascal_diagram(3, ratio(1, 2)).unwrap();
        let paths = crate::diagram::enumerate_paths(&d, 0, 3).unwrap();
        assert_eq!(paths.len(), 8);
        // lexicographic order is bit-string order
        for (i, a) in paths.iter().enumerate() {
            let bits: Vec<u8> = (0..3).map(|j| ((i >> (2 - j)) & 1) as u8).collect();
            assert_eq!(*a, pascal_path(&d, &bits).unwrap());
        }
    }

    #[test]
    fn tail_relation_by_height() {
        let (d, _) = pascal_diagram(3, ratio(1, 2)).unwrap();
        let p = |b: &[u8]| pascal_path(&d, b).unwrap();
        assert!(crate::diagram::tail_related(&p(&[1, 1, 0]), &p(&[0, 1, 1])));
        assert!(!crate::diagram::tail_related(&p(&[1, 1, 1]), &p(&[1, 1, 0])));
        assert_eq!(d.vertex_id(3, p(&[1, 1, 0]).range()), "3:2");
    }

    #[test]
    fn parameter_checks() {
        assert!(pascal_diagram(3, ratio(0, 1)).is_err());
        assert!(pascal_diagram(3, ratio(1, 1)).is_err());
        assert!(pascal_diagram(0, ratio(1, 2)).is_err());
    }

    #[test]
    fn cotransition_does_not_depend_on_t() {
        let (_, a) = pascal_diagram(6, ratio(1, 5)).unwrap();
        let (_, b) = pascal_diagram(6, ratio(7, 10)).unwrap();
        assert_eq!(a.cotransition(), b.cotransition());
    }
}
