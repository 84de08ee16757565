use std::collections::BTreeSet;
use std::sync::Arc;

use num::traits::{One, Signed};

use super::{EdgePotential, GroupElement, GroupSpec, SkewError};
use crate::diagram::{BratteliDiagram, EdgeSpec};
use crate::rational::{format_rational, Rational};
use crate::walk::{InitialDistribution, RandomWalk, TransitionProbability};

/// Time-dependent walk on a discrete group as a walk on a UHF diagram.
///
/// Level `n` has the single vertex `"u{n}"`; `E(n)` is the support `Gₙ` of the
/// `n`-th step distribution (edge ids are the elements), `p` is its weights
/// and `ρ` is the inclusion `Gₙ → G`. The Markov measure is the product of
/// the step distributions.
pub fn uhf_from_group_walk(
    group: GroupSpec,
    supports: &[Vec<(GroupElement, Rational)>],
) -> Result<(Arc<BratteliDiagram>, RandomWalk, EdgePotential), SkewError> {
    if supports.is_empty() {
        return Err(SkewError::Parameter("at least one step required".into()));
    }
    for (i, support) in supports.iter().enumerate() {
        let n = i + 1;
        if support.is_empty() {
            return Err(SkewError::Weights(format!("step {n} has empty support")));
        }
        let mut seen = BTreeSet::new();
        for (g, w) in support {
            if !group.contains(g) {
                return Err(SkewError::Potential(format!("{g} is not in the group")));
            }
            if !seen.insert(g) {
                return Err(SkewError::Weights(format!("step {n} lists {g} twice")));
            }
            if !w.is_positive() {
                return Err(SkewError::Weights(format!(
                    "step {n} gives {g} weight {}",
                    format_rational(w)
                )));
            }
        }
        let total: Rational = support.iter().map(|(_, w)| w).sum();
        if !total.is_one() {
            return Err(SkewError::Weights(format!(
                "step {n} weights sum to {}",
                format_rational(&total)
            )));
        }
    }
    let vertices = (0..=supports.len()).map(|n| vec![format!("u{n}")]).collect();
    let edges = supports
        .iter()
        .enumerate()
        .map(|(i, support)| {
            support
                .iter()
                .map(|(g, _)| EdgeSpec::new(g.to_string(), format!("u{i}"), format!("u{}", i + 1)))
                .collect()
        })
        .collect();
    let diagram = Arc::new(BratteliDiagram::new(vertices, edges).expect("uhf edges resolve"));
    let p = supports
        .iter()
        .map(|s| s.iter().map(|(_, w)| w.clone()).collect())
        .collect();
    let rho = supports
        .iter()
        .map(|s| s.iter().map(|(g, _)| g.clone()).collect())
        .collect();
    let walk = RandomWalk::new(
        diagram.clone(),
        TransitionProbability::new(p),
        InitialDistribution::point_mass(1, 0),
    )?;
    let potential = EdgePotential::new(group, rho).expect("checked membership");
    Ok((diagram, walk, potential))
}
