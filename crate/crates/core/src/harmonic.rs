//! Bounded harmonic sequences and tail-invariant functions at finite depth.
//!
//! For a walk of depth `N` a tail-invariant function on full-depth paths is a
//! function of the endpoint, `f = f_N ∘ r_N`. It corresponds to the harmonic
//! sequence `hₙ(v) = E[f_N(r_N) | position v at time n]`, obtained from
//! `h_N = f_N` by the backward recursion `h_{n-1} = pₙ(hₙ ∘ r)`. Conversely
//! `f` is recovered as `h_N`. This pair of mutually inverse, positive,
//! norm-preserving linear maps is the depth-`N` truncation of the isomorphism
//! between bounded invariant functions and bounded harmonic sequences; the
//! infinite-depth statement is its projective limit and is not modelled.
//!
//! Under full support every vertex has positive mass, so sup norms and
//! essential sup norms coincide.

use num::traits::{Signed, Zero};
use thiserror::Error;

use crate::diagram::FinitePath;
use crate::rational::{format_rational, to_f64, Rational};
use crate::walk::{PathSampler, QMeasure, RandomWalk};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarmonicError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not harmonic at level {level}, vertex {vertex}: {lhs} != {rhs}")]
    NotHarmonic {
        level: usize,
        vertex: String,
        lhs: String,
        rhs: String,
    },
    #[error("negative value {value} at level {level}, vertex {vertex}")]
    Negative {
        level: usize,
        vertex: String,
        value: String,
    },
}

impl HarmonicError {
    pub fn invariant(&self) -> &'static str {
        match self {
            HarmonicError::Shape(_) => "one value per vertex",
            HarmonicError::NotHarmonic { .. } => "harmonic recursion",
            HarmonicError::Negative { .. } => "non-negativity",
        }
    }
}

/// `(h₀, …, h_N)` with `hₙ : V(n) → ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicSequence {
    values: Vec<Vec<Rational>>,
}

impl HarmonicSequence {
    /// Wraps raw level values; use [`is_harmonic`] to check them.
    pub fn from_levels(values: Vec<Vec<Rational>>) -> Self {
        Self { values }
    }

    pub fn level(&self, n: usize) -> &[Rational] {
        &self.values[n]
    }

    pub fn levels(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn depth(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// `supₙ maxᵥ |hₙ(v)|`.
    pub fn sup_norm(&self) -> Rational {
        self.values
            .iter()
            .flatten()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().flatten().all(|v| !v.is_negative())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|l| l.iter().map(|v| v * factor).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

/// A tail-invariant function at full depth, stored as `f_N` on `V(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFunction {
    values: Vec<Rational>,
}

impl InvariantFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `f(a) = f_N(r(a))` for a full-depth path.
    pub fn at_path(&self, path: &FinitePath) -> &Rational {
        &self.values[path.range()]
    }

    /// Essential sup over the walk's terminal distribution.
    pub fn ess_sup_norm(&self, walk: &RandomWalk) -> Rational {
        let nu = walk.distribution(walk.depth());
        self.values
            .iter()
            .zip(nu)
            .filter(|(_, m)| m.is_positive())
            .map(|(v, _)| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// First vertex where `h_{n-1}(v) = Σ_{s(e)=v} pₙ(e) hₙ(r(e))` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicViolation {
    pub level: usize,
    pub vertex: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

fn check_shape(walk: &RandomWalk, values: &[Vec<Rational>]) -> Result<(), HarmonicError> {
    let d = walk.diagram();
    if values.len() != d.depth() + 1 {
        return Err(HarmonicError::Shape(format!(
            "{} levels for depth {}",
            values.len(),
            d.depth()
        )));
    }
    for (n, level) in values.iter().enumerate() {
        if level.len() != d.vertex_count(n) {
            return Err(HarmonicError::Shape(format!(
                "level {n} has {} values for {} vertices",
                level.len(),
                d.vertex_count(n)
            )));
        }
    }
    Ok(())
}

/// `Ok(None)` when the recursion holds exactly everywhere.
pub fn is_harmonic(walk: &RandomWalk, h: &HarmonicSequence) -> Result<Option<HarmonicViolation>, HarmonicError> {
    check_shape(walk, &h.values)?;
    let d = walk.diagram();
    for n in 1..=d.depth() {
        let floor = d.level(n);
        for v in 0..d.vertex_count(n - 1) {
            let rhs: Rational = floor
                .out_edges(v)
                .iter()
                .map(|&e| walk.transition().get(n, e) * &h.values[n][floor.rng(e)])
                .sum();
            if rhs != h.values[n - 1][v] {
                return Ok(Some(HarmonicViolation {
                    level: n,
                    vertex: v,
                    lhs: h.values[n - 1][v].clone(),
                    rhs,
                }));
            }
        }
    }
    Ok(None)
}

/// Backward induction `h_{n-1} = pₙ(hₙ ∘ r)` from `h_N = terminal`.
pub fn harmonic_from_terminal(walk: &RandomWalk, terminal: &[Rational]) -> Result<HarmonicSequence, HarmonicError> {
    let d = walk.diagram();
    let depth = d.depth();
    if terminal.len() != d.vertex_count(depth) {
        return Err(HarmonicError::Shape(format!(
            "{} terminal values for {} vertices",
            terminal.len(),
            d.vertex_count(depth)
        )));
    }
    let mut values = vec![Vec::new(); depth + 1];
    values[depth] = terminal.to_vec();
    for n in (1..=depth).rev() {
        let floor = d.level(n);
        values[n - 1] = (0..d.vertex_count(n - 1))
            .map(|v| {
                floor
                    .out_edges(v)
                    .iter()
                    .map(|&e| walk.transition().get(n, e) * &values[n][floor.rng(e)])
                    .sum()
            })
            .collect();
    }
    Ok(HarmonicSequence { values })
}

/// `hₙ = E[f | position at time n]`.
pub fn invariant_to_harmonic(walk: &RandomWalk, f: &InvariantFunction) -> Result<HarmonicSequence, HarmonicError> {
    harmonic_from_terminal(walk, &f.values)
}

/// At finite depth the limit `lim hₙ(r(eₙ))` is attained: `f = h_N`.
pub fn harmonic_to_invariant(walk: &RandomWalk, h: &HarmonicSequence) -> Result<InvariantFunction, HarmonicError> {
    if let Some(v) = is_harmonic(walk, h)? {
        return Err(violation_error(walk, v));
    }
    Ok(InvariantFunction {
        values: h.values[walk.depth()].clone(),
    })
}

fn violation_error(walk: &RandomWalk, v: HarmonicViolation) -> HarmonicError {
    HarmonicError::NotHarmonic {
        level: v.level,
        vertex: walk.diagram().vertex_id(v.level - 1, v.vertex).to_string(),
        lhs: format_rational(&v.lhs),
        rhs: format_rational(&v.rhs),
    }
}

/// The measure `μ' = f μ` for the non-negative harmonic `h`: same
/// cotransition as the walk, distributions `ν'ₙ = hₙ νₙ`. Its cylinder
/// masses are `μ'(Z(a)) = h_{|a|}(r(a)) μ(Z(a))` and its total mass is the
/// `ν₀`-average of `h₀`.
pub fn measure_from_harmonic(walk: &RandomWalk, h: &HarmonicSequence) -> Result<QMeasure, HarmonicError> {
    if let Some(v) = is_harmonic(walk, h)? {
        return Err(violation_error(walk, v));
    }
    for (n, level) in h.values.iter().enumerate() {
        if let Some(v) = level.iter().position(|x| x.is_negative()) {
            return Err(HarmonicError::Negative {
                level: n,
                vertex: walk.diagram().vertex_id(n, v).to_string(),
                value: format_rational(&level[v]),
            });
        }
    }
    let nu = h
        .values
        .iter()
        .zip(walk.distributions())
        .map(|(hn, nun)| hn.iter().zip(nun).map(|(a, b)| a * b).collect())
        .collect();
    QMeasure::new(walk.diagram().clone(), walk.cotransition().clone(), nu)
        .map_err(|e| HarmonicError::Shape(e.to_string()))
}

/// One ergodic component of a Markov measure at finite depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicComponent {
    /// Vertex `w ∈ V(N)` the component is conditioned on.
    pub terminal: usize,
    /// `ν_N(w)`.
    pub weight: Rational,
    /// `μ( · | r_N = w)`; its terminal distribution is the point mass at `w`.
    pub measure: QMeasure,
}

/// Decomposes the Markov measure into its depth-`N` ergodic components.
///
/// At finite depth the tail-invariant functions are exactly the functions of
/// `r_N`, so the extremal invariant pieces are the conditionings on each
/// terminal vertex. Components are listed in vertex order and recombine as
/// `μ = Σ_w ν_N(w) μ( · | r_N = w)`.
pub fn ergodic_components(walk: &RandomWalk) -> Vec<ErgodicComponent> {
    let depth = walk.depth();
    let terminal_nu = walk.distribution(depth);
    (0..terminal_nu.len())
        .filter(|&w| terminal_nu[w].is_positive())
        .map(|w| {
            let weight = terminal_nu[w].clone();
            let indicator: Vec<Rational> = (0..terminal_nu.len())
                .map(|u| {
                    if u == w {
                        Rational::from_integer(1.into()) / &weight
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let h = harmonic_from_terminal(walk, &indicator).expect("terminal has the right shape");
            let measure = measure_from_harmonic(walk, &h).expect("indicator is harmonic and non-negative");
            ErgodicComponent {
                terminal: w,
                weight,
                measure,
            }
        })
        .collect()
}

/// Per-level sample statistics of `hₙ(Xₙ)` along sampled paths.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleTrace {
    pub means: Vec<f64>,
    /// Standard error of each mean.
    pub std_errors: Vec<f64>,
    /// Exact `E[h₀(X₀)]`, the common expectation of every level.
    pub expected: f64,
}

impl MartingaleTrace {
    /// Largest `|meanₙ - expected|` in units of standard error; a level with
    /// zero spread must match exactly.
    pub fn max_deviation_sigmas(&self) -> f64 {
        self.means
            .iter()
            .zip(&self.std_errors)
            .map(|(m, s)| {
                let diff = (m - self.expected).abs();
                if *s > 0.0 {
                    diff / s
                } else if diff <= 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Samples `samples` paths (seeds `seed..seed + samples`) and tracks the
/// empirical mean of `hₙ` at the position of time `n`.
pub fn martingale_trace(walk: &RandomWalk, h: &HarmonicSequence, seed: u64, samples: usize) -> MartingaleTrace {
    let depth = walk.depth();
    let sampler = PathSampler::new(walk);
    let table: Vec<Vec<f64>> = h.values.iter().map(|l| l.iter().map(to_f64).collect()).collect();
    let mut sum = vec![0.0; depth + 1];
    let mut sum_sq = vec![0.0; depth + 1];
    for i in 0..samples {
        let path = sampler.sample_seeded(seed.wrapping_add(i as u64), depth);
        let mut vertex = path.source();
        for n in 0..=depth {
            if n > 0 {
                vertex = walk.diagram().level(n).rng(path.edges()[n - 1]);
            }
            let x = table[n][vertex];
            sum[n] += x;
            sum_sq[n] += x * x;
        }
    }
    let count = samples as f64;
    let means: Vec<f64> = sum.iter().map(|s| s / count).collect();
    let std_errors = sum_sq
        .iter()
        .zip(&means)
        .map(|(sq, m)| {
            let var = (sq / count - m * m).max(0.0) * count / (count - 1.0).max(1.0);
            (var / count).sqrt()
        })
        .collect();
    let expected: Rational = h.values[0].iter().zip(walk.initial()).map(|(a, b)| a * b).sum();
    MartingaleTrace {
        means,
        std_errors,
        expected: to_f64(&expected),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::enumerate_paths;
    use crate::rational::{int, ratio};
    use crate::skew::{pascal_diagram, pascal_path};

    fn bernoulli_harmonic(depth: usize, t: &Rational) -> HarmonicSequence {
        let one = int(1);
        HarmonicSequence::from_levels(
            (0..=depth)
                .map(|n| {
                    (0..=n)
                        .map(|k| num::pow(int(2), n) * num::pow(t.clone(), k) * num::pow(&one - t, n - k))
                        .collect()
                })
                .collect(),
        )
    }

    #[test]
    fn constants_are_harmonic() {
        let (d, w) = pascal_diagram(4, ratio(1, 3)).unwrap();
        let h = HarmonicSequence::from_levels((0..=4).map(|n| vec![ratio(7, 2); d.vertex_count(n)]).collect());
        assert_eq!(is_harmonic(&w, &h).unwrap(), None);
    }

    #[test]
    fn likelihood_ratios_are_harmonic() {
        let (_, w) = pascal_diagram(12, ratio(1, 2)).unwrap();
        for t in [ratio(1, 3), ratio(1, 7), ratio(5, 6)] {
            assert_eq!(is_harmonic(&w, &bernoulli_harmonic(12, &t)).unwrap(), None);
        }
    }

    #[test]
    fn identity_function_is_not_harmonic() {
        let (d, w) = pascal_diagram(3, ratio(1, 2)).unwrap();
        let h = HarmonicSequence::from_levels(
            (0..=3)
                .map(|n| (0..d.vertex_count(n)).map(|k| int(k as i64)).collect())
                .collect(),
        );
        let v = is_harmonic(&w, &h).unwrap().unwrap();
        assert_eq!((v.level, v.lhs, v.rhs), (1, int(0), ratio(1, 2)));
        assert!(matches!(
            harmonic_to_invariant(&w, &h),
            Err(HarmonicError::NotHarmonic { level: 1, .. })
        ));
    }

    #[test]
    fn shape_mismatch() {
        let (_, w) = pascal_diagram(2, ratio(1, 2)).unwrap();
        let h = HarmonicSequence::from_levels(vec![vec![int(1)], vec![int(1)]]);
        assert!(matches!(is_harmonic(&w, &h), Err(HarmonicError::Shape(_))));
    }

    #[test]
    fn all_ones_terminal() {
        let (d, w) = pascal_diagram(4, ratio(1, 3)).unwrap();
        let h = harmonic_from_terminal(&w, &vec![int(1); 5]).unwrap();
        for n in 0..=4 {
            assert!(h.level(n).iter().all(|x| *x == int(1)));
            assert_eq!(h.level(n).len(), d.vertex_count(n));
        }
    }

    #[test]
    fn top_indicator_gives_all_ones_probability() {
        let t = ratio(2, 5);
        let (d, w) = pascal_diagram(4, t.clone()).unwrap();
        let mut terminal = vec![int(0); 5];
        terminal[4] = int(1);
        let h = harmonic_from_terminal(&w, &terminal).unwrap();
        let top = pascal_path(&d, &[1, 1, 1, 1]).unwrap();
        assert_eq!(h.level(0)[0], w.cylinder_measure(&top).unwrap());
        assert_eq!(h.level(0)[0], num::pow(t, 4));
    }

    #[test]
    fn extreme_endpoints_at_depth_three() {
        let (d, w) = pascal_diagram(3, ratio(1, 2)).unwrap();
        let f = InvariantFunction::new(vec![int(1), int(0), int(0), int(1)]);
        let h = invariant_to_harmonic(&w, &f).unwrap();
        let oracle = w.cylinder_measure(&pascal_path(&d, &[0, 0, 0]).unwrap()).unwrap()
            + w.cylinder_measure(&pascal_path(&d, &[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(h.level(0)[0], ratio(1, 4));
        assert_eq!(oracle, ratio(1, 4));
        assert_eq!(harmonic_to_invariant(&w, &h).unwrap(), f);
        assert_eq!(h.sup_norm(), f.ess_sup_norm(&w));
    }

    #[test]
    fn reweighting_by_a_likelihood_ratio_changes_t() {
        let (d, half) = pascal_diagram(5, ratio(1, 2)).unwrap();
        let (_, third) = pascal_diagram(5, ratio(1, 3)).unwrap();
        let h = bernoulli_harmonic(5, &ratio(1, 3));
        let reweighted = measure_from_harmonic(&half, &h).unwrap();
        for n in 0..=5 {
            for a in enumerate_paths(&d, 0, n).unwrap() {
                assert_eq!(
                    reweighted.cylinder_measure(&a).unwrap(),
                    third.cylinder_measure(&a).unwrap()
                );
            }
        }
    }

    #[test]
    fn indicator_reweighting_masks_the_measure() {
        let (d, w) = pascal_diagram(4, ratio(1, 3)).unwrap();
        let mut terminal = vec![int(0); 5];
        terminal[2] = int(1);
        let h = harmonic_from_terminal(&w, &terminal).unwrap();
        let masked = measure_from_harmonic(&w, &h).unwrap();
        let full = enumerate_paths(&d, 0, 4).unwrap();
        for n in 0..=4 {
            for a in enumerate_paths(&d, 0, n).unwrap() {
                // oracle: sum of full-depth masses that extend a and end at k = 2
                let expected: Rational = full
                    .iter()
                    .filter(|x| x.range() == 2 && x.truncate(&d, n) == a)
                    .map(|x| w.cylinder_measure(x).unwrap())
                    .sum();
                assert_eq!(masked.cylinder_measure(&a).unwrap(), expected);
            }
        }
        assert_eq!(masked.total_mass(), w.distribution(4)[2]);
    }

    #[test]
    fn negative_harmonic_rejected_for_measures() {
        let (_, w) = pascal_diagram(2, ratio(1, 2)).unwrap();
        let h = harmonic_from_terminal(&w, &[int(-1), int(1), int(1)]).unwrap();
        assert!(matches!(
            measure_from_harmonic(&w, &h),
            Err(HarmonicError::Negative { .. })
        ));
    }

    #[test]
    fn pascal_depth_two_components() {
        let (d, w) = pascal_diagram(2, ratio(1, 2)).unwrap();
        let parts = ergodic_components(&w);
        let weights: Vec<_> = parts.iter().map(|c| c.weight.clone()).collect();
        assert_eq!(weights, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
        for c in &parts {
            let terminal = c.measure.distribution(2);
            for (u, m) in terminal.iter().enumerate() {
                assert_eq!(*m, if u == c.terminal { int(1) } else { int(0) });
            }
        }
        for n in 0..=2 {
            for a in enumerate_paths(&d, 0, n).unwrap() {
                let mix: Rational = parts
                    .iter()
                    .map(|c| &c.weight * c.measure.cylinder_measure(&a).unwrap())
                    .sum();
                assert_eq!(mix, w.cylinder_measure(&a).unwrap());
            }
        }
    }

    #[test]
    fn chain_has_one_component() {
        let d = std::sync::Arc::new(crate::diagram::fixtures::chain(3));
        let w = RandomWalk::new(
            d,
            crate::walk::TransitionProbability::new(vec![vec![int(1)]; 3]),
            crate::walk::InitialDistribution::point_mass(1, 0),
        )
        .unwrap();
        let parts = ergodic_components(&w);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].weight, int(1));
    }
}
