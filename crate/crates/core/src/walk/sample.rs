use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RandomWalk;
use crate::diagram::{BratteliDiagram, FinitePath};
use crate::rational::to_f64;
use std::sync::Arc;

/// Draws paths from a walk's Markov measure.
///
/// Weights are converted to `f64` once; exact probabilities stay in the walk.
#[derive(Debug, Clone)]
pub struct PathSampler {
    diagram: Arc<BratteliDiagram>,
    initial: WeightedIndex<f64>,
    // per level n >= 1, per source vertex: sampler over its out-edges
    steps: Vec<Vec<WeightedIndex<f64>>>,
}

impl PathSampler {
    pub fn new(walk: &RandomWalk) -> Self {
        let d = walk.diagram().clone();
        let initial =
            WeightedIndex::new(walk.initial().iter().map(to_f64)).expect("initial distribution has positive mass");
        let steps = (1..=d.depth())
            .map(|n| {
                let floor = d.level(n);
                (0..d.vertex_count(n - 1))
                    .map(|v| {
                        WeightedIndex::new(floor.out_edges(v).iter().map(|&e| to_f64(walk.transition().get(n, e))))
                            .expect("every vertex emits an edge of positive weight")
                    })
                    .collect()
            })
            .collect();
        Self {
            diagram: d,
            initial,
            steps,
        }
    }

    /// A rooted path of length `depth` (clamped to the diagram depth).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> FinitePath {
        let depth = depth.min(self.diagram.depth());
        let mut vertex = self.initial.sample(rng);
        let mut edges = Vec::with_capacity(depth);
        for n in 1..=depth {
            let floor = self.diagram.level(n);
            let e = floor.out_edges(vertex)[self.steps[n - 1][vertex].sample(rng)];
            edges.push(e);
            vertex = floor.rng(e);
        }
        if edges.is_empty() {
            self.diagram.empty_path(0, vertex).expect("root vertex exists")
        } else {
            self.diagram.path(0, &edges).expect("sampled edges compose")
        }
    }

    pub fn sample_seeded(&self, seed: u64, depth: usize) -> FinitePath {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample(&mut rng, depth)
    }
}
