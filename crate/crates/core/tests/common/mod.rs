//! Random instances and brute-force oracles shared by the integration tests.
//!
//! The oracles recompute everything from the raw data by enumeration, never
//! through the library's derived quantities.

#![allow(dead_code)]

use std::sync::Arc;

use bratteli::diagram::{enumerate_paths, BratteliDiagram, FinitePath};
use bratteli::fdcstar::InclusionGraph;
use bratteli::rational::{int, Rational};
use bratteli::walk::{InitialDistribution, RandomWalk, TransitionProbability};
use num::complex::Complex64;
use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive weights `w / Σw` with integer `w ∈ 1..=5`.
pub fn random_probability<R: Rng>(rng: &mut R, len: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..len).map(|_| rng.random_range(1..=5)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| Rational::new(w.into(), total.into())).collect()
}

/// A valid diagram: depth `1..=max_depth`, at most `max_vertices` per level,
/// at most 3 edges out of each vertex, every vertex emits and receives.
pub fn random_diagram<R: Rng>(rng: &mut R, max_depth: usize, max_vertices: usize) -> BratteliDiagram {
    let depth = rng.random_range(1..=max_depth);
    let mut counts = vec![rng.random_range(1..=max_vertices)];
    for n in 1..=depth {
        let cap = max_vertices.min(3 * counts[n - 1]);
        counts.push(rng.random_range(1..=cap));
    }
    let vertices: Vec<Vec<String>> = counts
        .iter()
        .enumerate()
        .map(|(n, &c)| (0..c).map(|v| format!("{n}.{v}")).collect())
        .collect();
    let mut edges = Vec::new();
    for n in 1..=depth {
        let (prev, next) = (counts[n - 1], counts[n]);
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); prev];
        let mut targets: Vec<usize> = (0..next).collect();
        targets.shuffle(rng);
        for (i, w) in targets.into_iter().enumerate() {
            out[i % prev].push(w);
        }
        for list in out.iter_mut() {
            let want = rng.random_range(list.len().max(1)..=3);
            while list.len() < want {
                list.push(rng.random_range(0..next));
            }
            list.sort();
        }
        let mut level = Vec::new();
        for (v, list) in out.iter().enumerate() {
            for (i, &w) in list.iter().enumerate() {
                level.push(bratteli::diagram::EdgeSpec::new(
                    format!("{n}.{v}.{w}.{i}"),
                    vertices[n - 1][v].clone(),
                    vertices[n][w].clone(),
                ));
            }
        }
        edges.push(level);
    }
    BratteliDiagram::new(vertices, edges).expect("generated diagram is well formed")
}

/// Random `p` and full-support `ν₀` on a diagram.
pub fn random_walk_on<R: Rng>(rng: &mut R, d: Arc<BratteliDiagram>) -> RandomWalk {
    let mut p = Vec::new();
    for n in 1..=d.depth() {
        let floor = d.level(n);
        let mut level = vec![Rational::zero(); floor.edge_count()];
        for v in 0..d.vertex_count(n - 1) {
            let out = floor.out_edges(v);
            for (e, w) in out.iter().zip(random_probability(rng, out.len())) {
                level[*e] = w;
            }
        }
        p.push(level);
    }
    let nu0 = random_probability(rng, d.vertex_count(0));
    RandomWalk::new(d, TransitionProbability::new(p), InitialDistribution(nu0)).expect("random walk is valid")
}

pub fn random_walk<R: Rng>(rng: &mut R, max_depth: usize, max_vertices: usize) -> RandomWalk {
    let d = Arc::new(random_diagram(rng, max_depth, max_vertices));
    random_walk_on(rng, d)
}

/// `ν₀(s(a)) Π pₖ(aₖ)` straight from the raw weights.
pub fn oracle_path_mass(walk: &RandomWalk, a: &FinitePath) -> Rational {
    let mut m = walk.initial()[a.source()].clone();
    for (i, &e) in a.edges().iter().enumerate() {
        m *= walk.transition().get(i + 1, e);
    }
    m
}

/// `νₙ(w)` as the total mass of rooted paths of length `n` ending at `w`.
pub fn oracle_distribution(walk: &RandomWalk, n: usize) -> Vec<Rational> {
    let d = walk.diagram();
    let mut nu = vec![Rational::zero(); d.vertex_count(n)];
    for a in enumerate_paths(d, 0, n).unwrap() {
        nu[a.range()] += oracle_path_mass(walk, &a);
    }
    nu
}

/// Path cotransition `μ(Z(a)) / νₙ(r(a))`.
pub fn oracle_path_q(walk: &RandomWalk, a: &FinitePath) -> Rational {
    oracle_path_mass(walk, a) / &oracle_distribution(walk, a.len())[a.range()]
}

/// Random inclusion graph with `|X| ≤ max_points`, `|E| ≤ max_edges`.
pub fn random_inclusion_graph<R: Rng>(rng: &mut R, max_points: usize, max_edges: usize) -> InclusionGraph {
    let nv = rng.random_range(1..=3.min(max_points).min(max_edges));
    let np = rng.random_range(nv..=max_points);
    let mut point_map: Vec<usize> = (0..nv).collect();
    point_map.extend((nv..np).map(|_| rng.random_range(0..nv)));
    point_map.shuffle(rng);
    let ne = rng.random_range(nv..=max_edges);
    let nt = rng.random_range(1..=ne.min(3));
    let mut edge_src: Vec<usize> = (0..nv).collect();
    edge_src.extend((nv..ne).map(|_| rng.random_range(0..nv)));
    edge_src.sort();
    let mut edge_rng: Vec<usize> = (0..ne)
        .map(|i| if i < nt { i } else { rng.random_range(0..nt) })
        .collect();
    edge_rng.shuffle(rng);
    InclusionGraph::new(
        (0..np).map(|x| format!("x{x}")).collect(),
        (0..nv).map(|v| format!("v{v}")).collect(),
        point_map,
        (0..ne).map(|c| format!("c{c}")).collect(),
        (0..nt).map(|w| format!("w{w}")).collect(),
        edge_src,
        edge_rng,
    )
    .expect("generated inclusion graph is well formed")
}

/// Random positive `p` on the edges of an inclusion graph.
pub fn random_graph_probability<R: Rng>(rng: &mut R, g: &InclusionGraph) -> Vec<Rational> {
    let mut p = vec![Rational::zero(); g.edge_count()];
    for v in 0..g.vertex_ids().len() {
        let out: Vec<usize> = g.out_edges(v).collect();
        for (c, w) in out.iter().zip(random_probability(rng, out.len())) {
            p[*c] = w;
        }
    }
    p
}

/// Every inclusion graph with at most three source vertices, at most three
/// targets and `|X̲| ≤ max_lifted`, up to reordering parallel edges.
pub fn all_small_graphs(max_lifted: usize) -> Vec<InclusionGraph> {
    let mut out = Vec::new();
    for nv in 1..=3 {
        for nt in 1..=3 {
            // per vertex: number of points and a non-decreasing list of targets
            let mut shapes: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new()];
            for _ in 0..nv {
                let mut next = Vec::new();
                for shape in &shapes {
                    for pts in 1..=max_lifted {
                        for targets in multisets(nt, max_lifted / pts) {
                            let mut s = shape.clone();
                            s.push((pts, targets));
                            next.push(s);
                        }
                    }
                }
                shapes = next;
            }
            for shape in shapes {
                let lifted: usize = shape.iter().map(|(p, t)| p * t.len()).sum();
                let mut hit = vec![false; nt];
                shape.iter().flat_map(|(_, t)| t).for_each(|&w| hit[w] = true);
                if lifted > max_lifted || hit.contains(&false) {
                    continue;
                }
                let mut point_map = Vec::new();
                let mut edge_src = Vec::new();
                let mut edge_rng = Vec::new();
                for (v, (pts, targets)) in shape.iter().enumerate() {
                    point_map.extend(std::iter::repeat_n(v, *pts));
                    for &w in targets {
                        edge_src.push(v);
                        edge_rng.push(w);
                    }
                }
                let g = InclusionGraph::new(
                    (0..point_map.len()).map(|x| format!("x{x}")).collect(),
                    (0..nv).map(|v| format!("v{v}")).collect(),
                    point_map,
                    (0..edge_src.len()).map(|c| format!("c{c}")).collect(),
                    (0..nt).map(|w| format!("w{w}")).collect(),
                    edge_src,
                    edge_rng,
                )
                .expect("enumerated graph is well formed");
                out.push(g);
            }
        }
    }
    out
}

/// Non-empty non-decreasing sequences over `0..n` of length at most `max_len`.
fn multisets(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..n).map(|w| vec![w]).collect();
    while let Some(first) = frontier.first() {
        if first.len() > max_len {
            break;
        }
        out.extend(frontier.iter().cloned());
        frontier = frontier
            .iter()
            .flat_map(|s| {
                let last = *s.last().unwrap();
                (last..n).map(move |w| {
                    let mut t = s.clone();
                    t.push(w);
                    t
                })
            })
            .collect();
    }
    out
}

/// `Q(f̲)(x, y) = Σ_{s(c) = r(x)} p(c) f̲(xc, yc)` on a dense matrix indexed
/// by the lifted points, written out from the definition.
pub fn oracle_expectation(
    g: &InclusionGraph,
    p: &[f64],
    f: &nalgebra::DMatrix<Complex64>,
) -> nalgebra::DMatrix<Complex64> {
    let rel = g.relation();
    let n = rel.point_count();
    let mut out = nalgebra::DMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            if !rel.related(x, y) {
                continue;
            }
            let v = rel.class_of(x);
            let mut sum = Complex64::zero();
            for c in (0..g.edge_count()).filter(|&c| g.src(c) == v) {
                let (i, j) = (g.lift(x, c).unwrap(), g.lift(y, c).unwrap());
                sum += f[(i, j)] * p[c];
            }
            out[(x, y)] = sum;
        }
    }
    out
}

pub fn one() -> Rational {
    int(1)
}
