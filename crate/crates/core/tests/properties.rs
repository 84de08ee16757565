mod common;

use std::sync::Arc;

use bratteli::diagram::{enumerate_paths, tail_related};
use bratteli::fdcstar::{extract_transition, include_j, AlgebraElement, ModelExpectation};
use bratteli::harmonic::harmonic_from_terminal;
use bratteli::io::DiagramFile;
use bratteli::rational::{format_rational, int, parse_rational, ratio, rational_from_f64, to_f64, Rational};
use bratteli::skew::{skew_product, EdgePotential, GroupElement, GroupSpec};
use bratteli::walk::RandomWalk;
use common::*;
use num::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = ratio(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r.clone()));
        prop_assert_eq!(rational_from_f64(to_f64(&r), 1e-12, 1_000_000), Some(r));
    }

    #[test]
    fn cotransition_sums_to_one_into_each_vertex(seed in any::<u64>()) {
        let walk = random_walk(&mut rng(seed), 6, 4);
        let d = walk.diagram();
        for n in 1..=d.depth() {
            let floor = d.level(n);
            for w in 0..d.vertex_count(n) {
                let total: Rational = floor.in_edges(w).iter().map(|&e| walk.cotransition().get(n, e)).sum();
                prop_assert!(total.is_one());
            }
        }
    }

    #[test]
    fn radon_nikodym_is_a_cocycle(seed in any::<u64>()) {
        let walk = random_walk(&mut rng(seed), 5, 3);
        let d = walk.diagram();
        let paths = enumerate_paths(d, 0, d.depth()).unwrap();
        let q: Vec<Rational> = paths.iter().map(|a| oracle_path_q(&walk, a)).collect();
        for (i, a) in paths.iter().enumerate() {
            for (j, b) in paths.iter().enumerate().filter(|(_, b)| tail_related(a, b)) {
                let d_ab = walk.radon_nikodym(a, b).unwrap();
                prop_assert_eq!(&d_ab, &(&q[i] / &q[j]));
                // the cocycle identity against a few third paths per class
                for c in paths.iter().filter(|c| tail_related(b, c)).take(3) {
                    let lhs = &d_ab * walk.radon_nikodym(b, c).unwrap();
                    prop_assert_eq!(lhs, walk.radon_nikodym(a, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn walk_is_determined_by_its_cotransition(seed in any::<u64>()) {
        let walk = random_walk(&mut rng(seed), 6, 4);
        let rebuilt = RandomWalk::from_cotransition(
            walk.diagram().clone(),
            walk.cotransition().clone(),
            walk.distributions().to_vec(),
        )
        .unwrap();
        prop_assert_eq!(rebuilt.transition(), walk.transition());
        prop_assert_eq!(rebuilt.initial(), walk.initial());
    }

    #[test]
    fn harmonic_extension_is_linear(seed in any::<u64>(), a in -5i64..5, b in -5i64..5) {
        let mut r = rng(seed);
        let walk = random_walk(&mut r, 5, 4);
        let m = walk.diagram().vertex_count(walk.depth());
        let f: Vec<Rational> = (0..m).map(|_| int(r.random_range(-9..=9))).collect();
        let g: Vec<Rational> = (0..m).map(|_| int(r.random_range(-9..=9))).collect();
        let mix: Vec<Rational> = f.iter().zip(&g).map(|(x, y)| int(a) * x + int(b) * y).collect();
        let hf = harmonic_from_terminal(&walk, &f).unwrap();
        let hg = harmonic_from_terminal(&walk, &g).unwrap();
        let expected = hf.scale(&int(a)).add(&hg.scale(&int(b)));
        prop_assert_eq!(harmonic_from_terminal(&walk, &mix).unwrap(), expected);
    }

    #[test]
    fn diagram_file_round_trip(seed in any::<u64>()) {
        let walk = random_walk(&mut rng(seed), 4, 3);
        let text = DiagramFile::from_walk(&walk).to_json();
        let back = DiagramFile::parse(&text).unwrap().walk().unwrap();
        prop_assert_eq!(back.transition(), walk.transition());
        prop_assert_eq!(back.initial(), walk.initial());
        prop_assert_eq!(back.cotransition(), walk.cotransition());
    }

    #[test]
    fn expectation_fixes_the_subalgebra(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = Arc::new(random_inclusion_graph(&mut r, 5, 6));
        let p = random_graph_probability(&mut r, &g);
        let me = ModelExpectation::new(g.clone(), p.clone()).unwrap();
        for f in AlgebraElement::basis(g.relation()) {
            let back = me.apply(&include_j(&g, &f).unwrap()).unwrap();
            prop_assert!(back.distance(&f) <= 1e-12);
        }
        prop_assert_eq!(extract_transition(&me.linear_map(), &g).unwrap(), p);
    }

    #[test]
    fn skew_product_is_equivariant(seed in any::<u64>(), h in -4i64..4) {
        let mut r = rng(seed);
        let walk = random_walk(&mut r, 4, 3);
        let d = walk.diagram().clone();
        let levels = (1..=d.depth())
            .map(|n| (0..d.level(n).edge_count()).map(|_| GroupElement::Lattice(vec![r.random_range(-2..=2)])).collect())
            .collect();
        let rho = EdgePotential::new(GroupSpec::Lattice(1), levels).unwrap();
        let window = [GroupElement::Lattice(vec![0]), GroupElement::Lattice(vec![3])];
        let moved: Vec<GroupElement> = window.iter().map(|g| match g {
            GroupElement::Lattice(v) => GroupElement::Lattice(vec![v[0] + h]),
            other => other.clone(),
        }).collect();
        let sd = skew_product(d.clone(), rho.clone(), &window).unwrap();
        let sd_moved = skew_product(d, rho, &moved).unwrap();
        prop_assert!(sd.law_violations().is_empty());
        prop_assert_eq!(sd.translated_labels(&GroupElement::Lattice(vec![h])), sd_moved.labels());
    }

    #[test]
    fn cylinder_masses_refine(seed in any::<u64>()) {
        let walk = random_walk(&mut rng(seed), 5, 4);
        let d = walk.diagram();
        for n in 0..d.depth() {
            for a in enumerate_paths(d, 0, n).unwrap() {
                let children: Rational = d.extensions(&a).iter().map(|b| walk.cylinder_measure(b).unwrap()).sum();
                prop_assert_eq!(children, walk.cylinder_measure(&a).unwrap());
                prop_assert!(!walk.cylinder_measure(&a).unwrap().is_zero());
            }
        }
    }
}
