//! Builds a walk on a small diagram and prints its distributions,
//! cotransition and cylinder masses, checking the potential identity
//! `ν₀(s(a)) p(a) = q(a) νₙ(r(a))`.

use std::sync::Arc;

use bratteli::diagram::{enumerate_paths, BratteliDiagram};
use bratteli::rational::{format_rational, ratio};
use bratteli::walk::{InitialDistribution, RandomWalk, TransitionProbability};

fn main() {
    let d = Arc::new(
        BratteliDiagram::from_ids(
            &[&["r"], &["a", "b"], &["u", "w"]],
            &[
                &[("ra", "r", "a"), ("rb", "r", "b")],
                &[("au", "a", "u"), ("aw", "a", "w"), ("bu", "b", "u"), ("bw", "b", "w")],
            ],
        )
        .unwrap(),
    );
    let p = TransitionProbability::new(vec![
        vec![ratio(1, 3), ratio(2, 3)],
        vec![ratio(1, 2), ratio(1, 2), ratio(1, 4), ratio(3, 4)],
    ]);
    let walk = RandomWalk::new(d.clone(), p, InitialDistribution::point_mass(1, 0)).unwrap();

    for n in 0..=d.depth() {
        let nu: Vec<String> = walk.distribution(n).iter().map(format_rational).collect();
        println!("nu_{n} = [{}]", nu.join(", "));
    }
    for a in enumerate_paths(&d, 0, d.depth()).unwrap() {
        let mass = walk.cylinder_measure(&a).unwrap();
        let q = walk.path_cotransition(&a).unwrap();
        assert_eq!(mass, &q * &walk.distribution(d.depth())[a.range()]);
        println!(
            "mu(Z({})) = {}  q = {}",
            d.path_label(&a),
            format_rational(&mass),
            format_rational(&q)
        );
    }
}
