//! Skew product of the Pascal diagram by the counting potential, and the
//! flow of weights: with `ρ = q` the group cocycle is the Radon–Nikodym
//! cocycle.

use std::sync::Arc;

use bratteli::diagram::{tail_related, BratteliDiagram};
use bratteli::rational::{format_rational, int, ratio};
use bratteli::skew::{
    cotransition_potential, group_cocycle, pascal_diagram, pascal_epsilon_potential, skew_harmonic, skew_product,
    terminal_labels, GroupElement,
};
use bratteli::walk::{InitialDistribution, RandomWalk, TransitionProbability};

fn main() {
    let (d, walk) = pascal_diagram(3, ratio(1, 2)).unwrap();
    let rho = pascal_epsilon_potential(&d);
    let sd = skew_product(d.clone(), rho, &[GroupElement::Lattice(vec![0])]).unwrap();
    for n in 0..=d.depth() {
        let ids: Vec<&str> = (0..sd.vertices(n).len())
            .map(|i| sd.diagram().vertex_id(n, i))
            .collect();
        println!("level {n}: {}", ids.join(" "));
    }
    println!("law violations: {}", sd.law_violations().len());

    let mut terminal = terminal_labels(&sd);
    for (_, g, x) in terminal.iter_mut() {
        if let GroupElement::Lattice(v) = g {
            *x = int(v[0]);
        }
    }
    let h = skew_harmonic(&sd, &walk, &[(GroupElement::Lattice(vec![0]), int(1))], &terminal).unwrap();
    println!("h_0 = {}", format_rational(&h.level(0)[0]));

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
    let q = cotransition_potential(&walk);
    let a = d.path_from_ids(0, &["ra", "aw"]).unwrap();
    let b = d.path_from_ids(0, &["rb", "bw"]).unwrap();
    let (a, b) = (&a, &b);
    assert!(tail_related(a, b));
    println!(
        "c(a, b) = {}  D(a, b) = {}",
        group_cocycle(&q, a, b).unwrap(),
        format_rational(&walk.radon_nikodym(a, b).unwrap())
    );
}
