//! A measure is Markov with cotransition `q` exactly when it passes
//! `check_q_measure`; moving a little mass between two cylinders breaks it
//! and the check names the offending cylinder.

use bratteli::rational::{format_rational, ratio};
use bratteli::skew::pascal_diagram;
use bratteli::walk::{check_q_measure, CylinderTable, QCheck};

fn main() {
    let (d, walk) = pascal_diagram(4, ratio(1, 3)).unwrap();
    let own = walk.cylinder_table(4).unwrap();
    println!(
        "own measure: {:?}",
        check_q_measure(&d, walk.cotransition(), &own, 4).unwrap().holds()
    );

    // move 1/1000 between two paths that end at the same vertex
    let mut top: Vec<_> = own.level(4).iter().map(|(_, m)| m.clone()).collect();
    let delta = ratio(1, 1000);
    top[1] += &delta;
    top[2] -= &delta;
    let shifted = CylinderTable::from_top_level(d.clone(), 4, top).unwrap();
    match check_q_measure(&d, walk.cotransition(), &shifted, 4).unwrap() {
        QCheck::Holds => println!("perturbed measure unexpectedly holds"),
        QCheck::Fails { path, mass, expected } => println!(
            "perturbed measure fails at {}: {} != {}",
            d.path_label(&path),
            format_rational(&mass),
            format_rational(&expected)
        ),
    }
}
