//! Splits the Pascal measure into its ergodic components, one per terminal
//! vertex, and recombines them.

use bratteli::diagram::enumerate_paths;
use bratteli::harmonic::ergodic_components;
use bratteli::rational::{format_rational, ratio, Rational};
use bratteli::skew::pascal_diagram;

fn main() {
    let (d, walk) = pascal_diagram(2, ratio(1, 2)).unwrap();
    let components = ergodic_components(&walk);
    for c in &components {
        println!("{}: weight {}", d.vertex_id(2, c.terminal), format_rational(&c.weight));
    }
    for a in enumerate_paths(&d, 0, 2).unwrap() {
        let mix: Rational = components
            .iter()
            .map(|c| &c.weight * c.measure.cylinder_measure(&a).unwrap())
            .sum();
        assert_eq!(mix, walk.cylinder_measure(&a).unwrap());
    }
    println!("components recombine to mu");
}
