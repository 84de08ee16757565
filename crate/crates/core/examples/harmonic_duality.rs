//! Bounded harmonic sequences and tail-invariant functions determine each
//! other; a non-negative one reweights the Markov measure into another
//! measure with the same cotransition.

use bratteli::diagram::enumerate_paths;
use bratteli::harmonic::{harmonic_from_terminal, harmonic_to_invariant, measure_from_harmonic};
use bratteli::rational::{format_rational, int, ratio};
use bratteli::skew::pascal_diagram;

fn main() {
    let (d, walk) = pascal_diagram(3, ratio(1, 4)).unwrap();
    let terminal = vec![int(0), int(1), int(4), int(9)];
    let h = harmonic_from_terminal(&walk, &terminal).unwrap();
    for (n, level) in h.levels().iter().enumerate() {
        let row: Vec<String> = level.iter().map(format_rational).collect();
        println!("h_{n} = [{}]", row.join(", "));
    }
    let f = harmonic_to_invariant(&walk, &h).unwrap();
    assert_eq!(f.values(), terminal.as_slice());
    println!("sup norm {}", format_rational(&h.sup_norm()));

    let reweighted = measure_from_harmonic(&walk, &h).unwrap();
    println!("total mass of f mu: {}", format_rational(&reweighted.total_mass()));
    for a in enumerate_paths(&d, 0, 2).unwrap() {
        let expected = h.level(2)[a.range()].clone() * walk.cylinder_measure(&a).unwrap();
        assert_eq!(reweighted.cylinder_measure(&a).unwrap(), expected);
    }
}
