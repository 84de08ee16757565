//! The model conditional expectation of an inclusion graph: its axioms,
//! its pinch/average factorisation, and the transition probability read back
//! from it.

use std::sync::Arc;

use bratteli::fdcstar::{
    extract_transition, pinch_average_decompose, verify_expectation, InclusionGraph, ModelExpectation, TOLERANCE,
};
use bratteli::rational::{format_rational, ratio};

fn main() {
    let g = InclusionGraph::from_ids(
        &[("x1", "v"), ("x2", "v"), ("x3", "w")],
        &[("c1", "v", "A"), ("c2", "v", "B"), ("c3", "w", "A"), ("c4", "w", "A")],
    )
    .unwrap();
    let me = ModelExpectation::new(Arc::new(g), vec![ratio(1, 3), ratio(2, 3), ratio(1, 4), ratio(3, 4)]).unwrap();

    print!(
        "{}",
        verify_expectation(&me.ambient_map(), &me.subalgebra_basis(), TOLERANCE)
    );

    let pa = pinch_average_decompose(&me);
    println!("|Q1 Q2 - Q| = {:e}", pa.composite().distance(&me.linear_map()).unwrap());

    let p = extract_transition(&me.linear_map(), me.graph()).unwrap();
    let shown: Vec<String> = p.iter().map(format_rational).collect();
    println!("recovered p = [{}]", shown.join(", "));
}
