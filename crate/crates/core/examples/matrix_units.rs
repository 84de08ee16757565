//! Trivialises a torus cocycle, extends phase-twisted partial matrix units
//! to the whole relation, and diagonalises a faithful state on one block.

use std::sync::Arc;

use bratteli::fdcstar::{
    diagonalize_state, extend_matrix_unit, trivialize_cocycle, FiniteEquivRelation, MatrixUnits, TorusCocycle,
};
use nalgebra::DMatrix;
use num::complex::Complex64;

fn main() {
    let r = Arc::new(FiniteEquivRelation::from_ids(&[("a", "v"), ("b", "v"), ("c", "v"), ("d", "w")]).unwrap());
    let b0: Vec<Complex64> = [0.4, -1.2, 2.5, 0.9]
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    let tc = TorusCocycle::coboundary(&r, &b0);
    let b = trivialize_cocycle(&tc).unwrap();
    println!("reconstruction error {:e}", tc.reconstruction_error(&b));

    // partial units on the subrelation {a ~ b}, twisted by phases
    let s = Arc::new(
        FiniteEquivRelation::new(
            (0..4).map(|x| r.point_id(x).to_string()).collect(),
            vec!["ab".into(), "c".into(), "d".into()],
            vec![0, 0, 1, 2],
        )
        .unwrap(),
    );
    let reference = MatrixUnits::standard(&r);
    let twist = [Complex64::from_polar(1.0, 0.7), Complex64::from_polar(1.0, -0.3)];
    let units = s
        .pairs()
        .iter()
        .map(|&(x, y)| {
            let phase = |z: usize| if z < 2 { twist[z] } else { Complex64::new(1.0, 0.0) };
            reference.get(x, y).unwrap() * (phase(x) * phase(y).conj())
        })
        .collect();
    let partial = MatrixUnits::new(&s, units).unwrap();
    let extended = extend_matrix_unit(&partial, &reference).unwrap();
    println!(
        "identity violations after extension: {}",
        extended.identity_violations(1e-12).len()
    );

    let c = |re: f64, im: f64| Complex64::new(re, im);
    let rho = DMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.4, 0.0)]);
    let state = diagonalize_state(&rho).unwrap();
    println!("eigenvalues {:?}", state.eigenvalues);
    println!("off-diagonal weight in new basis {:e}", state.off_diagonal_weight(&rho));
}
