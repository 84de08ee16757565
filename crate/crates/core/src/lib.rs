//! Random walks on Bratteli diagrams, computed exactly.
//!
//! A [`diagram::BratteliDiagram`] of finite depth carries a transition
//! probability `p` and an initial distribution `ν₀`; [`walk::RandomWalk`]
//! derives the level distributions `νₙ`, the cotransition `q`, the Markov
//! measure on cylinders and its Radon–Nikodym cocycle, all as exact
//! rationals. [`harmonic`] handles harmonic sequences, tail-invariant
//! functions and ergodic components; [`fdcstar`] the finite-dimensional
//! C*-algebra side (model conditional expectations, commutants, matrix
//! units); [`skew`] skew products by group-valued edge potentials.
//!
//! The `bratteli` binary wraps these behind [`cli::run`].

pub mod cli;
pub mod diagram;
pub mod fdcstar;
pub mod harmonic;
pub mod io;
pub mod rational;
pub mod skew;
pub mod walk;

pub use diagram::{BratteliDiagram, FinitePath};
pub use rational::Rational;
pub use walk::RandomWalk;
