//! Finite-dimensional C*-algebras of finite equivalence relations.
//!
//! `C*(R)` for `R = {(x, y) : r(x) = r(y)}` is block diagonal with one full
//! matrix block per class. An [`InclusionGraph`] lifts `R` on `X` to `R̲` on
//! `X̲ = {(x, a) : r(x) = s(a)}`; [`include_j`] embeds `C*(R)` into `C*(R̲)`
//! and [`commutant_embed_k`] identifies `C*(R′)` with the commutant of its
//! image. A transition probability `p` on the edges gives the model
//! conditional expectation `Q` ([`ModelExpectation`]), which factors as a
//! pinching followed by an averaging ([`pinch_average_decompose`]), and from
//! which `p` is read back by [`extract_transition`].
//!
//! Identifying an abstract faithful expectation with a model one goes block
//! by block: diagonalise the state on each block ([`diagonalize_state`]) to
//! get a compatible diagonal, read off partial matrix units on the pieces,
//! and glue them with [`extend_matrix_unit`], which trivialises the phase
//! cocycle between the partial units and a reference family
//! ([`trivialize_cocycle`]). The choice of section used to line up the
//! blocks is left to the caller.
//!
//! Entries are `f64` complex numbers compared at `1e-9`; transition
//! probabilities stay exact rationals.

mod cocycle;
mod commutant;
mod element;
mod expectation;
mod inclusion;
mod linalg;
mod linear;
mod relation;
mod state;
mod verify;

use thiserror::Error;

pub use cocycle::{extend_matrix_unit, trivialize_cocycle, MatrixUnits, TorusCocycle};
pub use commutant::{brute_force_commutant, brute_force_commutant_with_tol, Commutant, Span};
pub use element::AlgebraElement;
pub use expectation::{
    expectation_map, extract_transition, model_expectation, pinch_average_decompose, ModelExpectation, PinchAverage,
};
pub use inclusion::{commutant_embed_k, include_j, InclusionGraph};
pub use linalg::RowSpace;
pub use linear::LinearMap;
pub use relation::{algebra_of, AlgebraStructure, FiniteEquivRelation};
pub use state::{diagonalize_state, StateDiagonalization, MAX_STATE_SIZE};
pub use verify::{verify_expectation, Check, ExpectationReport};

/// Default comparison tolerance for complex entries.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdError {
    #[error("invalid relation: {0}")]
    Relation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("({x}, {y}) is not in the relation")]
    NotRelated { x: String, y: String },
    #[error("invalid transition probability: {0}")]
    Transition(String),
    #[error("Q(ε({0})) is not a multiple of e(s({0}))")]
    NotProportional(String),
    #[error("Q(ε({0})) vanishes: map is not faithful")]
    NotFaithful(String),
    #[error("map is not a model expectation: {0}")]
    NotModelForm(String),
    #[error("cocycle identity fails on ({x}, {y}, {z})")]
    CocycleViolation { x: String, y: String, z: String },
    #[error("c({x}, {y}) does not have modulus one")]
    NotUnitModulus { x: String, y: String },
    #[error("not a partial matrix unit: {0}")]
    NotPartialUnit(String),
    #[error("state is not faithful: {0}")]
    NotPositiveDefinite(String),
    #[error("density has trace {0}, not 1")]
    TraceNotOne(f64),
}

impl FdError {
    pub fn invariant(&self) -> &'static str {
        match self {
            FdError::Relation(_) => "surjective relation maps",
            FdError::ShapeMismatch(_) => "matching shapes",
            FdError::NotRelated { .. } => "support inside the relation",
            FdError::Transition(_) => "transition probability",
            FdError::NotProportional(_) => "Q(ε(c)) = p(c)e(s(c))",
            FdError::NotFaithful(_) => "faithfulness",
            FdError::NotModelForm(_) => "model expectation form",
            FdError::CocycleViolation { .. } | FdError::NotUnitModulus { .. } => "cocycle identity",
            FdError::NotPartialUnit(_) => "matrix unit identities",
            FdError::NotPositiveDefinite(_) => "faithful state",
            FdError::TraceNotOne(_) => "unit trace",
        }
    }
}
