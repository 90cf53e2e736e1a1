use thiserror::Error;

use crate::group::AxiomViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown group descriptor `{0}`")]
    UnknownDescriptor(String),

    #[error("invalid Cayley table: {0}")]
    MalformedTable(String),

    #[error("group axiom violated: {0}")]
    Axiom(#[from] AxiomViolation),

    #[error("order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: usize, bound: usize },

    #[error("brute-force budget exceeded: {candidates} candidates > budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },

    #[error("map is not a group homomorphism (fails at ({0}, {1}))")]
    NotHomomorphism(usize, usize),

    #[error("map has {got} images, expected {expected}")]
    WrongLength { expected: usize, got: usize },

    #[error("image {image} out of range for a group of order {order}")]
    ImageOutOfRange { image: usize, order: usize },

    #[error("not a Rota-Baxter operator: law fails at x={x}, y={y}")]
    NotRotaBaxter { x: usize, y: usize },

    #[error("element set is not a subgroup")]
    NotSubgroup,

    #[error("subgroup is not normal (conjugate of {n} by {g} leaves it)")]
    NotNormal { n: usize, g: usize },

    #[error("group is not abelian ({0} and {1} do not commute)")]
    NotAbelian(usize, usize),

    #[error("invalid module data: {0}")]
    Module(String),

    #[error("sigma does not intertwine: R_I sigma_h != mu_(R_H h) R_I at h={h}, y={y}")]
    Intertwining { h: usize, y: usize },

    #[error("pair is not a 2-cocycle: {component} condition fails at {tuple:?}")]
    NotCocycle {
        component: &'static str,
        tuple: Vec<usize>,
    },

    #[error("map is not an st-section: {0}")]
    NotSection(String),

    #[error("split data violates the Rota-Baxter law at ({x}, {y})")]
    SplitCondition { x: usize, y: usize },

    #[error("pair is not a compatible pair for the action")]
    NotCompatible,

    #[error("center is not invariant under R_I (R_I({0}) leaves the center)")]
    CenterNotInvariant(usize),

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
