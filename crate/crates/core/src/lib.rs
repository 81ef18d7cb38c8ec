//! Delta-oriented variability for hierarchical block-diagram models.
//!
//! A product variant is generated from a core [`ModelLibrary`] by applying
//! the deltas of a product configuration in an order that satisfies every
//! delta's application order constraint.

pub mod check;
pub mod dsl;
pub mod engine;
pub mod export;
pub mod model;
pub mod scheduler;

pub use check::{check_wellformed, DiagCode, Diagnostic, Location, Severity};
pub use engine::{apply_delta, ApplicationError, ConditionCode};
pub use export::{export_dot, DotDocument};
pub use model::{Block, Connection, Context, Direction, Endpoint, Model, ModelError, ModelLibrary};
pub use scheduler::{
    compute_order, evaluate_aoc, generate, DeltaLibrary, GenerateError, GenerationResult, OrderFailure,
};
