//! Textual syntax for model libraries (`.dbm`), deltas (`.dbd`) and product
//! configurations (`.dbp`).
//!
//! ```text
//! model BrakingSystem {
//!     in brake
//!     out brakePressure1
//!     mref brakefunction : PressureCalculator
//!     connect brake -> brakefunction.brake
//!     connect brakefunction.brakePressure1 -> brakePressure1
//! }
//!
//! delta DABS {
//!     aoc !after DTW_post
//!     modify model BrakingSystem {
//!         add in wheelSpeed1
//!         replace brakefunction with model ABS as brakefunction
//!         add connect wheelSpeed1 -> brakefunction.wheelSpeed1
//!     }
//! }
//!
//! product BSwithABS { deltas DABS }
//! ```
//!
//! Keywords are reserved. Names match `[A-Za-z_][A-Za-z0-9_]*`; `//` starts a
//! line comment.

mod ast;
mod lexer;
mod parser;
mod render;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::check::Location;

pub use ast::{AddOp, AocExpr, Delta, DeltaOp, ElementSelector, ModifyModel, ProductConfiguration, Substitute};
pub use lexer::is_keyword;
pub use parser::{parse_delta, parse_deltas, parse_library, parse_library_indexed, parse_products};
pub use render::{render_delta, render_library, render_products};

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(pos: Pos, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {}, found {found}", expected.join(" or "))]
    Syntax { expected: Vec<String>, found: String },
    #[error("unexpected character `{0}`")]
    InvalidCharacter(char),
    #[error("`{name}` is already declared in {context}")]
    DuplicateName { name: String, context: String },
    #[error("model `{0}` is defined more than once")]
    DuplicateModel(String),
    #[error("delta `{0}` is defined more than once")]
    DuplicateDelta(String),
    #[error("delta `{0}` contains no `modify model` block")]
    EmptyDelta(String),
    #[error("product `{0}` is defined more than once")]
    DuplicateProductName(String),
    #[error("product `{product}` lists delta `{delta}` more than once")]
    DuplicateDeltaInProduct { product: String, delta: String },
    #[error("expected exactly one delta, found {0}")]
    DeltaCount(usize),
}

/// Source positions of parsed declarations, keyed like diagnostic locations.
/// Elements are ports, blocks and connections (`a -> b.c`); a key without an
/// element addresses the model or subsystem declaration itself.
#[derive(Debug, Clone, Default)]
pub struct SourceIndex {
    positions: HashMap<Location, Pos>,
}

impl SourceIndex {
    pub(crate) fn record(&mut self, loc: Location, pos: Pos) {
        self.positions.entry(loc).or_insert(pos);
    }

    /// Position of the element, falling back to its enclosing context.
    pub fn position_of(&self, loc: &Location) -> Option<Pos> {
        self.positions.get(loc).copied().or_else(|| {
            let context = Location { element: None, ..loc.clone() };
            self.positions.get(&context).copied()
        })
    }
}
