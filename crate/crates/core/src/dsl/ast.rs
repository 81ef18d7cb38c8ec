//! Syntax trees for deltas and product configurations. Model libraries parse
//! straight into [`crate::model`] types.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Connection, Context, Direction};

/// A named unit of change: an application order constraint plus one or more
/// `modify model` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delta {
    pub name: String,
    pub aoc: AocExpr,
    pub modifications: Vec<ModifyModel>,
}

/// A top-level `modify model` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifyModel {
    pub target_model: String,
    pub ops: Vec<DeltaOp>,
}

/// One operation inside a modify block. Operations run in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaOp {
    Add(AddOp),
    Remove { selector: ElementSelector, weak: bool },
    Replace { target: String, substitute: Substitute },
    ModifySubsystem { name: String, ops: Vec<DeltaOp> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddOp {
    Port { direction: Direction, name: String },
    ModelRef { name: String, model: String },
    Subsystem { name: String, body: Context },
    Connection(Connection),
}

/// What a `remove` operation targets. Connections have no names and are
/// selected by their endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementSelector {
    Port { direction: Direction, name: String },
    Block(String),
    Connection(Connection),
}

impl fmt::Display for ElementSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementSelector::Port { direction, name } => write!(f, "{direction} {name}"),
            ElementSelector::Block(name) => write!(f, "block {name}"),
            ElementSelector::Connection(conn) => write!(f, "connect {conn}"),
        }
    }
}

/// The block that takes the place of a replaced one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Substitute {
    Model { model: String, block_name: String },
    Subsystem { block_name: String, body: Context },
}

impl Substitute {
    pub fn block_name(&self) -> &str {
        match self {
            Substitute::Model { block_name, .. } | Substitute::Subsystem { block_name, .. } => block_name,
        }
    }
}

/// Application order constraint over `after <delta>` atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AocExpr {
    #[default]
    True,
    After(String),
    Not(Box<AocExpr>),
    And(Box<AocExpr>, Box<AocExpr>),
    Or(Box<AocExpr>, Box<AocExpr>),
}

impl AocExpr {
    pub fn after(delta: impl Into<String>) -> Self {
        AocExpr::After(delta.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: AocExpr) -> Self {
        AocExpr::Not(Box::new(inner))
    }

    pub fn and(lhs: AocExpr, rhs: AocExpr) -> Self {
        AocExpr::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: AocExpr, rhs: AocExpr) -> Self {
        AocExpr::Or(Box::new(lhs), Box::new(rhs))
    }

    /// Conjunction that absorbs the trivially true constraint.
    pub fn conjoin(self, other: AocExpr) -> Self {
        match (self, other) {
            (AocExpr::True, e) | (e, AocExpr::True) => e,
            (l, r) => AocExpr::and(l, r),
        }
    }

    /// Delta names the constraint mentions.
    pub fn mentioned(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_mentioned(&mut out);
        out
    }

    fn collect_mentioned<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            AocExpr::True => {}
            AocExpr::After(d) => {
                out.insert(d);
            }
            AocExpr::Not(e) => e.collect_mentioned(out),
            AocExpr::And(l, r) | AocExpr::Or(l, r) => {
                l.collect_mentioned(out);
                r.collect_mentioned(out);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let (prec, lhs_min, rhs_min, op) = match self {
            AocExpr::True => return f.write_str("true"),
            AocExpr::After(d) => return write!(f, "after {d}"),
            AocExpr::Not(inner) => {
                f.write_str("!")?;
                return match inner.as_ref() {
                    AocExpr::After(_) => inner.fmt_prec(f, 0),
                    _ => {
                        f.write_str("(")?;
                        inner.fmt_prec(f, 0)?;
                        f.write_str(")")
                    }
                };
            }
            AocExpr::And(..) => (2, 2, 3, " && "),
            AocExpr::Or(..) => (1, 1, 2, " || "),
        };
        let (AocExpr::And(l, r) | AocExpr::Or(l, r)) = self else { unreachable!() };
        let parens = prec < min;
        if parens {
            f.write_str("(")?;
        }
        l.fmt_prec(f, lhs_min)?;
        f.write_str(op)?;
        r.fmt_prec(f, rhs_min)?;
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Renders with the minimal parentheses the grammar needs. `True` prints as
/// `true`, which only appears in messages; a delta without constraint omits
/// its `aoc` clause instead.
impl fmt::Display for AocExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A named set of deltas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductConfiguration {
    pub name: String,
    pub deltas: BTreeSet<String>,
}

impl ProductConfiguration {
    pub fn new<I, S>(name: impl Into<String>, deltas: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ProductConfiguration { name: name.into(), deltas: deltas.into_iter().map(Into::into).collect() }
    }
}
