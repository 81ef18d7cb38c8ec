//! Delta application.
//!
//! [`apply_delta`] is functional: it works on a copy of the library and only
//! returns it when every operation succeeded, so a failed application leaves
//! nothing behind. Operations run in source order and each one checks its
//! application conditions against the state left by its predecessors.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::dsl::{AddOp, Delta, DeltaOp, ElementSelector, Substitute};
use crate::model::{
    check_endpoint, resolve_interface, Block, Connection, Context, Direction, Endpoint, EndpointCheck, ModelLibrary,
    Role,
};

/// The application condition an operation violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionCode {
    DuplicateName,
    DanglingConnectionEnd,
    TargetOccupied,
    PortStillConnected,
    MissingElement,
    ElementStillConnected,
    InvalidContextKind,
    ContextNotFound,
    ReplaceTargetMissing,
    NameClashAfterReplace,
    UnknownSubstituteModel,
    IncompatibleInterface,
}

impl ConditionCode {
    /// Numbered application condition the code enforces.
    pub fn condition(self) -> &'static str {
        match self {
            ConditionCode::DuplicateName => "1",
            ConditionCode::DanglingConnectionEnd => "2a",
            ConditionCode::TargetOccupied => "2b",
            ConditionCode::PortStillConnected => "3",
            ConditionCode::MissingElement => "4",
            ConditionCode::ElementStillConnected => "remove-block",
            ConditionCode::InvalidContextKind => "5a/5b",
            ConditionCode::ContextNotFound => "5c",
            ConditionCode::ReplaceTargetMissing => "6a",
            ConditionCode::NameClashAfterReplace => "6b",
            ConditionCode::UnknownSubstituteModel => "6c",
            ConditionCode::IncompatibleInterface => "6d",
        }
    }
}

impl fmt::Display for ConditionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A failed operation. `op_path` holds indices into the op list the failing
/// call was given, outermost first, descending through `modify subsystem`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{code}: {detail}")]
pub struct Violation {
    pub code: ConditionCode,
    pub detail: String,
    pub op_path: Vec<usize>,
}

impl Violation {
    fn new(code: ConditionCode, detail: impl Into<String>) -> Self {
        Violation { code, detail: detail.into(), op_path: Vec::new() }
    }
}

/// A failed delta application. The first index of `op_path` selects the
/// `modify model` block, the rest walk the operation tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("delta `{delta}`, operation {}: {code} (condition {}): {detail}", fmt_path(.op_path), .code.condition())]
pub struct ApplicationError {
    pub code: ConditionCode,
    pub delta: String,
    pub op_path: Vec<usize>,
    pub detail: String,
}

fn fmt_path(path: &[usize]) -> String {
    let parts: Vec<String> = path.iter().map(usize::to_string).collect();
    parts.join(".")
}

/// Where the context being modified lives. Removing a boundary port looks
/// outside the context for connections to that port.
#[derive(Debug, Clone, Copy)]
pub struct Site<'a> {
    pub lib: &'a ModelLibrary,
    /// Model whose body contains the context.
    pub model: &'a str,
    /// For a subsystem body: the enclosing context and the subsystem's name.
    pub parent: Option<(&'a Context, &'a str)>,
}

impl<'a> Site<'a> {
    /// Site of the top-level body of `model`.
    pub fn model(lib: &'a ModelLibrary, model: &'a str) -> Self {
        Site { lib, model, parent: None }
    }
}

type OpResult = Result<(), Violation>;

/// Applies every `modify model` block of `delta` to a copy of `lib`.
pub fn apply_delta(lib: &ModelLibrary, delta: &Delta) -> Result<ModelLibrary, ApplicationError> {
    let mut work = lib.clone();
    for (index, modification) in delta.modifications.iter().enumerate() {
        let fail = |v: Violation| {
            let mut op_path = vec![index];
            op_path.extend(v.op_path);
            ApplicationError { code: v.code, delta: delta.name.clone(), op_path, detail: v.detail }
        };
        let target = modification.target_model.as_str();
        let mut body = match work.get(target) {
            Some(model) => model.body.clone(),
            None => return Err(fail(missing_model_context(&work, target))),
        };
        apply_ops(&mut body, &modification.ops, &Site::model(&work, target)).map_err(fail)?;
        work.get_mut(target).expect("model looked up above").body = body;
    }
    Ok(work)
}

fn missing_model_context(lib: &ModelLibrary, target: &str) -> Violation {
    let mut is_subsystem = false;
    for model in lib.models() {
        model.body.visit(&mut |ctx| {
            is_subsystem |= matches!(ctx.block(target), Some(Block::Subsystem { .. }));
        });
    }
    if is_subsystem {
        Violation::new(
            ConditionCode::InvalidContextKind,
            format!("`{target}` is a subsystem; a top-level modify block must name a model"),
        )
    } else {
        Violation::new(ConditionCode::ContextNotFound, format!("no model `{target}`"))
    }
}

fn apply_ops(ctx: &mut Context, ops: &[DeltaOp], site: &Site<'_>) -> OpResult {
    for (index, op) in ops.iter().enumerate() {
        apply_op_in_place(ctx, op, site).map_err(|mut v| {
            v.op_path.insert(0, index);
            v
        })?;
    }
    Ok(())
}

fn apply_op_in_place(ctx: &mut Context, op: &DeltaOp, site: &Site<'_>) -> OpResult {
    match op {
        DeltaOp::Add(add) => add_in_place(ctx, add, site.lib),
        DeltaOp::Remove { selector, weak } => remove_in_place(ctx, selector, *weak, site),
        DeltaOp::Replace { target, substitute } => replace_in_place(ctx, target, substitute, site.lib),
        DeltaOp::ModifySubsystem { name, ops } => modify_subsystem_in_place(ctx, name, ops, site),
    }
}

/// Applies one operation of any kind to a copy of `ctx`.
pub fn apply_op(ctx: &Context, op: &DeltaOp, site: &Site<'_>) -> Result<Context, Violation> {
    let mut out = ctx.clone();
    apply_op_in_place(&mut out, op, site)?;
    Ok(out)
}

/// Adds a port, block or connection.
pub fn apply_add(ctx: &Context, op: &AddOp, lib: &ModelLibrary) -> Result<Context, Violation> {
    let mut out = ctx.clone();
    add_in_place(&mut out, op, lib)?;
    Ok(out)
}

/// Removes a port, block or connection; `weak` tolerates absence.
pub fn apply_remove(
    ctx: &Context,
    selector: &ElementSelector,
    weak: bool,
    site: &Site<'_>,
) -> Result<Context, Violation> {
    let mut out = ctx.clone();
    remove_in_place(&mut out, selector, weak, site)?;
    Ok(out)
}

/// Swaps block `target` for `substitute` and rewires its connections.
pub fn apply_replace(
    ctx: &Context,
    target: &str,
    substitute: &Substitute,
    lib: &ModelLibrary,
) -> Result<Context, Violation> {
    let mut out = ctx.clone();
    replace_in_place(&mut out, target, substitute, lib)?;
    Ok(out)
}

/// Runs `ops` inside the body of subsystem `name`.
pub fn apply_modify_subsystem(
    ctx: &Context,
    name: &str,
    ops: &[DeltaOp],
    site: &Site<'_>,
) -> Result<Context, Violation> {
    let mut out = ctx.clone();
    modify_subsystem_in_place(&mut out, name, ops, site)?;
    Ok(out)
}

fn ensure_fresh_name(ctx: &Context, name: &str) -> OpResult {
    if ctx.declares(name) {
        return Err(Violation::new(
            ConditionCode::DuplicateName,
            format!("an element named `{name}` already exists in this context"),
        ));
    }
    Ok(())
}

fn add_in_place(ctx: &mut Context, op: &AddOp, lib: &ModelLibrary) -> OpResult {
    match op {
        AddOp::Port { direction, name } => {
            ensure_fresh_name(ctx, name)?;
            ctx.ports_mut(*direction).push(name.clone());
        }
        AddOp::ModelRef { name, model } => {
            // the referenced model is resolved by the final well-formedness check
            ensure_fresh_name(ctx, name)?;
            ctx.blocks.push(Block::model_ref(name.clone(), model.clone()));
        }
        AddOp::Subsystem { name, body } => {
            ensure_fresh_name(ctx, name)?;
            validate_inline_body(body, lib)?;
            ctx.blocks.push(Block::subsystem(name.clone(), body.clone()));
        }
        AddOp::Connection(conn) => {
            check_new_connection(ctx, conn, lib)?;
            ctx.connections.push(conn.clone());
        }
    }
    Ok(())
}

fn check_new_connection(ctx: &Context, conn: &Connection, lib: &ModelLibrary) -> OpResult {
    for (endpoint, role) in [(&conn.source, Role::Source), (&conn.target, Role::Target)] {
        match check_endpoint(ctx, endpoint, role, lib) {
            EndpointCheck::Valid => {}
            EndpointCheck::Missing(why) | EndpointCheck::WrongDirection(why) | EndpointCheck::Unresolved(why) => {
                return Err(Violation::new(
                    ConditionCode::DanglingConnectionEnd,
                    format!("connection `{conn}`: {role} `{endpoint}` does not exist ({why})"),
                ))
            }
        }
    }
    if let Some(existing) = ctx.connections.iter().find(|c| c.target == conn.target) {
        return Err(Violation::new(
            ConditionCode::TargetOccupied,
            format!("connection `{conn}`: `{}` is already the target of `{existing}`", conn.target),
        ));
    }
    Ok(())
}

/// Checks a subsystem body written inline in a delta as if it had been built
/// up one element at a time.
fn validate_inline_body(body: &Context, lib: &ModelLibrary) -> OpResult {
    let mut seen = BTreeSet::new();
    for name in body.names() {
        if !seen.insert(name) {
            return Err(Violation::new(
                ConditionCode::DuplicateName,
                format!("`{name}` is declared twice in an inline subsystem body"),
            ));
        }
    }
    for block in &body.blocks {
        if let Block::Subsystem { body: nested, .. } = block {
            validate_inline_body(nested, lib)?;
        }
    }
    let mut partial = Context { connections: Vec::new(), ..body.clone() };
    for conn in &body.connections {
        check_new_connection(&partial, conn, lib)?;
        partial.connections.push(conn.clone());
    }
    Ok(())
}

fn remove_in_place(ctx: &mut Context, selector: &ElementSelector, weak: bool, site: &Site<'_>) -> OpResult {
    let missing = |what: String| {
        if weak {
            Ok(())
        } else {
            Err(Violation::new(ConditionCode::MissingElement, format!("cannot remove {what}: it does not exist")))
        }
    };
    match selector {
        ElementSelector::Port { direction, name } => {
            let Some(index) = ctx.ports(*direction).iter().position(|p| p == name) else {
                return missing(format!("{direction} port `{name}`"));
            };
            ensure_port_unconnected(ctx, *direction, name, site)?;
            ctx.ports_mut(*direction).remove(index);
        }
        ElementSelector::Block(name) => {
            let Some(index) = ctx.blocks.iter().position(|b| b.name() == name) else {
                return missing(format!("block `{name}`"));
            };
            if let Some(conn) = ctx.connections.iter().find(|c| c.touches_block(name)) {
                return Err(Violation::new(
                    ConditionCode::ElementStillConnected,
                    format!("block `{name}` is still connected by `{conn}`"),
                ));
            }
            ctx.blocks.remove(index);
        }
        ElementSelector::Connection(conn) => {
            let Some(index) = ctx.connections.iter().position(|c| c == conn) else {
                return missing(format!("connection `{conn}`"));
            };
            ctx.connections.remove(index);
        }
    }
    Ok(())
}

/// A boundary port may go only if nothing inside or outside the context is
/// wired to it. Outside means the parent context for a subsystem body, and
/// every context referencing the model for a model body.
fn ensure_port_unconnected(ctx: &Context, direction: Direction, name: &str, site: &Site<'_>) -> OpResult {
    let still_connected = |conn: &Connection, whence: String| {
        Err(Violation::new(
            ConditionCode::PortStillConnected,
            format!("{direction} port `{name}` is still connected by `{conn}` {whence}"),
        ))
    };
    let inner = Endpoint::boundary(name);
    if let Some(conn) = ctx.incident(&inner).next() {
        return still_connected(conn, "inside its context".into());
    }
    match site.parent {
        Some((parent, subsystem)) => {
            let outer = Endpoint::child(subsystem, name);
            let hit = parent.incident(&outer).next();
            if let Some(conn) = hit {
                return still_connected(conn, format!("around subsystem `{subsystem}`"));
            }
        }
        None => {
            for model in site.lib.models() {
                let mut found = None;
                model.body.visit(&mut |other| {
                    if found.is_some() {
                        return;
                    }
                    for block in &other.blocks {
                        let Block::ModelRef { name: block_name, model: target } = block else { continue };
                        if target != site.model {
                            continue;
                        }
                        let outer = Endpoint::child(block_name.clone(), name);
                        let hit = other.incident(&outer).next().cloned();
                        if hit.is_some() {
                            found = hit;
                            return;
                        }
                    }
                });
                if let Some(conn) = found {
                    return still_connected(&conn, format!("in model `{}`", model.name));
                }
            }
        }
    }
    Ok(())
}

fn replace_in_place(ctx: &mut Context, target: &str, substitute: &Substitute, lib: &ModelLibrary) -> OpResult {
    let Some(index) = ctx.blocks.iter().position(|b| b.name() == target) else {
        let detail = if ctx.declares(target) {
            format!("`{target}` is a port, only blocks can be replaced")
        } else {
            format!("no block `{target}` in this context")
        };
        return Err(Violation::new(ConditionCode::ReplaceTargetMissing, detail));
    };

    let new_name = substitute.block_name();
    if new_name != target && ctx.declares(new_name) {
        return Err(Violation::new(
            ConditionCode::NameClashAfterReplace,
            format!("`{new_name}` still exists after removing `{target}`"),
        ));
    }

    let replacement = match substitute {
        Substitute::Model { model, block_name } => {
            if !lib.contains(model) {
                return Err(Violation::new(
                    ConditionCode::UnknownSubstituteModel,
                    format!("substitute model `{model}` does not exist"),
                ));
            }
            Block::model_ref(block_name.clone(), model.clone())
        }
        Substitute::Subsystem { block_name, body } => {
            validate_inline_body(body, lib)?;
            Block::subsystem(block_name.clone(), body.clone())
        }
    };

    let old_iface = resolve_interface(&ctx.blocks[index], lib).map_err(|e| {
        Violation::new(
            ConditionCode::IncompatibleInterface,
            format!("cannot compare interfaces, `{target}` does not resolve: {e}"),
        )
    })?;
    let new_iface = resolve_interface(&replacement, lib).expect("substitute model checked above");
    if !new_iface.is_superset_of(&old_iface) {
        let lacking: Vec<String> = [Direction::In, Direction::Out]
            .into_iter()
            .flat_map(|dir| old_iface.ports(dir).difference(new_iface.ports(dir)).map(move |p| format!("{dir} {p}")))
            .collect();
        return Err(Violation::new(
            ConditionCode::IncompatibleInterface,
            format!("substitute `{new_name}` lacks ports of `{target}`: {}", lacking.join(", ")),
        ));
    }

    // Dropping the incident connections and re-adding them against the new
    // block is the same as renaming their endpoints in place.
    ctx.blocks[index] = replacement;
    for conn in &mut ctx.connections {
        for endpoint in [&mut conn.source, &mut conn.target] {
            if let Endpoint::ChildPort { block, .. } = endpoint {
                if block == target {
                    *block = new_name.to_string();
                }
            }
        }
    }
    Ok(())
}

fn modify_subsystem_in_place(ctx: &mut Context, name: &str, ops: &[DeltaOp], site: &Site<'_>) -> OpResult {
    let index = match ctx.blocks.iter().position(|b| b.name() == name) {
        Some(index) => index,
        None if ctx.declares(name) => {
            return Err(Violation::new(
                ConditionCode::InvalidContextKind,
                format!("`{name}` is a port, not a subsystem"),
            ))
        }
        None => {
            return Err(Violation::new(
                ConditionCode::ContextNotFound,
                format!("no subsystem `{name}` in this context"),
            ))
        }
    };
    let mut body = match &ctx.blocks[index] {
        Block::Subsystem { body, .. } => body.clone(),
        Block::ModelRef { model, .. } => {
            return Err(Violation::new(
                ConditionCode::InvalidContextKind,
                format!("`{name}` references model `{model}`; modify the model with its own `modify model` block"),
            ))
        }
    };
    let nested = Site { lib: site.lib, model: site.model, parent: Some((&*ctx, name)) };
    apply_ops(&mut body, ops, &nested)?;
    if let Block::Subsystem { body: slot, .. } = &mut ctx.blocks[index] {
        *slot = body;
    }
    Ok(())
}
