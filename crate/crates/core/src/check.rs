//! Well-formedness checking for model libraries.
//!
//! The check never stops early; every finding becomes a [`Diagnostic`].
//! Structural problems are errors. Ports without any incident connection are
//! only warnings, since intermediate variants legitimately contain them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

use crate::model::{check_endpoint, resolve_interface, Block, Context, Endpoint, EndpointCheck, ModelLibrary, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagCode {
    /// Two ports or blocks of one context share a name.
    DuplicateName,
    /// A connection endpoint names nothing.
    DanglingEndpoint,
    /// A connection reads from a sink or writes into a source.
    DirectionError,
    /// Two connections feed the same target.
    TargetOccupied,
    /// A model reference names a model missing from the library.
    UnknownModel,
    /// Model references form a cycle.
    ReferenceCycle,
    /// A port with no incident connection.
    UnconnectedPort,
}

impl DiagCode {
    pub fn severity(self) -> Severity {
        match self {
            DiagCode::UnconnectedPort => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::DuplicateName => "DuplicateName",
            DiagCode::DanglingEndpoint => "DanglingEndpoint",
            DiagCode::DirectionError => "DirectionError",
            DiagCode::TargetOccupied => "TargetOccupied",
            DiagCode::UnknownModel => "UnknownModel",
            DiagCode::ReferenceCycle => "ReferenceCycle",
            DiagCode::UnconnectedPort => "UnconnectedPort",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a diagnostic points: a model, a chain of subsystems inside it and
/// optionally one element of that context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Location {
    pub model: String,
    pub path: Vec<String>,
    pub element: Option<String>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.model)?;
        for segment in &self.path {
            write!(f, "/{segment}")?;
        }
        if let Some(element) = &self.element {
            write!(f, " [{element}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub location: Location,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagCode, location: Location, message: impl Into<String>) -> Self {
        Diagnostic { severity: code.severity(), code, location, message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}: {}", self.severity, self.code, self.location, self.message)
    }
}

/// Counts of errors and warnings in a diagnostic list.
pub fn tally(diagnostics: &[Diagnostic]) -> (usize, usize) {
    let errors = diagnostics.iter().filter(|d| d.is_error()).count();
    (errors, diagnostics.len() - errors)
}

/// Runs the full well-formedness catalog over `lib`. The result is sorted by
/// model, context path and code; ties keep discovery order.
pub fn check_wellformed(lib: &ModelLibrary) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for model in lib.models() {
        let mut path = Vec::new();
        check_context(&model.name, &mut path, &model.body, lib, &mut out);
    }
    check_reference_cycles(lib, &mut out);
    out.sort_by(|a, b| {
        (&a.location.model, &a.location.path, a.code).cmp(&(&b.location.model, &b.location.path, b.code))
    });
    out
}

fn check_context(model: &str, path: &mut Vec<String>, ctx: &Context, lib: &ModelLibrary, out: &mut Vec<Diagnostic>) {
    let at =
        |element: Option<String>, path: &[String]| Location { model: model.to_string(), path: path.to_vec(), element };

    let mut seen = HashSet::new();
    for name in ctx.names() {
        if !seen.insert(name) {
            out.push(Diagnostic::new(
                DiagCode::DuplicateName,
                at(Some(name.to_string()), path),
                format!("`{name}` is declared more than once in this context"),
            ));
        }
    }

    for block in &ctx.blocks {
        if let Block::ModelRef { name, model: target } = block {
            if !lib.contains(target) {
                out.push(Diagnostic::new(
                    DiagCode::UnknownModel,
                    at(Some(name.clone()), path),
                    format!("block `{name}` references unknown model `{target}`"),
                ));
            }
        }
    }

    let mut targets: BTreeMap<&Endpoint, usize> = BTreeMap::new();
    for conn in &ctx.connections {
        for (endpoint, role) in [(&conn.source, Role::Source), (&conn.target, Role::Target)] {
            let code = match check_endpoint(ctx, endpoint, role, lib) {
                EndpointCheck::Valid | EndpointCheck::Unresolved(_) => continue,
                EndpointCheck::Missing(why) => (DiagCode::DanglingEndpoint, why),
                EndpointCheck::WrongDirection(why) => (DiagCode::DirectionError, why),
            };
            out.push(Diagnostic::new(
                code.0,
                at(Some(conn.to_string()), path),
                format!("{role} `{endpoint}`: {}", code.1),
            ));
        }
        let count = targets.entry(&conn.target).or_default();
        *count += 1;
        if *count == 2 {
            out.push(Diagnostic::new(
                DiagCode::TargetOccupied,
                at(Some(conn.to_string()), path),
                format!("`{}` is already the target of another connection", conn.target),
            ));
        }
    }

    if !ctx.is_leaf() {
        for port in ctx.in_ports.iter().chain(&ctx.out_ports) {
            let endpoint = Endpoint::boundary(port.clone());
            if ctx.incident(&endpoint).next().is_none() {
                out.push(Diagnostic::new(
                    DiagCode::UnconnectedPort,
                    at(Some(port.clone()), path),
                    format!("boundary port `{port}` is not connected"),
                ));
            }
        }
    }
    for block in &ctx.blocks {
        let Ok(iface) = resolve_interface(block, lib) else { continue };
        for port in iface.in_ports.iter().chain(&iface.out_ports) {
            let endpoint = Endpoint::child(block.name(), port.clone());
            if ctx.incident(&endpoint).next().is_none() {
                out.push(Diagnostic::new(
                    DiagCode::UnconnectedPort,
                    at(Some(endpoint.to_string()), path),
                    format!("port `{port}` of block `{}` is not connected", block.name()),
                ));
            }
        }
    }

    for block in &ctx.blocks {
        if let Block::Subsystem { name, body } = block {
            path.push(name.clone());
            check_context(model, path, body, lib, out);
            path.pop();
        }
    }
}

fn check_reference_cycles(lib: &ModelLibrary, out: &mut Vec<Diagnostic>) {
    let order: BTreeMap<&str, usize> = lib.models().enumerate().map(|(i, m)| (m.name.as_str(), i)).collect();
    let mut graph = DiGraphMap::<&str, ()>::new();
    for model in lib.models() {
        graph.add_node(model.name.as_str());
        model.body.visit(&mut |ctx| {
            for block in &ctx.blocks {
                if let Block::ModelRef { model: target, .. } = block {
                    if lib.contains(target) {
                        graph.add_edge(model.name.as_str(), target.as_str(), ());
                    }
                }
            }
        });
    }
    for mut component in tarjan_scc(&graph) {
        let cyclic = component.len() > 1 || graph.contains_edge(component[0], component[0]);
        if !cyclic {
            continue;
        }
        component.sort_by_key(|name| order[name]);
        let members = component.join(", ");
        out.push(Diagnostic::new(
            DiagCode::ReferenceCycle,
            Location { model: component[0].to_string(), path: Vec::new(), element: None },
            format!("model references form a cycle through {members}"),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Connection, Model};

    fn ctx(ins: &[&str], outs: &[&str], blocks: Vec<Block>, conns: &[(Endpoint, Endpoint)]) -> Context {
        Context {
            in_ports: ins.iter().map(|s| s.to_string()).collect(),
            out_ports: outs.iter().map(|s| s.to_string()).collect(),
            blocks,
            connections: conns.iter().cloned().map(|(s, t)| Connection::new(s, t)).collect(),
        }
    }

    fn codes(diags: &[Diagnostic]) -> Vec<DiagCode> {
        diags.iter().map(|d| d.code).collect()
    }

    fn lib(models: Vec<Model>) -> ModelLibrary {
        ModelLibrary::from_models(models).unwrap()
    }

    fn leaf(name: &str, ins: &[&str], outs: &[&str]) -> Model {
        Model::new(name, ctx(ins, outs, vec![], &[]))
    }

    #[test]
    fn dangling_child_endpoint() {
        let l = lib(vec![Model::new(
            "M",
            ctx(&["a"], &[], vec![], &[(Endpoint::boundary("a"), Endpoint::child("ghost", "in1"))]),
        )]);
        assert_eq!(codes(&check_wellformed(&l)), [DiagCode::DanglingEndpoint]);
    }

    #[test]
    fn two_connections_into_one_outport() {
        let l = lib(vec![Model::new(
            "M",
            ctx(
                &["a", "b"],
                &["brakePressure1"],
                vec![],
                &[
                    (Endpoint::boundary("a"), Endpoint::boundary("brakePressure1")),
                    (Endpoint::boundary("b"), Endpoint::boundary("brakePressure1")),
                ],
            ),
        )]);
        assert_eq!(codes(&check_wellformed(&l)), [DiagCode::TargetOccupied]);
    }

    #[test]
    fn mutual_reference_is_one_cycle() {
        let a = Model::new("A", ctx(&[], &[], vec![Block::model_ref("b", "B")], &[]));
        let b = Model::new("B", ctx(&[], &[], vec![Block::model_ref("a", "A")], &[]));
        let diags = check_wellformed(&lib(vec![a, b]));
        assert_eq!(codes(&diags), [DiagCode::ReferenceCycle]);
        assert_eq!(diags[0].location.model, "A");
    }

    #[test]
    fn self_reference_is_a_cycle() {
        let a = Model::new("A", ctx(&[], &[], vec![Block::model_ref("me", "A")], &[]));
        assert_eq!(codes(&check_wellformed(&lib(vec![a]))), [DiagCode::ReferenceCycle]);
    }

    #[test]
    fn unknown_model_reference() {
        let m = Model::new("M", ctx(&[], &[], vec![Block::model_ref("x", "Missing")], &[]));
        assert_eq!(codes(&check_wellformed(&lib(vec![m]))), [DiagCode::UnknownModel]);
    }

    #[test]
    fn direction_errors_both_ends() {
        let m = Model::new(
            "M",
            ctx(
                &["i"],
                &["o"],
                vec![Block::model_ref("l", "L")],
                &[
                    (Endpoint::boundary("o"), Endpoint::child("l", "x")),
                    (Endpoint::child("l", "x"), Endpoint::boundary("i")),
                ],
            ),
        );
        let diags = check_wellformed(&lib(vec![m, leaf("L", &["x"], &["y"])]));
        let errors: Vec<_> = diags.iter().filter(|d| d.is_error()).map(|d| d.code).collect();
        assert_eq!(errors, [DiagCode::DirectionError; 3]);
    }

    #[test]
    fn duplicate_names_across_kinds() {
        let m = Model::new("M", ctx(&["x"], &["x"], vec![Block::subsystem("x", Context::default())], &[]));
        let diags = check_wellformed(&lib(vec![m]));
        let errors: Vec<_> = diags.iter().filter(|d| d.is_error()).map(|d| d.code).collect();
        assert_eq!(errors, [DiagCode::DuplicateName, DiagCode::DuplicateName]);
    }

    #[test]
    fn unconnected_ports_are_warnings_outside_leaves() {
        let m = Model::new(
            "M",
            ctx(
                &["a", "unused"],
                &[],
                vec![Block::model_ref("l", "L")],
                &[(Endpoint::boundary("a"), Endpoint::child("l", "x"))],
            ),
        );
        let diags = check_wellformed(&lib(vec![m, leaf("L", &["x"], &["y"])]));
        assert!(diags.iter().all(|d| d.severity == Severity::Warning));
        let elements: Vec<_> = diags.iter().map(|d| d.location.element.clone().unwrap()).collect();
        assert_eq!(elements, ["unused", "l.y"]);
    }

    #[test]
    fn nested_contexts_are_checked_and_sorted() {
        let inner = ctx(&[], &[], vec![], &[(Endpoint::boundary("nope"), Endpoint::boundary("nope2"))]);
        let m = Model::new("M", ctx(&[], &[], vec![Block::subsystem("S", inner)], &[]));
        let z = Model::new("A", ctx(&[], &[], vec![Block::model_ref("q", "Q")], &[]));
        let diags = check_wellformed(&lib(vec![m, z]));
        let locs: Vec<_> = diags.iter().map(|d| (d.location.model.as_str(), d.location.path.len(), d.code)).collect();
        assert_eq!(
            locs,
            [
                ("A", 0, DiagCode::UnknownModel),
                ("M", 1, DiagCode::DanglingEndpoint),
                ("M", 1, DiagCode::DanglingEndpoint),
            ]
        );
        assert_eq!(diags[1].location.to_string(), "M/S [nope -> nope2]");
    }
}
