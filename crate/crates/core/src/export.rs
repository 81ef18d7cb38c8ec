//! Graphviz output.
//!
//! Boundary ports become `invhouse` (in) and `house` (out) nodes, collapsed
//! blocks become boxes labelled `name : Model`, expanded blocks become
//! clusters holding their own port nodes. Node ids are the element's path
//! from the exported model, joined with `/`.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::model::{Block, Context, Direction, Endpoint, ModelError, ModelLibrary};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotDocument {
    pub text: String,
}

impl fmt::Display for DotDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Exports `model`. `depth` bounds how many block levels are expanded into
/// clusters; `None` expands everything except references that would re-enter
/// a model already being expanded.
pub fn export_dot(model: &str, lib: &ModelLibrary, depth: Option<usize>) -> Result<DotDocument, ModelError> {
    let root = lib.get(model).ok_or_else(|| ModelError::UnknownModel(model.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(model));
    out.push_str("    rankdir=LR;\n");
    out.push_str("    node [fontname=\"Helvetica\"];\n");
    let mut emitter = Emitter { lib, out, stack: vec![model.to_string()] };
    emitter.context(&root.body, model, depth, 1);
    let mut text = emitter.out;
    text.push_str("}\n");
    Ok(DotDocument { text })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// How a child block appears in its parent's graph.
enum Shown<'a> {
    Collapsed,
    Expanded(&'a Context),
}

struct Emitter<'a> {
    lib: &'a ModelLibrary,
    out: String,
    /// Models currently being expanded, outermost first.
    stack: Vec<String>,
}

impl<'a> Emitter<'a> {
    fn line(&mut self, indent: usize, text: &str) {
        for _ in 0..indent {
            self.out.push_str("    ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn shown(&self, block: &'a Block, depth: Option<usize>) -> Shown<'a> {
        if depth == Some(0) {
            return Shown::Collapsed;
        }
        match block {
            Block::Subsystem { body, .. } => Shown::Expanded(body),
            Block::ModelRef { model, .. } => match self.lib.get(model) {
                Some(m) if !self.stack.contains(model) => Shown::Expanded(&m.body),
                _ => Shown::Collapsed,
            },
        }
    }

    /// Emits the ports, blocks and connections of `ctx`, whose elements live
    /// under `path`. The caller has already opened the enclosing graph.
    fn context(&mut self, ctx: &'a Context, path: &str, depth: Option<usize>, indent: usize) {
        for (dir, shape) in [(Direction::In, "invhouse"), (Direction::Out, "house")] {
            for port in ctx.ports(dir) {
                let node = format!("{} [label={}, shape={shape}];", quote(&format!("{path}/{port}")), quote(port));
                self.line(indent, &node);
            }
        }

        let inner = depth.map(|d| d.saturating_sub(1));
        let mut shown = Vec::with_capacity(ctx.blocks.len());
        for block in &ctx.blocks {
            let id = format!("{path}/{}", block.name());
            let label = match block {
                Block::Subsystem { name, .. } => name.clone(),
                Block::ModelRef { name, model } => format!("{name} : {model}"),
            };
            let view = self.shown(block, depth);
            match view {
                Shown::Collapsed => {
                    self.line(indent, &format!("{} [label={}, shape=box];", quote(&id), quote(&label)));
                }
                Shown::Expanded(body) => {
                    self.line(indent, &format!("subgraph {} {{", quote(&format!("cluster_{id}"))));
                    self.line(indent + 1, &format!("label={};", quote(&label)));
                    let pushed = if let Block::ModelRef { model, .. } = block {
                        self.stack.push(model.clone());
                        true
                    } else {
                        false
                    };
                    self.context(body, &id, inner, indent + 1);
                    if pushed {
                        self.stack.pop();
                    }
                    self.line(indent, "}");
                }
            }
            shown.push((block.name(), view));
        }

        let mut placeholders = BTreeSet::new();
        let mut edges = Vec::with_capacity(ctx.connections.len());
        for conn in &ctx.connections {
            let mut ends = [String::new(), String::new()];
            for (slot, endpoint) in ends.iter_mut().zip([&conn.source, &conn.target]) {
                let (id, known) = match endpoint {
                    Endpoint::Boundary(port) => {
                        (format!("{path}/{port}"), ctx.declares(port) && ctx.block(port).is_none())
                    }
                    Endpoint::ChildPort { block, port } => match shown.iter().find(|(name, _)| name == block) {
                        Some((_, Shown::Collapsed)) => (format!("{path}/{block}"), true),
                        Some((_, Shown::Expanded(body))) => (
                            format!("{path}/{block}/{port}"),
                            body.ports(Direction::In).contains(port) || body.ports(Direction::Out).contains(port),
                        ),
                        None => (format!("{path}/{block}.{port}"), false),
                    },
                };
                if !known {
                    placeholders.insert(id.clone());
                }
                *slot = id;
            }
            let mut attrs = Vec::new();
            if let Some((_, Shown::Collapsed)) = conn.source.block().and_then(|b| shown.iter().find(|(n, _)| *n == b)) {
                attrs.push(format!("taillabel={}", quote(conn.source.port())));
            }
            if let Some((_, Shown::Collapsed)) = conn.target.block().and_then(|b| shown.iter().find(|(n, _)| *n == b)) {
                attrs.push(format!("headlabel={}", quote(conn.target.port())));
            }
            let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
            edges.push(format!("{} -> {}{attrs};", quote(&ends[0]), quote(&ends[1])));
        }
        for id in placeholders {
            let label = id.rsplit('/').next().unwrap_or(&id).to_string();
            self.line(indent, &format!("{} [label={}, shape=plain, fontcolor=red];", quote(&id), quote(&label)));
        }
        for edge in edges {
            self.line(indent, &edge);
        }
    }
}
