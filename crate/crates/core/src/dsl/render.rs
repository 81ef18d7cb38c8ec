//! Canonical text output. One declaration per line, four-space indentation,
//! LF line endings. Within a context: in-ports, out-ports, blocks, then
//! connections, each group in stored order.

use std::fmt::Write;

use super::ast::{AddOp, AocExpr, Delta, DeltaOp, ProductConfiguration, Substitute};
use crate::model::{Block, Context, ModelLibrary};

const INDENT: &str = "    ";

pub fn render_library(lib: &ModelLibrary) -> String {
    let mut out = String::new();
    for (i, model) in lib.models().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "model {} {{", model.name);
        render_context(&mut out, &model.body, 1);
        out.push_str("}\n");
    }
    out
}

fn line(out: &mut String, depth: usize, text: std::fmt::Arguments<'_>) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
    let _ = out.write_fmt(text);
    out.push('\n');
}

fn render_context(out: &mut String, ctx: &Context, depth: usize) {
    for port in &ctx.in_ports {
        line(out, depth, format_args!("in {port}"));
    }
    for port in &ctx.out_ports {
        line(out, depth, format_args!("out {port}"));
    }
    for block in &ctx.blocks {
        match block {
            Block::ModelRef { name, model } => line(out, depth, format_args!("mref {name} : {model}")),
            Block::Subsystem { name, body } => {
                line(out, depth, format_args!("subsystem {name} {{"));
                render_context(out, body, depth + 1);
                line(out, depth, format_args!("}}"));
            }
        }
    }
    for conn in &ctx.connections {
        line(out, depth, format_args!("connect {conn}"));
    }
}

/// Renders a delta. A nested `True` inside the constraint has no concrete
/// syntax; parser-produced constraints never contain one.
pub fn render_delta(delta: &Delta) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "delta {} {{", delta.name);
    if delta.aoc != AocExpr::True {
        line(&mut out, 1, format_args!("aoc {}", delta.aoc));
    }
    for modification in &delta.modifications {
        line(&mut out, 1, format_args!("modify model {} {{", modification.target_model));
        render_ops(&mut out, &modification.ops, 2);
        line(&mut out, 1, format_args!("}}"));
    }
    out.push_str("}\n");
    out
}

fn render_ops(out: &mut String, ops: &[DeltaOp], depth: usize) {
    for op in ops {
        match op {
            DeltaOp::Add(AddOp::Port { direction, name }) => line(out, depth, format_args!("add {direction} {name}")),
            DeltaOp::Add(AddOp::ModelRef { name, model }) => {
                line(out, depth, format_args!("add mref {name} : {model}"))
            }
            DeltaOp::Add(AddOp::Subsystem { name, body }) => {
                line(out, depth, format_args!("add subsystem {name} {{"));
                render_context(out, body, depth + 1);
                line(out, depth, format_args!("}}"));
            }
            DeltaOp::Add(AddOp::Connection(conn)) => line(out, depth, format_args!("add connect {conn}")),
            DeltaOp::Remove { selector, weak } => {
                let weak = if *weak { "weak " } else { "" };
                line(out, depth, format_args!("remove {weak}{selector}"))
            }
            DeltaOp::Replace { target, substitute } => match substitute {
                Substitute::Model { model, block_name } => {
                    line(out, depth, format_args!("replace {target} with model {model} as {block_name}"))
                }
                Substitute::Subsystem { block_name, body } => {
                    line(out, depth, format_args!("replace {target} with subsystem {block_name} {{"));
                    render_context(out, body, depth + 1);
                    line(out, depth, format_args!("}}"));
                }
            },
            DeltaOp::ModifySubsystem { name, ops } => {
                line(out, depth, format_args!("modify subsystem {name} {{"));
                render_ops(out, ops, depth + 1);
                line(out, depth, format_args!("}}"));
            }
        }
    }
}

pub fn render_products(products: &[ProductConfiguration]) -> String {
    let mut out = String::new();
    for product in products {
        let deltas: Vec<&str> = product.deltas.iter().map(String::as_str).collect();
        if deltas.is_empty() {
            let _ = writeln!(out, "product {} {{ deltas }}", product.name);
        } else {
            let _ = writeln!(out, "product {} {{ deltas {} }}", product.name, deltas.join(", "));
        }
    }
    out
}
