//! Command implementations behind the `deltablocks` binary.
//!
//! Exit codes: 0 success, 1 semantic failure (error diagnostics, failed
//! ordering or application, warnings under `--strict`), 2 usage, syntax or
//! I/O problems. Human-readable messages go to stderr; orders and the batch
//! summary go to stdout.

pub mod workspace;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use deltablocks::check::{check_wellformed, tally, Diagnostic};
use deltablocks::dsl::{render_library, DeltaOp, ProductConfiguration};
use deltablocks::export::export_dot;
use deltablocks::scheduler::{compute_order, generate, GenerateError, GenerationResult, OrderFailure};
use rayon::prelude::*;

pub use workspace::{LoadError, Workspace};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "deltablocks", version, about = "Generate block-diagram model variants from deltas")]
pub struct Cli {
    /// Directory of model files (*.dbm)
    #[arg(long, global = true, default_value = "models")]
    pub models: PathBuf,
    /// Directory of delta files (*.dbd)
    #[arg(long, global = true, default_value = "deltas")]
    pub deltas: PathBuf,
    /// Product configuration file (*.dbp)
    #[arg(long, global = true, default_value = "products.dbp")]
    pub products: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse everything and check the core library
    Check,
    /// Print the application order of a product, one delta per line
    Order { product: String },
    /// Generate one product variant
    Generate {
        product: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate every product, one subdirectory each
    GenerateAll {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also write a Graphviz rendering
    #[arg(long)]
    pub dot: bool,
    /// Model to render with --dot; defaults to the first model loaded
    #[arg(long, requires = "dot")]
    pub root: Option<String>,
    /// Block levels to expand with --dot; unlimited by default
    #[arg(long, requires = "dot")]
    pub depth: Option<usize>,
    /// Treat warnings as failures
    #[arg(long)]
    pub strict: bool,
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let ws = match Workspace::load(&cli.models, &cli.deltas, &cli.products) {
        Ok(ws) => ws,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match &cli.command {
        Command::Check => cmd_check(&ws, stderr),
        Command::Order { product } => cmd_order(&ws, product, stdout, stderr),
        Command::Generate { product, output } => cmd_generate(&ws, product, output, stderr),
        Command::GenerateAll { output } => cmd_generate_all(&ws, output, stdout, stderr),
    }
}

fn print_diagnostic(ws: &Workspace, d: &Diagnostic, out: &mut dyn Write) {
    match ws.locate(&d.location) {
        Some(pos) => {
            let _ = writeln!(out, "{pos}: {d}");
        }
        None => {
            let _ = writeln!(out, "{d}");
        }
    }
}

/// Checks the core library plus the cross-file references a parser cannot
/// see: modified models must exist, products must name loaded deltas.
/// Constraints mentioning unknown deltas only warn, since such an atom is
/// simply never satisfied.
pub fn cmd_check(ws: &Workspace, stderr: &mut dyn Write) -> u8 {
    let diagnostics = check_wellformed(&ws.core);
    for d in &diagnostics {
        print_diagnostic(ws, d, stderr);
    }
    let (mut errors, mut warnings) = tally(&diagnostics);

    for delta in ws.deltas.iter() {
        let file = ws.delta_file(&delta.name).map(|p| p.display().to_string()).unwrap_or_default();
        for m in &delta.modifications {
            if !ws.core.contains(&m.target_model) {
                errors += 1;
                let _ = writeln!(
                    stderr,
                    "{file}: error: delta `{}` modifies model `{}`, which does not exist",
                    delta.name, m.target_model
                );
            }
            for model in added_model_refs(&m.ops) {
                if !ws.core.contains(model) {
                    warnings += 1;
                    let _ = writeln!(
                        stderr,
                        "{file}: warning: delta `{}` references model `{model}`, which does not exist",
                        delta.name
                    );
                }
            }
        }
        for name in delta.aoc.mentioned() {
            if !ws.deltas.contains(name) {
                warnings += 1;
                let _ =
                    writeln!(stderr, "{file}: warning: delta `{}` constrains on unknown delta `{name}`", delta.name);
            }
        }
    }
    for product in &ws.products {
        for name in &product.deltas {
            if !ws.deltas.contains(name) {
                errors += 1;
                let _ = writeln!(
                    stderr,
                    "{}: error: product `{}` selects unknown delta `{name}`",
                    ws.product_path.display(),
                    product.name
                );
            }
        }
    }

    let _ = writeln!(
        stderr,
        "checked {} model(s), {} delta(s), {} product(s): {errors} error(s), {warnings} warning(s)",
        ws.core.len(),
        ws.deltas.len(),
        ws.products.len()
    );
    if errors > 0 {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn added_model_refs(ops: &[DeltaOp]) -> Vec<&str> {
    use deltablocks::dsl::{AddOp, Substitute};
    let mut out = Vec::new();
    for op in ops {
        match op {
            DeltaOp::Add(AddOp::ModelRef { model, .. }) => out.push(model.as_str()),
            DeltaOp::Replace { substitute: Substitute::Model { model, .. }, .. } => out.push(model.as_str()),
            DeltaOp::ModifySubsystem { ops, .. } => out.extend(added_model_refs(ops)),
            _ => {}
        }
    }
    out
}

fn order_failure_exit(failure: &OrderFailure) -> u8 {
    match failure {
        OrderFailure::UnknownDelta { .. } => EXIT_USAGE,
        OrderFailure::Unsatisfiable { .. } => EXIT_FAILURE,
    }
}

fn print_order_failure(product: &str, failure: &OrderFailure, stderr: &mut dyn Write) {
    let _ = writeln!(stderr, "error: product `{product}`: {failure}");
    if let OrderFailure::Unsatisfiable { dead_ends } = failure {
        for dead_end in dead_ends {
            let _ = writeln!(stderr, "  {dead_end}");
        }
    }
}

pub fn cmd_order(ws: &Workspace, product: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let Some(config) = ws.product(product) else {
        let _ = writeln!(stderr, "error: unknown product `{product}`");
        return EXIT_USAGE;
    };
    match compute_order(config, &ws.deltas) {
        Ok(order) => {
            for name in order {
                let _ = writeln!(stdout, "{name}");
            }
            EXIT_OK
        }
        Err(failure) => {
            print_order_failure(product, &failure, stderr);
            order_failure_exit(&failure)
        }
    }
}

/// Outcome of generating one product, with its messages buffered so that
/// parallel runs print in a stable order.
struct ProductRun {
    name: String,
    deltas: usize,
    counts: Option<(usize, usize)>,
    exit: u8,
    messages: Vec<u8>,
}

fn generate_product(ws: &Workspace, config: &ProductConfiguration, output: &OutputArgs, dir: &Path) -> ProductRun {
    let mut messages = Vec::new();
    let run = |counts, exit, messages| ProductRun {
        name: config.name.clone(),
        deltas: config.deltas.len(),
        counts,
        exit,
        messages,
    };
    let result = match generate(&ws.core, &ws.deltas, config) {
        Ok(result) => result,
        Err(GenerateError::Order(failure)) => {
            print_order_failure(&config.name, &failure, &mut messages);
            return run(None, order_failure_exit(&failure), messages);
        }
        Err(GenerateError::Application(e)) => {
            let file = ws.delta_file(&e.delta).map(|p| format!("{}: ", p.display())).unwrap_or_default();
            let _ = writeln!(messages, "error: product `{}`: {file}{e}", config.name);
            return run(None, EXIT_FAILURE, messages);
        }
    };
    for d in &result.diagnostics {
        let _ = writeln!(messages, "{}: {d}", config.name);
    }
    if let Err(e) = write_outputs(ws, &config.name, &result, output, dir) {
        let _ = writeln!(messages, "error: product `{}`: {e}", config.name);
        return run(None, EXIT_USAGE, messages);
    }
    let (errors, warnings) = tally(&result.diagnostics);
    let exit = if errors > 0 || (output.strict && warnings > 0) { EXIT_FAILURE } else { EXIT_OK };
    run(Some((errors, warnings)), exit, messages)
}

fn write_outputs(
    ws: &Workspace,
    name: &str,
    result: &GenerationResult,
    output: &OutputArgs,
    dir: &Path,
) -> Result<(), String> {
    let io = |path: &Path, e: io::Error| format!("{}: {e}", path.display());
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let write = |file: String, text: &str| {
        let path = dir.join(file);
        fs::write(&path, text).map_err(|e| io(&path, e))
    };
    write(format!("{name}.dbm"), &render_library(&result.variant))?;
    let order: String = result.applied_order.iter().map(|d| format!("{d}\n")).collect();
    write(format!("{name}.order.txt"), &order)?;
    let diags: String = result.diagnostics.iter().map(|d| format!("{d}\n")).collect();
    write(format!("{name}.diag.txt"), &diags)?;
    if output.dot {
        let root = match &output.root {
            Some(root) => root.clone(),
            None => match ws.core.models().next() {
                Some(model) => model.name.clone(),
                None => return Err("no model to render".to_string()),
            },
        };
        let doc = export_dot(&root, &result.variant, output.depth).map_err(|e| e.to_string())?;
        write(format!("{name}.dot"), &doc.text)?;
    }
    Ok(())
}

pub fn cmd_generate(ws: &Workspace, product: &str, output: &OutputArgs, stderr: &mut dyn Write) -> u8 {
    let Some(config) = ws.product(product) else {
        let _ = writeln!(stderr, "error: unknown product `{product}`");
        return EXIT_USAGE;
    };
    let run = generate_product(ws, config, output, &output.out);
    let _ = stderr.write_all(&run.messages);
    run.exit
}

/// Generates every product into `<out>/<product>/`, in parallel, and prints
/// a summary table sorted by product name.
pub fn cmd_generate_all(ws: &Workspace, output: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let mut runs: Vec<ProductRun> = ws
        .products
        .par_iter()
        .map(|config| generate_product(ws, config, output, &output.out.join(&config.name)))
        .collect();
    runs.sort_by(|a, b| a.name.cmp(&b.name));

    let width = runs.iter().map(|r| r.name.len()).max().unwrap_or(0).max("product".len());
    let _ = writeln!(stdout, "{:<width$}  {:>6}  {:>6}  {:>8}  status", "product", "deltas", "errors", "warnings");
    for run in &runs {
        let _ = stderr.write_all(&run.messages);
        let (errors, warnings) = match run.counts {
            Some((e, w)) => (e.to_string(), w.to_string()),
            None => ("-".to_string(), "-".to_string()),
        };
        let status = if run.exit == EXIT_OK { "ok" } else { "failed" };
        let _ = writeln!(stdout, "{:<width$}  {:>6}  {errors:>6}  {warnings:>8}  {status}", run.name, run.deltas);
    }
    runs.iter().map(|r| r.exit).max().unwrap_or(EXIT_OK)
}
