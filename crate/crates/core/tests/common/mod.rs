#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use deltablocks::dsl::{is_keyword, parse_deltas, parse_library, parse_products, AocExpr, ProductConfiguration};
use deltablocks::scheduler::DeltaLibrary;
use deltablocks::{Block, Connection, Context, Endpoint, Model, ModelLibrary};
use proptest::prelude::*;

pub fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn sorted_files(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    files.sort();
    files
}

pub struct Fixture {
    pub core: ModelLibrary,
    pub deltas: DeltaLibrary,
    pub products: Vec<ProductConfiguration>,
}

impl Fixture {
    pub fn product(&self, name: &str) -> &ProductConfiguration {
        self.products.iter().find(|p| p.name == name).unwrap()
    }
}

pub fn load(name: &str) -> Fixture {
    let dir = fixture_dir(name);
    let mut core = ModelLibrary::new();
    for file in sorted_files(&dir.join("models"), "dbm") {
        core.merge(parse_library(&fs::read_to_string(&file).unwrap()).unwrap()).unwrap();
    }
    let mut deltas = DeltaLibrary::new();
    for file in sorted_files(&dir.join("deltas"), "dbd") {
        for delta in parse_deltas(&fs::read_to_string(&file).unwrap()).unwrap() {
            deltas.insert(delta).unwrap();
        }
    }
    let products = parse_products(&fs::read_to_string(dir.join("products.dbp")).unwrap()).unwrap();
    Fixture { core, deltas, products }
}

pub fn braking() -> Fixture {
    load("braking")
}

/// Identifiers that are not keywords.
pub fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,5}".prop_filter("keyword", |s| !is_keyword(s))
}

fn endpoint() -> impl Strategy<Value = Endpoint> {
    prop_oneof![ident().prop_map(Endpoint::boundary), (ident(), ident()).prop_map(|(b, p)| Endpoint::child(b, p)),]
}

fn connection() -> impl Strategy<Value = Connection> {
    (endpoint(), endpoint()).prop_map(|(s, t)| Connection::new(s, t))
}

/// Structurally arbitrary context with a duplicate-free namespace. Endpoints
/// and model references need not resolve.
pub fn context() -> impl Strategy<Value = Context> {
    let leaf = flat_context(Just(Vec::new()).boxed());
    leaf.prop_recursive(3, 24, 3, |inner| {
        flat_context(prop::collection::vec((ident(), inner).prop_map(|(n, b)| Block::subsystem(n, b)), 0..3).boxed())
    })
}

fn flat_context(subsystems: BoxedStrategy<Vec<Block>>) -> impl Strategy<Value = Context> {
    (
        prop::collection::vec(ident(), 0..4),
        prop::collection::vec(ident(), 0..4),
        prop::collection::vec((ident(), ident()).prop_map(|(n, m)| Block::model_ref(n, m)), 0..3),
        subsystems,
        prop::collection::vec(connection(), 0..5),
    )
        .prop_map(|(ins, outs, mrefs, subs, connections)| {
            let mut seen = std::collections::HashSet::new();
            let mut ctx = Context { connections, ..Context::default() };
            for name in ins {
                if seen.insert(name.clone()) {
                    ctx.in_ports.push(name);
                }
            }
            for name in outs {
                if seen.insert(name.clone()) {
                    ctx.out_ports.push(name);
                }
            }
            for block in mrefs.into_iter().chain(subs) {
                if seen.insert(block.name().to_string()) {
                    ctx.blocks.push(block);
                }
            }
            ctx
        })
}

pub fn library() -> impl Strategy<Value = ModelLibrary> {
    prop::collection::vec((ident(), context()), 0..4).prop_map(|models| {
        let mut lib = ModelLibrary::new();
        for (name, body) in models {
            let _ = lib.insert(Model::new(name, body));
        }
        lib
    })
}

/// Constraints over the given delta names, plus one name that is never
/// configured.
pub fn aoc(names: Vec<String>) -> impl Strategy<Value = AocExpr> {
    let mut pool = names;
    pool.push("Outside".to_string());
    let atom = prop::sample::select(pool).prop_map(AocExpr::After);
    let leaf = prop_oneof![1 => Just(AocExpr::True), 4 => atom];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(AocExpr::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| AocExpr::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| AocExpr::or(l, r)),
        ]
    })
}
