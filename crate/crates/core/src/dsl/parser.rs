//! Recursive descent parser. One token of lookahead is enough everywhere.

use std::collections::BTreeSet;

use super::ast::{AddOp, AocExpr, Delta, DeltaOp, ElementSelector, ModifyModel, ProductConfiguration, Substitute};
use super::lexer::{tokenize, Keyword, Tok, Token};
use super::{ParseError, ParseErrorKind, Pos, SourceIndex};
use crate::check::Location;
use crate::model::{Block, Connection, Context, Direction, Endpoint, Model, ModelLibrary};

type PResult<T> = Result<T, ParseError>;

/// Parses a `.dbm` source into a library.
pub fn parse_library(src: &str) -> PResult<ModelLibrary> {
    parse_library_indexed(src).map(|(lib, _)| lib)
}

/// Like [`parse_library`], also returning declaration positions.
pub fn parse_library_indexed(src: &str) -> PResult<(ModelLibrary, SourceIndex)> {
    let mut p = Parser::new(src)?;
    p.index = Some(SourceIndex::default());
    let mut lib = ModelLibrary::new();
    while !p.at(&Tok::Eof) {
        let (model, pos) = p.model()?;
        if lib.contains(&model.name) {
            return Err(ParseError::new(pos, ParseErrorKind::DuplicateModel(model.name)));
        }
        lib.insert(model).expect("name checked above");
    }
    Ok((lib, p.index.take().unwrap_or_default()))
}

/// Parses a `.dbd` source holding any number of deltas.
pub fn parse_deltas(src: &str) -> PResult<Vec<Delta>> {
    let mut p = Parser::new(src)?;
    let mut deltas: Vec<Delta> = Vec::new();
    while !p.at(&Tok::Eof) {
        let (delta, pos) = p.delta()?;
        if deltas.iter().any(|d| d.name == delta.name) {
            return Err(ParseError::new(pos, ParseErrorKind::DuplicateDelta(delta.name)));
        }
        deltas.push(delta);
    }
    Ok(deltas)
}

/// Parses a source that must contain exactly one delta.
pub fn parse_delta(src: &str) -> PResult<Delta> {
    let mut deltas = parse_deltas(src)?;
    if deltas.len() != 1 {
        return Err(ParseError::new(Pos { line: 1, col: 1 }, ParseErrorKind::DeltaCount(deltas.len())));
    }
    Ok(deltas.remove(0))
}

/// Parses a `.dbp` source into product configurations, in file order.
pub fn parse_products(src: &str) -> PResult<Vec<ProductConfiguration>> {
    let mut p = Parser::new(src)?;
    let mut products: Vec<ProductConfiguration> = Vec::new();
    while !p.at(&Tok::Eof) {
        p.expect_kw(Keyword::Product)?;
        let (name, name_pos) = p.ident()?;
        if products.iter().any(|c| c.name == name) {
            return Err(ParseError::new(name_pos, ParseErrorKind::DuplicateProductName(name)));
        }
        p.expect(Tok::LBrace)?;
        p.expect_kw(Keyword::Deltas)?;
        let mut deltas = BTreeSet::new();
        if !p.at(&Tok::RBrace) {
            loop {
                let (delta, pos) = p.ident()?;
                if !deltas.insert(delta.clone()) {
                    return Err(ParseError::new(pos, ParseErrorKind::DuplicateDeltaInProduct { product: name, delta }));
                }
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        p.expect(Tok::RBrace)?;
        products.push(ProductConfiguration { name, deltas });
    }
    Ok(products)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    /// Set while parsing a library; inline bodies in deltas are not indexed.
    index: Option<SourceIndex>,
    /// Model name followed by the enclosing subsystem names.
    scope: Vec<String>,
}

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { tokens: tokenize(src)?, at: 0, index: None, scope: Vec::new() })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn at_kw(&self, kw: Keyword) -> bool {
        self.at(&Tok::Kw(kw))
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.at].clone();
        if tok.tok != Tok::Eof {
            self.at += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        let found = self.peek();
        Err(ParseError::new(
            found.pos,
            ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: found.tok.to_string(),
            },
        ))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        if self.at(&tok) {
            Ok(self.advance().pos)
        } else {
            self.unexpected(&[&tok.to_string()])
        }
    }

    fn expect_kw(&mut self, kw: Keyword) -> PResult<Pos> {
        self.expect(Tok::Kw(kw))
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                Ok((name, self.advance().pos))
            }
            _ => self.unexpected(&["identifier"]),
        }
    }

    fn direction(&mut self) -> Option<Direction> {
        if self.eat(&Tok::Kw(Keyword::In)) {
            Some(Direction::In)
        } else if self.eat(&Tok::Kw(Keyword::Out)) {
            Some(Direction::Out)
        } else {
            None
        }
    }

    fn record(&mut self, element: Option<String>, pos: Pos) {
        if let (Some(index), Some((model, path))) = (&mut self.index, self.scope.split_first()) {
            index.record(Location { model: model.clone(), path: path.to_vec(), element }, pos);
        }
    }

    // model := "model" ID "{" decl* "}"
    fn model(&mut self) -> PResult<(Model, Pos)> {
        self.expect_kw(Keyword::Model)?;
        let (name, pos) = self.ident()?;
        self.scope = vec![name.clone()];
        self.record(None, pos);
        let body = self.body(&format!("model `{name}`"))?;
        self.scope.clear();
        Ok((Model::new(name, body), pos))
    }

    // "{" decl* "}"
    fn body(&mut self, what: &str) -> PResult<Context> {
        self.expect(Tok::LBrace)?;
        let mut ctx = Context::default();
        while !self.eat(&Tok::RBrace) {
            self.decl(&mut ctx, what)?;
        }
        Ok(ctx)
    }

    fn declare(&mut self, ctx: &Context, name: &str, pos: Pos, what: &str) -> PResult<()> {
        if ctx.declares(name) {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::DuplicateName { name: name.to_string(), context: what.to_string() },
            ));
        }
        self.record(Some(name.to_string()), pos);
        Ok(())
    }

    fn decl(&mut self, ctx: &mut Context, what: &str) -> PResult<()> {
        if let Some(dir) = self.direction() {
            loop {
                let (name, pos) = self.ident()?;
                self.declare(ctx, &name, pos, what)?;
                ctx.ports_mut(dir).push(name);
                if !self.eat(&Tok::Comma) {
                    return Ok(());
                }
            }
        }
        match self.peek().tok {
            Tok::Kw(Keyword::Mref) => {
                self.advance();
                let (name, pos) = self.ident()?;
                self.expect(Tok::Colon)?;
                let (model, _) = self.ident()?;
                self.declare(ctx, &name, pos, what)?;
                ctx.blocks.push(Block::model_ref(name, model));
            }
            Tok::Kw(Keyword::Subsystem) => {
                self.advance();
                let (name, pos) = self.ident()?;
                self.declare(ctx, &name, pos, what)?;
                self.scope.push(name.clone());
                self.record(None, pos);
                let body = self.body(&format!("subsystem `{name}`"))?;
                self.scope.pop();
                ctx.blocks.push(Block::subsystem(name, body));
            }
            Tok::Kw(Keyword::Connect) => {
                let pos = self.advance().pos;
                let conn = self.connection()?;
                self.record(Some(conn.to_string()), pos);
                ctx.connections.push(conn);
            }
            _ => return self.unexpected(&["`in`", "`out`", "`mref`", "`subsystem`", "`connect`", "`}`"]),
        }
        Ok(())
    }

    // endpoint "->" endpoint
    fn connection(&mut self) -> PResult<Connection> {
        let source = self.endpoint()?;
        self.expect(Tok::Arrow)?;
        let target = self.endpoint()?;
        Ok(Connection::new(source, target))
    }

    // endpoint := ID | ID "." ID
    fn endpoint(&mut self) -> PResult<Endpoint> {
        let (first, _) = self.ident()?;
        if self.eat(&Tok::Dot) {
            let (port, _) = self.ident()?;
            Ok(Endpoint::ChildPort { block: first, port })
        } else {
            Ok(Endpoint::Boundary(first))
        }
    }

    // delta := "delta" ID "{" aocClause* modifyModel+ "}"
    fn delta(&mut self) -> PResult<(Delta, Pos)> {
        self.expect_kw(Keyword::Delta)?;
        let (name, pos) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut aoc = AocExpr::True;
        while self.eat(&Tok::Kw(Keyword::Aoc)) {
            aoc = aoc.conjoin(self.aoc_or()?);
        }
        let mut modifications = Vec::new();
        while self.at_kw(Keyword::Modify) {
            self.advance();
            self.expect_kw(Keyword::Model)?;
            let (target_model, _) = self.ident()?;
            let ops = self.op_block()?;
            modifications.push(ModifyModel { target_model, ops });
        }
        if !self.at(&Tok::RBrace) {
            let expected: &[&str] =
                if modifications.is_empty() { &["`aoc`", "`modify`", "`}`"] } else { &["`modify`", "`}`"] };
            return self.unexpected(expected);
        }
        self.advance();
        if modifications.is_empty() {
            return Err(ParseError::new(pos, ParseErrorKind::EmptyDelta(name)));
        }
        Ok((Delta { name, aoc, modifications }, pos))
    }

    // aocExpr with `&&` binding tighter than `||`, both left associative
    fn aoc_or(&mut self) -> PResult<AocExpr> {
        let mut lhs = self.aoc_and()?;
        while self.eat(&Tok::OrOr) {
            lhs = AocExpr::or(lhs, self.aoc_and()?);
        }
        Ok(lhs)
    }

    fn aoc_and(&mut self) -> PResult<AocExpr> {
        let mut lhs = self.aoc_term()?;
        while self.eat(&Tok::AndAnd) {
            lhs = AocExpr::and(lhs, self.aoc_term()?);
        }
        Ok(lhs)
    }

    // aocTerm := "!"? ( "after" ID | "(" aocExpr ")" )
    fn aoc_term(&mut self) -> PResult<AocExpr> {
        let negated = self.eat(&Tok::Bang);
        let term = if self.eat(&Tok::Kw(Keyword::After)) {
            AocExpr::After(self.ident()?.0)
        } else if self.eat(&Tok::LParen) {
            let inner = self.aoc_or()?;
            self.expect(Tok::RParen)?;
            inner
        } else {
            return self.unexpected(&["`after`", "`(`"]);
        };
        Ok(if negated { AocExpr::not(term) } else { term })
    }

    // "{" deltaOp* "}"
    fn op_block(&mut self) -> PResult<Vec<DeltaOp>> {
        self.expect(Tok::LBrace)?;
        let mut ops = Vec::new();
        while !self.eat(&Tok::RBrace) {
            ops.push(self.op()?);
        }
        Ok(ops)
    }

    fn op(&mut self) -> PResult<DeltaOp> {
        match self.peek().tok {
            Tok::Kw(Keyword::Add) => {
                self.advance();
                self.add_op()
            }
            Tok::Kw(Keyword::Remove) => {
                self.advance();
                let weak = self.eat(&Tok::Kw(Keyword::Weak));
                let selector = self.selector()?;
                Ok(DeltaOp::Remove { selector, weak })
            }
            Tok::Kw(Keyword::Replace) => {
                self.advance();
                let (target, _) = self.ident()?;
                self.expect_kw(Keyword::With)?;
                let substitute = if self.eat(&Tok::Kw(Keyword::Model)) {
                    let (model, _) = self.ident()?;
                    self.expect_kw(Keyword::As)?;
                    let (block_name, _) = self.ident()?;
                    Substitute::Model { model, block_name }
                } else if self.eat(&Tok::Kw(Keyword::Subsystem)) {
                    let (block_name, _) = self.ident()?;
                    let body = self.body(&format!("subsystem `{block_name}`"))?;
                    Substitute::Subsystem { block_name, body }
                } else {
                    return self.unexpected(&["`model`", "`subsystem`"]);
                };
                Ok(DeltaOp::Replace { target, substitute })
            }
            Tok::Kw(Keyword::Modify) => {
                self.advance();
                self.expect_kw(Keyword::Subsystem)?;
                let (name, _) = self.ident()?;
                let ops = self.op_block()?;
                Ok(DeltaOp::ModifySubsystem { name, ops })
            }
            _ => self.unexpected(&["`add`", "`remove`", "`replace`", "`modify`", "`}`"]),
        }
    }

    fn add_op(&mut self) -> PResult<DeltaOp> {
        if let Some(direction) = self.direction() {
            let (name, _) = self.ident()?;
            return Ok(DeltaOp::Add(AddOp::Port { direction, name }));
        }
        match self.peek().tok {
            Tok::Kw(Keyword::Mref) => {
                self.advance();
                let (name, _) = self.ident()?;
                self.expect(Tok::Colon)?;
                let (model, _) = self.ident()?;
                Ok(DeltaOp::Add(AddOp::ModelRef { name, model }))
            }
            Tok::Kw(Keyword::Subsystem) => {
                self.advance();
                let (name, _) = self.ident()?;
                let body = self.body(&format!("subsystem `{name}`"))?;
                Ok(DeltaOp::Add(AddOp::Subsystem { name, body }))
            }
            Tok::Kw(Keyword::Connect) => {
                self.advance();
                Ok(DeltaOp::Add(AddOp::Connection(self.connection()?)))
            }
            _ => self.unexpected(&["`in`", "`out`", "`mref`", "`subsystem`", "`connect`"]),
        }
    }

    fn selector(&mut self) -> PResult<ElementSelector> {
        if let Some(direction) = self.direction() {
            let (name, _) = self.ident()?;
            return Ok(ElementSelector::Port { direction, name });
        }
        if self.eat(&Tok::Kw(Keyword::Block)) {
            return Ok(ElementSelector::Block(self.ident()?.0));
        }
        if self.eat(&Tok::Kw(Keyword::Connect)) {
            return Ok(ElementSelector::Connection(self.connection()?));
        }
        self.unexpected(&["`in`", "`out`", "`block`", "`connect`"])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "
        // core braking system
        model BrakingSystem {
            in brake
            out brakePressure1, brakePressure2, brakePressure3, brakePressure4
            mref brakefunction : PressureCalculator
            connect brake -> brakefunction.brake
            connect brakefunction.brakePressure1 -> brakePressure1
            connect brakefunction.brakePressure2 -> brakePressure2
            connect brakefunction.brakePressure3 -> brakePressure3
            connect brakefunction.brakePressure4 -> brakePressure4
        }
    ";

    const DABS: &str = "
        delta DABS {
            aoc !after DTW_post
            modify model BrakingSystem {
                add in wheelSpeed1
                add in wheelSpeed2
                add in wheelSpeed3
                add in wheelSpeed4
                replace brakefunction with model ABS as brakefunction
                add connect wheelSpeed1 -> brakefunction.wheelSpeed1
                add connect wheelSpeed2 -> brakefunction.wheelSpeed2
                add connect wheelSpeed3 -> brakefunction.wheelSpeed3
                add connect wheelSpeed4 -> brakefunction.wheelSpeed4
            }
        }
    ";

    fn syntax_at(err: ParseError) -> (u32, u32) {
        assert!(matches!(err.kind, ParseErrorKind::Syntax { .. }), "{err}");
        (err.pos.line, err.pos.col)
    }

    #[test]
    fn braking_system_structure() {
        let lib = parse_library(FIG2).unwrap();
        let bs = &lib.get("BrakingSystem").unwrap().body;
        assert_eq!(bs.in_ports, ["brake"]);
        assert_eq!(bs.out_ports.len(), 4);
        assert_eq!(bs.blocks, [Block::model_ref("brakefunction", "PressureCalculator")]);
        assert_eq!(bs.connections.len(), 5);
        assert_eq!(
            bs.connections[0],
            Connection::new(Endpoint::boundary("brake"), Endpoint::child("brakefunction", "brake"))
        );
    }

    #[test]
    fn empty_model_and_empty_source() {
        let lib = parse_library("model Empty { }").unwrap();
        assert_eq!(lib.get("Empty").unwrap().body, Context::default());
        assert!(parse_library("  // nothing\n").unwrap().is_empty());
    }

    #[test]
    fn duplicate_port_in_model() {
        let err = parse_library("model X { in a in a }").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 19 });
        assert!(matches!(err.kind, ParseErrorKind::DuplicateName { ref name, .. } if name == "a"));
    }

    #[test]
    fn duplicate_across_kinds_and_nested() {
        assert!(matches!(
            parse_library("model X { out a subsystem a { } }").unwrap_err().kind,
            ParseErrorKind::DuplicateName { .. }
        ));
        assert!(matches!(
            parse_library("model X { subsystem s { in q mref q : Y } }").unwrap_err().kind,
            ParseErrorKind::DuplicateName { ref context, .. } if context == "subsystem `s`"
        ));
        // the same name in different contexts is fine
        parse_library("model X { in q subsystem s { in q } }").unwrap();
    }

    #[test]
    fn duplicate_model() {
        let err = parse_library("model A { } model A { }").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateModel("A".into()));
    }

    #[test]
    fn dabs_shape() {
        let d = parse_delta(DABS).unwrap();
        assert_eq!(d.name, "DABS");
        assert_eq!(d.aoc, AocExpr::not(AocExpr::after("DTW_post")));
        assert_eq!(d.modifications.len(), 1);
        let ops = &d.modifications[0].ops;
        let count = |f: fn(&DeltaOp) -> bool| ops.iter().filter(|o| f(o)).count();
        assert_eq!(count(|o| matches!(o, DeltaOp::Add(AddOp::Port { direction: Direction::In, .. }))), 4);
        assert_eq!(count(|o| matches!(o, DeltaOp::Add(AddOp::Connection(_)))), 4);
        assert_eq!(count(|o| matches!(o, DeltaOp::Replace { .. })), 1);
        assert_eq!(
            ops[4],
            DeltaOp::Replace {
                target: "brakefunction".into(),
                substitute: Substitute::Model { model: "ABS".into(), block_name: "brakefunction".into() },
            }
        );
    }

    #[test]
    fn empty_modification_defaults_to_true() {
        let d = parse_delta("delta D { modify model M { } }").unwrap();
        assert_eq!(d.aoc, AocExpr::True);
        assert_eq!(d.modifications, [ModifyModel { target_model: "M".into(), ops: vec![] }]);
    }

    #[test]
    fn aoc_clauses_are_conjoined() {
        let d = parse_delta("delta D { aoc after A aoc after B modify model M { } }").unwrap();
        assert_eq!(d.aoc, AocExpr::and(AocExpr::after("A"), AocExpr::after("B")));
    }

    #[test]
    fn aoc_precedence() {
        let d = parse_delta("delta D { aoc after A && after B || after C modify model M { } }").unwrap();
        assert_eq!(d.aoc, AocExpr::or(AocExpr::and(AocExpr::after("A"), AocExpr::after("B")), AocExpr::after("C")));
        let d = parse_delta("delta D { aoc !(after A || after B) && !after C modify model M { } }").unwrap();
        assert_eq!(
            d.aoc,
            AocExpr::and(
                AocExpr::not(AocExpr::or(AocExpr::after("A"), AocExpr::after("B"))),
                AocExpr::not(AocExpr::after("C"))
            )
        );
    }

    #[test]
    fn delta_without_modify_block() {
        let err = parse_deltas("delta D { aoc after X }").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyDelta("D".into()));
    }

    #[test]
    fn aoc_after_modify_is_rejected() {
        let err = parse_deltas("delta D { modify model M { } aoc after X }").unwrap_err();
        assert_eq!(syntax_at(err), (1, 30));
    }

    #[test]
    fn all_operation_forms() {
        let src = "
            delta Everything {
                modify model M {
                    add out o
                    add mref r : Other
                    add subsystem s { in a out b connect a -> b }
                    add connect a -> r.x
                    remove weak in w
                    remove block b
                    remove connect r.y -> o
                    replace r with subsystem r2 { in x }
                    modify subsystem s {
                        modify subsystem inner { remove out z }
                    }
                }
                modify model M { }
            }
        ";
        let d = parse_delta(src).unwrap();
        assert_eq!(d.modifications.len(), 2);
        let ops = &d.modifications[0].ops;
        assert_eq!(ops.len(), 9);
        assert_eq!(
            ops[4],
            DeltaOp::Remove {
                selector: ElementSelector::Port { direction: Direction::In, name: "w".into() },
                weak: true,
            }
        );
        assert!(matches!(&ops[8], DeltaOp::ModifySubsystem { name, ops } if name == "s" && ops.len() == 1));
    }

    #[test]
    fn multiple_deltas_per_file() {
        let ds = parse_deltas("delta A { modify model M { } } delta B { modify model M { } }").unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(parse_delta("").unwrap_err().kind, ParseErrorKind::DeltaCount(0));
        let dup = parse_deltas("delta A { modify model M { } } delta A { modify model M { } }").unwrap_err();
        assert_eq!(dup.kind, ParseErrorKind::DuplicateDelta("A".into()));
    }

    #[test]
    fn products() {
        let ps = parse_products(
            "product BSwithABS { deltas DABS }
             product BasicBikeBS { deltas DTW_pre, DTW, DTW_post }
             product Core { deltas }",
        )
        .unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[0], ProductConfiguration::new("BSwithABS", ["DABS"]));
        assert_eq!(ps[1].deltas.len(), 3);
        assert!(ps[2].deltas.is_empty());
        assert_eq!(ps[2].name, "Core");
    }

    #[test]
    fn product_errors() {
        let dup = parse_products("product A { deltas } product A { deltas X }").unwrap_err();
        assert_eq!(dup.kind, ParseErrorKind::DuplicateProductName("A".into()));
        let twice = parse_products("product A { deltas X, X }").unwrap_err();
        assert!(matches!(twice.kind, ParseErrorKind::DuplicateDeltaInProduct { .. }));
        assert_eq!(syntax_at(parse_products("product A { deltas X, }").unwrap_err()), (1, 23));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        assert_eq!(syntax_at(parse_library("model { }").unwrap_err()), (1, 7));
        assert_eq!(syntax_at(parse_library("model M {\n  connect a ->\n}").unwrap_err()), (3, 1));
        assert_eq!(syntax_at(parse_library("model M { in model }").unwrap_err()), (1, 14));
        assert_eq!(syntax_at(parse_library("model M {").unwrap_err()), (1, 10));
        assert_eq!(syntax_at(parse_deltas("delta D { modify model M { add } }").unwrap_err()), (1, 32));
        let err = parse_library("model M { wire a }").unwrap_err();
        assert_eq!(
            err.to_string(),
            "1:11: expected `in` or `out` or `mref` or `subsystem` or `connect` or `}`, found identifier `wire`"
        );
    }

    #[test]
    fn source_index_locates_declarations() {
        let (_, index) = parse_library_indexed(FIG2).unwrap();
        let loc = |element: Option<&str>| Location {
            model: "BrakingSystem".into(),
            path: vec![],
            element: element.map(str::to_string),
        };
        assert_eq!(index.position_of(&loc(None)), Some(Pos { line: 3, col: 15 }));
        assert_eq!(index.position_of(&loc(Some("brakePressure2"))), Some(Pos { line: 5, col: 33 }));
        assert_eq!(index.position_of(&loc(Some("brake -> brakefunction.brake"))), Some(Pos { line: 7, col: 13 }));
        // unknown elements fall back to the model
        assert_eq!(index.position_of(&loc(Some("brakefunction.zzz"))), Some(Pos { line: 3, col: 15 }));
    }
}
