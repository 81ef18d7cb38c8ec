use std::fmt;

use super::{ParseError, ParseErrorKind, Pos};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Keyword {
    Model,
    In,
    Out,
    Mref,
    Subsystem,
    Connect,
    Delta,
    Aoc,
    After,
    Modify,
    Add,
    Remove,
    Weak,
    Block,
    Replace,
    With,
    As,
    Product,
    Deltas,
}

impl Keyword {
    const ALL: [Keyword; 19] = [
        Keyword::Model,
        Keyword::In,
        Keyword::Out,
        Keyword::Mref,
        Keyword::Subsystem,
        Keyword::Connect,
        Keyword::Delta,
        Keyword::Aoc,
        Keyword::After,
        Keyword::Modify,
        Keyword::Add,
        Keyword::Remove,
        Keyword::Weak,
        Keyword::Block,
        Keyword::Replace,
        Keyword::With,
        Keyword::As,
        Keyword::Product,
        Keyword::Deltas,
    ];

    pub(crate) fn as_str(self) -> &'static str {
        match self {
            Keyword::Model => "model",
            Keyword::In => "in",
            Keyword::Out => "out",
            Keyword::Mref => "mref",
            Keyword::Subsystem => "subsystem",
            Keyword::Connect => "connect",
            Keyword::Delta => "delta",
            Keyword::Aoc => "aoc",
            Keyword::After => "after",
            Keyword::Modify => "modify",
            Keyword::Add => "add",
            Keyword::Remove => "remove",
            Keyword::Weak => "weak",
            Keyword::Block => "block",
            Keyword::Replace => "replace",
            Keyword::With => "with",
            Keyword::As => "as",
            Keyword::Product => "product",
            Keyword::Deltas => "deltas",
        }
    }

    fn lookup(word: &str) -> Option<Keyword> {
        Keyword::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

/// True if `word` is reserved and cannot be used as a name.
pub fn is_keyword(word: &str) -> bool {
    Keyword::lookup(word).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Kw(Keyword),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Arrow,
    Bang,
    AndAnd,
    OrOr,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::Kw(kw) => write!(f, "`{}`", kw.as_str()),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::AndAnd => f.write_str("`&&`"),
            Tok::OrOr => f.write_str("`||`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let single = |tok| Token { tok, pos };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while let Some(&c) = chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        bump!();
                    }
                } else {
                    return Err(ParseError::new(pos, ParseErrorKind::InvalidCharacter('/')));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let tok = match Keyword::lookup(&word) {
                    Some(kw) => Tok::Kw(kw),
                    None => Tok::Ident(word),
                };
                tokens.push(Token { tok, pos });
            }
            '-' | '&' | '|' => {
                bump!();
                let (second, tok) = match c {
                    '-' => ('>', Tok::Arrow),
                    '&' => ('&', Tok::AndAnd),
                    _ => ('|', Tok::OrOr),
                };
                if chars.peek() == Some(&second) {
                    bump!();
                    tokens.push(single(tok));
                } else {
                    return Err(ParseError::new(pos, ParseErrorKind::InvalidCharacter(c)));
                }
            }
            _ => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '.' => Tok::Dot,
                    '!' => Tok::Bang,
                    other => return Err(ParseError::new(pos, ParseErrorKind::InvalidCharacter(other))),
                };
                bump!();
                tokens.push(single(tok));
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(tokens)
}
