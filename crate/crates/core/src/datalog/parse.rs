//! Surface syntax.
//!
//! ```text
//! program  := (rule | comment)*
//! rule     := atom ":-" literal ("," literal)* "." | atom "."
//! literal  := ["not" | "!"] atom
//! atom     := predicate "(" term ("," term)* ")"
//! fact     := atom ["@" ident] "."          (database files)
//! comment  := "%" to end of line
//! ```
//!
//! Identifiers are runs of letters, digits, `_` and `'`. A term starting with
//! an uppercase letter or `_` is a variable; anything else is a constant.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use super::ast::{Atom, Database, GroundAtom, Literal, Program, Rule, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Turnstile,
    Bang,
    At,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Turnstile => "`:-`".into(),
            Tok::Bang => "`!`".into(),
            Tok::At => "`@`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(source: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '!' => Tok::Bang,
            '@' => Tok::At,
            ':' => {
                bump(&mut chars);
                if chars.peek() != Some(&'-') {
                    return Err(syntax(l, col, "expected `:-`"));
                }
                Tok::Turnstile
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    bump(&mut chars);
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: l,
                    column: col,
                });
                continue;
            }
            other => return Err(syntax(l, col, &format!("unexpected character `{other}`"))),
        };
        bump(&mut chars);
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(source: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(source)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        let s = &self.toks[self.pos];
        syntax(
            s.line,
            s.column,
            &format!("expected {expected}, found {}", s.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Tok::Ident(_) => match self.advance() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.error(what)),
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn atom(&mut self) -> Result<Atom> {
        let predicate = self.ident("a predicate name")?;
        self.expect(Tok::LParen)?;
        let mut args = vec![Term::from_ident(&self.ident("a term")?)];
        while *self.peek() == Tok::Comma {
            self.advance();
            args.push(Term::from_ident(&self.ident("a term")?));
        }
        self.expect(Tok::RParen)?;
        Ok(Atom::new(predicate, args))
    }

    fn literal(&mut self) -> Result<Literal> {
        let negated = match (self.peek(), self.peek_at(1)) {
            (Tok::Bang, _) => {
                self.advance();
                true
            }
            (Tok::Ident(kw), Tok::Ident(_)) if kw == "not" => {
                self.advance();
                true
            }
            _ => false,
        };
        Ok(Literal {
            negated,
            atom: self.atom()?,
        })
    }

    fn rule(&mut self) -> Result<Rule> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if *self.peek() == Tok::Turnstile {
            self.advance();
            body.push(self.literal()?);
            while *self.peek() == Tok::Comma {
                self.advance();
                body.push(self.literal()?);
            }
        }
        self.expect(Tok::Dot)?;
        Ok(Rule::new(head, body))
    }

    fn fact(&mut self) -> Result<(Atom, Option<String>)> {
        let atom = self.atom()?;
        let annotation = if *self.peek() == Tok::At {
            self.advance();
            Some(self.ident("an annotation name")?)
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        Ok((atom, annotation))
    }
}

/// Parses and validates a program. Rules are numbered from 1 in file order.
pub fn parse_program(source: &str) -> Result<Program> {
    let mut p = Parser::new(source)?;
    let mut rules = Vec::new();
    while !p.at_eof() {
        rules.push(p.rule()?);
    }
    Program::new(rules)
}

/// Parses a database file of ground facts with optional `@name` annotations.
pub fn parse_database(source: &str) -> Result<Database> {
    let mut p = Parser::new(source)?;
    let mut db = Database::new();
    while !p.at_eof() {
        let (atom, annotation) = p.fact()?;
        let fact = atom
            .to_ground()
            .ok_or_else(|| Error::NonGroundFact(atom.to_string()))?;
        db.insert(fact, annotation)?;
    }
    Ok(db)
}

/// Parses a single ground atom such as `3Hop(a,a)`, as given on a command
/// line.
pub fn parse_ground_atom(source: &str) -> Result<GroundAtom> {
    let mut p = Parser::new(source)?;
    let atom = p.atom()?;
    if *p.peek() == Tok::Dot {
        p.advance();
    }
    if !p.at_eof() {
        return Err(p.error("end of input"));
    }
    atom.to_ground()
        .ok_or_else(|| Error::NonGroundFact(atom.to_string()))
}
