//! Recursive-descent parser for `.stt` files.

use crate::tope::{Cube, CubeTerm, Tope};

use super::ast::*;
use super::lex::{lex, Tok, Token};
use super::SyntaxError;

pub fn parse(src: &str) -> Result<Vec<Decl>, SyntaxError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut decls = Vec::new();
    while !p.at_end() {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

/// Parses a single type expression (used by tests and tools).
pub fn parse_type(src: &str) -> Result<TypeExpr, SyntaxError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let t = p.ty()?;
    p.expect_end()?;
    Ok(t)
}

/// Parses a single term expression.
pub fn parse_term(src: &str) -> Result<TermExpr, SyntaxError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, expected: &[&str]) -> SyntaxError {
        let (line, col) = self.here();
        SyntaxError {
            line,
            col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self
                .peek()
                .map(|t| t.describe())
                .unwrap_or_else(|| "end of input".into()),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.err(&[what]))
        }
    }

    fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(&["end of input"]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(&[what])),
        }
    }

    fn binder_ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        let (line, col) = self.here();
        let s = self.ident(what)?;
        if is_reserved(&s) {
            return Err(SyntaxError {
                line,
                col,
                expected: vec![what.into()],
                found: format!("reserved word `{s}`"),
            });
        }
        Ok(s)
    }

    // ---- declarations ----

    fn decl(&mut self) -> Result<Decl, SyntaxError> {
        let kw = self.ident("`type`, `term` or `eq`")?;
        let name = self.binder_ident("a declaration name")?;
        let ctx = if self.peek() == Some(&Tok::LBracket) {
            self.tri_context()?
        } else {
            TriContext::empty()
        };
        let body = match kw.as_str() {
            "type" => {
                self.expect(Tok::Assign, "`:=`")?;
                DeclBody::Type(self.ty()?)
            }
            "term" => {
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                self.expect(Tok::Assign, "`:=`")?;
                DeclBody::Term {
                    ty,
                    term: self.term()?,
                }
            }
            "eq" => {
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                self.expect(Tok::Assign, "`:=`")?;
                let lhs = self.term()?;
                self.expect(Tok::EqEq, "`==`")?;
                let rhs = self.term()?;
                DeclBody::Eq { ty, lhs, rhs }
            }
            _ => {
                self.pos -= 2;
                return Err(self.err(&["`type`", "`term`", "`eq`"]));
            }
        };
        Ok(Decl { name, ctx, body })
    }

    fn tri_context(&mut self) -> Result<TriContext, SyntaxError> {
        self.expect(Tok::LBracket, "`[`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut dims = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            dims.push(self.binder_ident("a cube variable")?);
        }
        self.expect(Tok::RBrace, "`}`")?;
        let (line, col) = self.here();
        let cube = Cube::new(dims).map_err(|e| SyntaxError {
            line,
            col,
            expected: vec!["distinct cube variables".into()],
            found: e.to_string(),
        })?;
        self.expect(Tok::Bar, "`|`")?;
        let tope = self.tope()?;
        self.expect(Tok::Bar, "`|`")?;
        let mut vars = Vec::new();
        if self.peek() != Some(&Tok::RBracket) {
            loop {
                let x = self.binder_ident("a variable name")?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                vars.push((x, ty));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(TriContext { cube, tope, vars })
    }

    // ---- topes ----

    fn tope(&mut self) -> Result<Tope, SyntaxError> {
        let mut t = self.tope_and()?;
        while self.eat(&Tok::OrOr) {
            t = t.or(self.tope_and()?);
        }
        Ok(t)
    }

    fn tope_and(&mut self) -> Result<Tope, SyntaxError> {
        let mut t = self.tope_atom()?;
        while self.eat(&Tok::AndAnd) {
            t = t.and(self.tope_atom()?);
        }
        Ok(t)
    }

    fn tope_atom(&mut self) -> Result<Tope, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "TOP" => {
                self.pos += 1;
                Ok(Tope::Top)
            }
            Some(Tok::Ident(s)) if s == "BOT" => {
                self.pos += 1;
                Ok(Tope::Bot)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.tope()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(_)) | Some(Tok::Zero) | Some(Tok::One) => {
                let a = self.cube_term()?;
                let rel = self.bump();
                let b = self.cube_term()?;
                match rel {
                    Some(Tok::Le) => Ok(Tope::Le(a, b)),
                    Some(Tok::EqEq) => Ok(Tope::Eq(a, b)),
                    _ => {
                        self.pos -= 1;
                        Err(self.err(&["`<=`", "`==`"]))
                    }
                }
            }
            _ => Err(self.err(&["a tope"])),
        }
    }

    fn cube_term(&mut self) -> Result<CubeTerm, SyntaxError> {
        match self.bump() {
            Some(Tok::Zero) => Ok(CubeTerm::Zero),
            Some(Tok::One) => Ok(CubeTerm::One),
            Some(Tok::Ident(s)) => Ok(CubeTerm::Var(s)),
            _ => {
                self.pos -= 1;
                Err(self.err(&["a cube variable", "`0`", "`1`"]))
            }
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<TypeExpr, SyntaxError> {
        // level 1: non-dependent arrows, right associative
        let lhs = self.ty_prod()?;
        if self.eat(&Tok::Arrow) {
            let cod = self.ty()?;
            return Ok(TypeExpr::Pi {
                var: "_".into(),
                dom: Box::new(lhs),
                cod: Box::new(cod),
            });
        }
        Ok(lhs)
    }

    fn ty_prod(&mut self) -> Result<TypeExpr, SyntaxError> {
        // level 2: non-dependent products, right associative
        let lhs = self.ty_atom()?;
        if self.eat(&Tok::Star) {
            let snd = self.ty_prod()?;
            return Ok(TypeExpr::Sigma {
                var: "_".into(),
                fst: Box::new(lhs),
                snd: Box::new(snd),
            });
        }
        Ok(lhs)
    }

    fn ty_atom(&mut self) -> Result<TypeExpr, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                if let Some(b) = BaseTy::parse(s) {
                    self.pos += 1;
                    Ok(TypeExpr::Base(b))
                } else {
                    Err(self.err(&["`Unit`", "`Bool`", "`Three`"]))
                }
            }
            Some(Tok::LParen) => {
                // `(x : A) -> B`, `(x : A) * B`, or a grouped type
                if matches!(self.peek2(), Some(Tok::Ident(s)) if !is_reserved(s))
                    && self.tokens.get(self.pos + 2).map(|t| &t.tok) == Some(&Tok::Colon)
                {
                    self.pos += 1;
                    let var = self.binder_ident("a variable")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let dom = self.ty()?;
                    self.expect(Tok::RParen, "`)`")?;
                    if self.eat(&Tok::Arrow) {
                        let cod = self.ty()?;
                        Ok(TypeExpr::Pi {
                            var,
                            dom: Box::new(dom),
                            cod: Box::new(cod),
                        })
                    } else if self.eat(&Tok::Star) {
                        let snd = self.ty()?;
                        Ok(TypeExpr::Sigma {
                            var,
                            fst: Box::new(dom),
                            snd: Box::new(snd),
                        })
                    } else {
                        Err(self.err(&["`->`", "`*`"]))
                    }
                } else {
                    self.pos += 1;
                    let t = self.ty()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(t)
                }
            }
            Some(Tok::LBrace) => {
                // `{t : I | phi}` reflected shape, or `{t : I | psi} -> A`
                self.pos += 1;
                let var = self.binder_ident("a cube variable")?;
                self.expect(Tok::Colon, "`:`")?;
                self.interval_keyword()?;
                self.expect(Tok::Bar, "`|`")?;
                let tope = self.tope()?;
                self.expect(Tok::RBrace, "`}`")?;
                if self.eat(&Tok::Arrow) {
                    // sugar: a shape-indexed product is an extension type
                    // with empty side condition
                    let cod = self.ty()?;
                    Ok(TypeExpr::Ext {
                        var,
                        upper: tope,
                        lower: Tope::Bot,
                        ty: Box::new(cod),
                        boundary: Box::new(TermExpr::EmptySection),
                    })
                } else {
                    Ok(TypeExpr::Shape { var, tope })
                }
            }
            Some(Tok::Lt) => {
                // `<Pi_{t : I | psi} A |^ phi a>`
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Ident(s)) if s == "Pi_" => {
                        self.pos += 1;
                    }
                    _ => return Err(self.err(&["`Pi_`"])),
                }
                self.expect(Tok::LBrace, "`{`")?;
                let var = self.binder_ident("a cube variable")?;
                self.expect(Tok::Colon, "`:`")?;
                self.interval_keyword()?;
                self.expect(Tok::Bar, "`|`")?;
                let upper = self.tope()?;
                self.expect(Tok::RBrace, "`}`")?;
                let ty = self.ty_atom()?;
                self.expect(Tok::BarCaret, "`|^`")?;
                let lower = self.tope_atom()?;
                let boundary = self.term_atom()?;
                self.expect(Tok::Gt, "`>`")?;
                Ok(TypeExpr::Ext {
                    var,
                    upper,
                    lower,
                    ty: Box::new(ty),
                    boundary: Box::new(boundary),
                })
            }
            _ => Err(self.err(&["a type"])),
        }
    }

    fn interval_keyword(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "I" => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&["`I`"])),
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<TermExpr, SyntaxError> {
        match self.peek() {
            Some(Tok::Backslash) => {
                self.pos += 1;
                let var = self.binder_ident("a cube variable")?;
                self.expect(Tok::Caret, "`^`")?;
                self.expect(Tok::LBrace, "`{`")?;
                self.interval_keyword()?;
                self.expect(Tok::Bar, "`|`")?;
                let shape = self.tope()?;
                self.expect(Tok::RBrace, "`}`")?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(TermExpr::ExtLam {
                    var,
                    shape,
                    body: Box::new(body),
                })
            }
            Some(Tok::Ident(s)) if s == "fn" => {
                self.pos += 1;
                let var = self.binder_ident("a variable")?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(TermExpr::Lam {
                    var,
                    body: Box::new(body),
                })
            }
            _ => self.term_app(),
        }
    }

    fn term_app(&mut self) -> Result<TermExpr, SyntaxError> {
        let mut head = self.term_atom()?;
        while self.starts_atom() {
            let arg = self.term_atom()?;
            head = TermExpr::app(head, arg);
        }
        Ok(head)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(s)) if s != "fn" && !matches!(s.as_str(), "type" | "term" | "eq")
        ) || matches!(
            self.peek(),
            Some(Tok::Zero) | Some(Tok::One) | Some(Tok::LParen)
        )
    }

    fn term_atom(&mut self) -> Result<TermExpr, SyntaxError> {
        match self.peek() {
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(TermExpr::Endpoint(false))
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(TermExpr::Endpoint(true))
            }
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                match s.as_str() {
                    "empty" => {
                        self.pos += 1;
                        Ok(TermExpr::EmptySection)
                    }
                    "fst" => {
                        self.pos += 1;
                        Ok(TermExpr::Fst(Box::new(self.term_atom()?)))
                    }
                    "snd" => {
                        self.pos += 1;
                        Ok(TermExpr::Snd(Box::new(self.term_atom()?)))
                    }
                    _ => {
                        if let Some(c) = Constant::parse(&s) {
                            self.pos += 1;
                            Ok(TermExpr::Const(c))
                        } else if is_reserved(&s) {
                            Err(self.err(&["a term"]))
                        } else {
                            self.pos += 1;
                            Ok(TermExpr::Var(s))
                        }
                    }
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.pos += 1;
                        let snd = self.term()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(TermExpr::Pair {
                            fst: Box::new(t),
                            snd: Box::new(snd),
                        })
                    }
                    Some(Tok::Colon) => {
                        self.pos += 1;
                        let ty = self.ty()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(TermExpr::Ascribe {
                            term: Box::new(t),
                            ty: Box::new(ty),
                        })
                    }
                    _ => {
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(t)
                    }
                }
            }
            _ => Err(self.err(&["a term"])),
        }
    }
}
