//! Recursive-descent parser for the formula grammar.
//!
//! Variables `[a-z][a-zA-Z0-9_]*`, derivatives `x''`, `D(e)`, `D3(e)`,
//! rationals `p/q`, operators `+ - * ^`, relations `= != < <= > >=`,
//! connectives `~ & |`, quantifiers `E v.` and `A v, w.`, constants `true`
//! and `false`. Relations may be chained: `0 < x < 1`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::ast::{to_algebraic, Atom, Formula, LDFormula, LFormula, Rel};
use crate::algebra::diff::{derive_n, AlgPoly, DiffPoly, JetVar};
use crate::algebra::rat::Q;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Deriv(u32),
    Exists,
    Forall,
    Apos,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
    Comma,
    Tilde,
    Amp,
    Bar,
    Rel(Rel),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut end = (1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        let mut take = 1;
        let tok = if c.is_ascii_lowercase() {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            take = j - i;
            Tok::Ident(chars[i..j].iter().collect())
        } else if c.is_ascii_digit() {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            take = j - i;
            let s: String = chars[i..j].iter().collect();
            Tok::Num(s.parse().unwrap())
        } else if c == 'D' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            take = j - i;
            let k = if j > i + 1 {
                let s: String = chars[i + 1..j].iter().collect();
                s.parse::<u32>().map_err(|_| syntax(line, col, "derivative order too large"))?
            } else {
                1
            };
            Tok::Deriv(k)
        } else {
            match c {
                'E' => Tok::Exists,
                'A' => Tok::Forall,
                '\'' => Tok::Apos,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '=' => Tok::Rel(Rel::Eq),
                '!' if chars.get(i + 1) == Some(&'=') => {
                    take = 2;
                    Tok::Rel(Rel::Ne)
                }
                '<' if chars.get(i + 1) == Some(&'=') => {
                    take = 2;
                    Tok::Rel(Rel::Le)
                }
                '>' if chars.get(i + 1) == Some(&'=') => {
                    take = 2;
                    Tok::Rel(Rel::Ge)
                }
                '<' => Tok::Rel(Rel::Lt),
                '>' => Tok::Rel(Rel::Gt),
                _ => return Err(syntax(line, col, &format!("unexpected character `{c}`"))),
            }
        };
        out.push(Token { tok, line: start.0, col: start.1 });
        i += take;
        col += take;
        end = (line, col);
    }
    out.push(Token { tok: Tok::Eof, line: end.0, col: end.1 });
    Ok(out)
}

fn syntax(line: usize, column: usize, msg: &str) -> Error {
    Error::Syntax { line, column, message: msg.to_string() }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: &str) -> Error {
        let t = &self.toks[self.pos];
        let what = match &t.tok {
            Tok::Eof => "unexpected end of input".to_string(),
            _ => msg.to_string(),
        };
        syntax(t.line, t.col, &what)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<LDFormula> {
        match self.peek() {
            Tok::Exists | Tok::Forall => self.quantified(),
            _ => self.disjunction(),
        }
    }

    fn quantified(&mut self) -> Result<LDFormula> {
        let is_exists = self.bump() == Tok::Exists;
        let mut vars = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(name) => {
                    self.bump();
                    vars.push(name);
                }
                _ => return Err(self.err("expected quantified variable")),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
                continue;
            }
            break;
        }
        self.expect(Tok::Dot, "`.` after quantified variables")?;
        let body = self.formula()?;
        let names: std::collections::BTreeSet<String> = body.poly_vars().into_iter().map(|v| v.name).collect();
        for v in &vars {
            if !names.contains(v) {
                return Err(Error::User(format!("unbound quantifier variable `{v}`: it does not occur in its scope")));
            }
        }
        Ok(if is_exists {
            Formula::Exists(vars, Box::new(body))
        } else {
            Formula::Forall(vars, Box::new(body))
        })
    }

    fn disjunction(&mut self) -> Result<LDFormula> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<LDFormula> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<LDFormula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::Exists | Tok::Forall => self.quantified(),
            Tok::Ident(ref s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(ref s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                let save = self.pos;
                self.bump();
                if let Ok(f) = self.formula() {
                    if *self.peek() == Tok::RParen {
                        self.bump();
                        if !self.continues_expression() {
                            return Ok(f);
                        }
                    }
                }
                self.pos = save;
                self.atom()
            }
            _ => self.atom(),
        }
    }

    fn continues_expression(&self) -> bool {
        matches!(self.peek(), Tok::Rel(_) | Tok::Plus | Tok::Minus | Tok::Star | Tok::Caret | Tok::Slash)
    }

    fn atom(&mut self) -> Result<LDFormula> {
        let first = self.expr()?;
        let mut sides = vec![first];
        let mut rels = Vec::new();
        while let Tok::Rel(r) = self.peek().clone() {
            self.bump();
            rels.push(r);
            sides.push(self.expr()?);
        }
        if rels.is_empty() {
            return Err(self.err("expected a relation (= != < <= > >=)"));
        }
        let atoms: Vec<LDFormula> = rels
            .iter()
            .enumerate()
            .map(|(i, r)| Formula::Atom(Atom::new(sides[i].clone(), *r, sides[i + 1].clone())))
            .collect();
        Ok(if atoms.len() == 1 { atoms.into_iter().next().unwrap() } else { Formula::And(atoms) })
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump() {
                Tok::Num(n) => {
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => {
                    self.pos -= 1;
                    Err(self.err("expected a natural-number exponent"))
                }
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<DiffPoly> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Num(d) if !d.is_zero() => {
                            self.bump();
                            Ok(DiffPoly::constant(Q::new(n, d)))
                        }
                        _ => Err(self.err("expected a nonzero denominator")),
                    }
                } else {
                    Ok(DiffPoly::constant(Q::from_integer(n)))
                }
            }
            Tok::Ident(name) => {
                if name == "true" || name == "false" {
                    return Err(self.err("expected an expression"));
                }
                self.bump();
                let mut k = 0;
                while *self.peek() == Tok::Apos {
                    self.bump();
                    k += 1;
                }
                Ok(DiffPoly::var(JetVar::new(&name, k)))
            }
            Tok::Deriv(k) => {
                self.bump();
                self.expect(Tok::LParen, "`(` after D")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(derive_n(&e, k))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.err("expected an expression")),
        }
    }
}

/// Parses a formula of the differential dialect.
pub fn parse(text: &str) -> Result<LDFormula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f.unshadow())
}

/// Parses a formula of the algebraic dialect (no derivatives).
pub fn parse_algebraic(text: &str) -> Result<LFormula> {
    let f = parse(text)?;
    to_algebraic(&f).ok_or_else(|| Error::User("derivatives are not allowed in an algebraic formula".into()))
}

/// Parses a differential polynomial expression.
pub fn parse_poly(text: &str) -> Result<DiffPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a polynomial without derivatives.
pub fn parse_alg_poly(text: &str) -> Result<AlgPoly> {
    let p = parse_poly(text)?;
    if p.vars().iter().any(|v| v.order > 0) {
        return Err(Error::User("derivatives are not allowed in an algebraic polynomial".into()));
    }
    Ok(p.map_vars(|v| v.name.clone()))
}

/// Parses a comma-separated list of expressions.
pub fn parse_poly_list(text: &str) -> Result<Vec<DiffPoly>> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = vec![p.expr()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        out.push(p.expr()?);
    }
    if *p.peek() != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}
