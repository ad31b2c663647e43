//! Text input for elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | juxtaposition) factor)*
//! factor := ['-'] atom ['^' ['-'] INT]
//! atom   := 'p' INT | 'q' INT | 'c' | 'I' | INT ['/' INT] | '(' expr ')'
//! ```
//!
//! Products keep their source order; `q1 p1` and `p1 q1` are different
//! elements. Only generators, `c` and parenthesised expressions may be
//! raised to a power, and only generators may take a negative exponent.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{normal_order_word, AlgebraContext, Element, GeneratorId, Kind, Word};
use crate::error::{Error, Result};
use crate::scalar::{CSeries, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rational(Rational),
    C,
    Identity,
    Gen(GeneratorId),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Mul(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Largest generator index mentioned, or 0 if there are none.
    pub fn max_index(&self) -> u32 {
        match self {
            Expr::Rational(_) | Expr::C | Expr::Identity => 0,
            Expr::Gen(g) => g.index,
            Expr::Neg(e) | Expr::Pow(e, _) => e.max_index(),
            Expr::Mul(a, b) | Expr::Add(a, b) => a.max_index().max(b.max_index()),
        }
    }

    fn check_indices(&self, ctx: &AlgebraContext) -> Result<()> {
        match self {
            Expr::Rational(_) | Expr::C | Expr::Identity => Ok(()),
            Expr::Gen(g) if g.index > ctx.n_pairs() => Err(Error::IndexOutOfRange {
                index: g.index,
                n_pairs: ctx.n_pairs(),
            }),
            Expr::Gen(_) => Ok(()),
            Expr::Neg(e) | Expr::Pow(e, _) => e.check_indices(ctx),
            Expr::Mul(a, b) | Expr::Add(a, b) => {
                a.check_indices(ctx)?;
                b.check_indices(ctx)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) => write!(f, "{r}"),
            Expr::C => f.write_str("c"),
            Expr::Identity => f.write_str("I"),
            Expr::Gen(g) => write!(f, "{g}"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Pow(e, k) => match **e {
                Expr::Gen(_) | Expr::C => write!(f, "{e}^{k}"),
                _ => write!(f, "({e})^{k}"),
            },
            Expr::Mul(a, b) => write!(f, "({a} {b})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Gen(Kind, u32),
    C,
    I,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl Tok {
    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::Gen(..) | Tok::C | Tok::I | Tok::LParen)
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        message: message.into(),
    }
}

/// Tokens paired with their 1-based column.
fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let pos = i + 1;
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let digits = |from: usize| {
            let mut end = from;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            end
        };
        let tok = match ch {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'c' => Tok::C,
            'I' => Tok::I,
            'p' | 'q' => {
                let end = digits(i + 1);
                if end == i + 1 {
                    return Err(syntax(pos, format!("expected an index after `{ch}`")));
                }
                let text: String = chars[i + 1..end].iter().collect();
                let index: u32 = text
                    .parse()
                    .map_err(|_| syntax(pos + 1, format!("index `{text}` is too large")))?;
                if index == 0 {
                    return Err(syntax(pos + 1, "generator indices start at 1"));
                }
                let kind = if ch == 'p' { Kind::P } else { Kind::Q };
                out.push((Tok::Gen(kind, index), pos));
                i = end;
                continue;
            }
            d if d.is_ascii_digit() => {
                let end = digits(i);
                let text: String = chars[i..end].iter().collect();
                out.push((Tok::Int(text.parse().expect("ascii digits")), pos));
                i = end;
                continue;
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end_pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end_pos, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(Expr::Neg(Box::new(rhs))));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(&Tok::Star) || self.peek().is_some_and(Tok::starts_atom) {
                let rhs = self.factor()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let negated = self.eat(&Tok::Minus);
        let base_pos = self.pos();
        let (atom, parenthesised) = self.atom()?;
        let mut out = atom;
        if self.eat(&Tok::Caret) {
            let powable = parenthesised || matches!(out, Expr::Gen(_) | Expr::C);
            if !powable {
                return Err(syntax(
                    base_pos,
                    "only generators, c and parenthesised expressions can be raised to a power",
                ));
            }
            let exp = self.exponent()?;
            out = Expr::Pow(Box::new(out), exp);
        }
        Ok(if negated { Expr::Neg(Box::new(out)) } else { out })
    }

    fn exponent(&mut self) -> Result<i64> {
        let negative = self.eat(&Tok::Minus);
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let n: i64 = n.try_into().map_err(|_| syntax(pos, "exponent is too large"))?;
                Ok(if negative { -n } else { n })
            }
            _ => Err(syntax(pos, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<(Expr, bool)> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Gen(kind, index)) => Ok((Expr::Gen(GeneratorId { kind, index }), false)),
            Some(Tok::C) => Ok((Expr::C, false)),
            Some(Tok::I) => Ok((Expr::Identity, false)),
            Some(Tok::Int(n)) => {
                let mut d = BigInt::from(1);
                if self.eat(&Tok::Slash) {
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(v)) if v.is_zero() => return Err(syntax(dpos, "zero denominator")),
                        Some(Tok::Int(v)) => d = v,
                        _ => return Err(syntax(dpos, "expected an integer denominator")),
                    }
                }
                Ok((Expr::Rational(Rational::new(n, d)?), false))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(close, "expected `)`"));
                }
                Ok((inner, true))
            }
            Some(other) => Err(syntax(pos, format!("unexpected {}", describe(&other)))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "number",
        Tok::Gen(..) => "generator",
        Tok::C => "`c`",
        Tok::I => "`I`",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Caret => "`^`",
        Tok::Slash => "`/`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
    }
}

/// Parses without checking indices against a context.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end_pos: src.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        let pos = p.pos();
        let t = p.bump().expect("token present");
        return Err(syntax(pos, format!("unexpected {}", describe(&t))));
    }
    Ok(e)
}

/// Parses and checks every generator index against `ctx`.
pub fn parse(src: &str, ctx: &AlgebraContext) -> Result<Expr> {
    let e = parse_expr(src)?;
    e.check_indices(ctx)?;
    Ok(e)
}

/// Builds the normal-ordered element denoted by `e`.
pub fn lower(e: &Expr, ctx: &AlgebraContext) -> Result<Element> {
    e.check_indices(ctx)?;
    lower_inner(e, ctx)
}

fn lower_inner(e: &Expr, ctx: &AlgebraContext) -> Result<Element> {
    let mode = ctx.coeff_mode();
    match e {
        Expr::Rational(r) => Ok(Element::scalar(CSeries::constant(r.clone(), mode), *ctx)),
        Expr::C => Ok(Element::scalar(CSeries::c(mode), *ctx)),
        Expr::Identity => Ok(Element::one(*ctx)),
        Expr::Gen(g) => Element::generator(*g, 1, *ctx),
        Expr::Neg(inner) => Ok(lower_inner(inner, ctx)?.neg()),
        Expr::Pow(base, k) => match **base {
            Expr::Gen(g) => Element::generator(g, *k, *ctx),
            Expr::C if *k < 0 => Err(Error::NegativePower("c")),
            Expr::C => {
                let deg = u32::try_from(*k).map_err(|_| Error::Overflow("power of c"))?;
                Ok(Element::scalar(CSeries::monomial(Rational::one(), deg, mode), *ctx))
            }
            _ if *k < 0 => Err(Error::NegativePower("a parenthesised expression")),
            _ => {
                let n = u32::try_from(*k).map_err(|_| Error::Overflow("power"))?;
                lower_inner(base, ctx)?.pow(n)
            }
        },
        Expr::Mul(..) => lower_product(e, ctx),
        Expr::Add(a, b) => lower_inner(a, ctx)?.add(&lower_inner(b, ctx)?),
    }
}

fn flatten_product<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    match e {
        Expr::Mul(a, b) => {
            flatten_product(a, out);
            flatten_product(b, out);
        }
        other => out.push(other),
    }
}

/// Runs of bare generator powers are collected into one word and
/// normal-ordered together.
fn lower_product(e: &Expr, ctx: &AlgebraContext) -> Result<Element> {
    let mut factors = Vec::new();
    flatten_product(e, &mut factors);
    let mut acc = Element::one(*ctx);
    let mut word = Word::new();
    for f in factors {
        let gen = match f {
            Expr::Gen(g) => Some((*g, 1)),
            Expr::Pow(base, k) => match **base {
                Expr::Gen(g) => Some((g, *k)),
                _ => None,
            },
            _ => None,
        };
        match gen {
            Some((g, k)) => {
                ctx.check_exponent(k)?;
                word.push(g, k);
            }
            None => {
                if !word.is_empty() {
                    acc = acc.mul(&normal_order_word(&word, ctx)?)?;
                    word = Word::new();
                }
                acc = acc.mul(&lower_inner(f, ctx)?)?;
            }
        }
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    if !word.is_empty() {
        acc = acc.mul(&normal_order_word(&word, ctx)?)?;
    }
    Ok(acc)
}

/// `lower(parse(src, ctx), ctx)`.
pub fn parse_element(src: &str, ctx: &AlgebraContext) -> Result<Element> {
    lower(&parse(src, ctx)?, ctx)
}
