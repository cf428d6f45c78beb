//! Text syntax for rational functions with diagonal poles and for
//! polynomial inputs: a recursive-descent parser with byte-positioned
//! errors, elaborators into [`DiagRat`] and [`LambdaPoly`], and a
//! serializer whose output reparses to an equal value.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' signed-int)?
//! atom   := rational | variable | '(' expr ')'
//! rational := digits ('/' digits)?
//! variable := ('z' | 'w' | 'L') digits
//! ```
//!
//! Negative powers are accepted only on atoms whose value simplifies
//! to a nonzero multiple of a difference of two position variables, so
//! every denominator stays supported on the diagonals.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{scalar, w_live, z_live, DiagRat, MPoly, Monomial, Scalar, VarId};
use crate::calculus::LambdaPoly;

/// Largest exponent magnitude the elaborator will expand.
const MAX_EXPONENT: i64 = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("non-diagonal denominator at byte {pos}: only differences of two position variables may carry negative powers")]
    NonDiagonalDenominator { pos: usize },
    #[error("variable {var} at byte {pos} exceeds the declared count {max}")]
    IndexOutOfRange { var: String, pos: usize, max: u32 },
    #[error("variable {var} at byte {pos} is not allowed in this context")]
    WrongFamily { var: String, pos: usize },
    #[error("negative power at byte {pos} is not allowed in a polynomial")]
    NegativePower { pos: usize },
    #[error("exponent at byte {pos} exceeds the supported magnitude {MAX_EXPONENT}")]
    ExponentTooLarge { pos: usize },
}

fn syntax(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        message: message.into(),
    }
}

/// Parsed expression tree. Every node remembers the byte offset of its
/// first token so elaboration errors can point back into the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprAst {
    pub pos: usize,
    pub kind: ExprKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Rational(Scalar),
    Var { family: char, index: u32 },
    Sum(Box<ExprAst>, Box<ExprAst>),
    Diff(Box<ExprAst>, Box<ExprAst>),
    Prod(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i64),
}

// ---------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Var(char, u32),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((start, Tok::Int(text[start..i].to_string())));
            }
            b'z' | b'w' | b'L' => {
                let start = i;
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits_start {
                    return Err(syntax(
                        start,
                        format!("variable `{}` must be followed by an index", c as char),
                    ));
                }
                let index: u32 = text[digits_start..i]
                    .parse()
                    .map_err(|_| syntax(digits_start, "variable index too large"))?;
                toks.push((start, Tok::Var(c as char, index)));
            }
            _ => {
                return Err(syntax(
                    i,
                    format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                ));
            }
        }
    }
    toks.push((bytes.len(), Tok::End));
    Ok(toks)
}

impl Lexer {
    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }
}

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

/// Parses the full input as one expression; trailing tokens are an
/// error.
pub fn parse_expr(text: &str) -> Result<ExprAst, ParseError> {
    let mut lx = Lexer {
        toks: lex(text)?,
        at: 0,
    };
    let ast = parse_sum(&mut lx)?;
    let (pos, tok) = lx.peek();
    if *tok != Tok::End {
        return Err(syntax(*pos, format!("unexpected token {tok:?} after expression")));
    }
    Ok(ast)
}

fn node(pos: usize, kind: ExprKind) -> ExprAst {
    ExprAst { pos, kind }
}

fn parse_sum(lx: &mut Lexer) -> Result<ExprAst, ParseError> {
    let (start, first) = lx.peek().clone();
    let mut acc = if first == Tok::Minus {
        lx.bump();
        let t = parse_term(lx)?;
        node(
            start,
            ExprKind::Diff(
                Box::new(node(start, ExprKind::Rational(scalar::zero()))),
                Box::new(t),
            ),
        )
    } else {
        parse_term(lx)?
    };
    loop {
        match lx.peek().1 {
            Tok::Plus => {
                lx.bump();
                let rhs = parse_term(lx)?;
                acc = node(start, ExprKind::Sum(Box::new(acc), Box::new(rhs)));
            }
            Tok::Minus => {
                lx.bump();
                let rhs = parse_term(lx)?;
                acc = node(start, ExprKind::Diff(Box::new(acc), Box::new(rhs)));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<ExprAst, ParseError> {
    let start = lx.peek().0;
    let mut acc = parse_factor(lx)?;
    while lx.peek().1 == Tok::Star {
        lx.bump();
        let rhs = parse_factor(lx)?;
        acc = node(start, ExprKind::Prod(Box::new(acc), Box::new(rhs)));
    }
    Ok(acc)
}

fn parse_factor(lx: &mut Lexer) -> Result<ExprAst, ParseError> {
    let base = parse_atom(lx)?;
    if lx.peek().1 != Tok::Caret {
        return Ok(base);
    }
    lx.bump();
    let negative = if lx.peek().1 == Tok::Minus {
        lx.bump();
        true
    } else {
        false
    };
    let (pos, tok) = lx.bump();
    let Tok::Int(digits) = tok else {
        return Err(syntax(pos, "expected an integer exponent after `^`"));
    };
    let mag: i64 = digits
        .parse()
        .map_err(|_| ParseError::ExponentTooLarge { pos })?;
    if mag > MAX_EXPONENT {
        return Err(ParseError::ExponentTooLarge { pos });
    }
    let exp = if negative { -mag } else { mag };
    let start = base.pos;
    Ok(node(start, ExprKind::Pow(Box::new(base), exp)))
}

fn parse_atom(lx: &mut Lexer) -> Result<ExprAst, ParseError> {
    let (pos, tok) = lx.bump();
    match tok {
        Tok::Int(numer) => {
            let n = BigInt::from_str(&numer).expect("digit strings are integers");
            if lx.peek().1 == Tok::Slash {
                lx.bump();
                let (dpos, dtok) = lx.bump();
                let Tok::Int(denom) = dtok else {
                    return Err(syntax(dpos, "expected digits after `/`"));
                };
                let d = BigInt::from_str(&denom).expect("digit strings are integers");
                if d.is_zero() {
                    return Err(syntax(dpos, "zero denominator"));
                }
                Ok(node(pos, ExprKind::Rational(Scalar::new(n, d))))
            } else {
                Ok(node(pos, ExprKind::Rational(Scalar::from(n))))
            }
        }
        Tok::Var(family, index) => Ok(node(pos, ExprKind::Var { family, index })),
        Tok::LParen => {
            let inner = parse_sum(lx)?;
            let (cpos, ctok) = lx.bump();
            if ctok != Tok::RParen {
                return Err(syntax(cpos, "expected `)`"));
            }
            Ok(node(pos, inner.kind))
        }
        other => Err(syntax(pos, format!("expected a value, found {other:?}"))),
    }
}

// ---------------------------------------------------------------------
// Elaboration into DiagRat
// ---------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Z,
    W,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::Z => 'z',
            Family::W => 'w',
        }
    }

    fn var(self, index: u32) -> VarId {
        match self {
            Family::Z => VarId::Z(index),
            Family::W => VarId::W(index),
        }
    }

    fn live(self, count: u32) -> std::collections::BTreeSet<VarId> {
        match self {
            Family::Z => z_live(count),
            Family::W => w_live(count),
        }
    }
}

/// Elaborates into a rational function of `z1..zn`.
pub fn elaborate(ast: &ExprAst, n: u32) -> Result<DiagRat, ParseError> {
    elaborate_family(ast, n, Family::Z)
}

/// Elaborates into a rational function of `w1..wp`.
pub fn elaborate_w(ast: &ExprAst, p: u32) -> Result<DiagRat, ParseError> {
    elaborate_family(ast, p, Family::W)
}

/// One-step convenience: parse and elaborate over `z1..zn`.
pub fn parse_diagrat(text: &str, n: u32) -> Result<DiagRat, ParseError> {
    elaborate(&parse_expr(text)?, n)
}

/// One-step convenience: parse and elaborate over `w1..wp`.
pub fn parse_w_diagrat(text: &str, p: u32) -> Result<DiagRat, ParseError> {
    elaborate_w(&parse_expr(text)?, p)
}

fn elaborate_family(ast: &ExprAst, count: u32, family: Family) -> Result<DiagRat, ParseError> {
    match &ast.kind {
        ExprKind::Rational(c) => Ok(DiagRat::constant_on(family.live(count), c.clone())),
        ExprKind::Var { family: f, index } => {
            let var_name = format!("{f}{index}");
            if *f != family.letter() {
                return Err(ParseError::WrongFamily {
                    var: var_name,
                    pos: ast.pos,
                });
            }
            if *index == 0 || *index > count {
                return Err(ParseError::IndexOutOfRange {
                    var: var_name,
                    pos: ast.pos,
                    max: count,
                });
            }
            let num = MPoly::var(family.var(*index));
            Ok(DiagRat::from_parts(family.live(count), num, BTreeMap::new())
                .expect("a live variable is a valid numerator"))
        }
        ExprKind::Sum(a, b) => Ok(elaborate_family(a, count, family)?
            .add(&elaborate_family(b, count, family)?)
            .expect("both sides share the live variables")),
        ExprKind::Diff(a, b) => Ok(elaborate_family(a, count, family)?
            .sub(&elaborate_family(b, count, family)?)
            .expect("both sides share the live variables")),
        ExprKind::Prod(a, b) => Ok(elaborate_family(a, count, family)?
            .mul(&elaborate_family(b, count, family)?)
            .expect("both sides share the live variables")),
        ExprKind::Pow(base, exp) => {
            let b = elaborate_family(base, count, family)?;
            if *exp >= 0 {
                let mut acc = DiagRat::constant_on(family.live(count), scalar::one());
                for _ in 0..*exp {
                    acc = acc.mul(&b).expect("both sides share the live variables");
                }
                Ok(acc)
            } else {
                invert_difference(&b, *exp, family, count, base.pos)
            }
        }
    }
}

/// Recognizes `c * (a - b)` with `a < b` live position variables;
/// returns the ordered pair and the coefficient of `a`.
fn as_difference(num: &MPoly) -> Option<(VarId, VarId, Scalar)> {
    let terms: Vec<(&Monomial, &Scalar)> = num.terms().collect();
    if terms.len() != 2 {
        return None;
    }
    let single = |m: &Monomial| -> Option<VarId> {
        let mut it = m.iter();
        match (it.next(), it.next()) {
            (Some((v, 1)), None) => Some(v),
            _ => None,
        }
    };
    let (m0, c0) = terms[0];
    let (m1, c1) = terms[1];
    let v0 = single(m0)?;
    let v1 = single(m1)?;
    if v0 == v1 || (c0.clone() + c1.clone()) != scalar::zero() {
        return None;
    }
    if v0 < v1 {
        Some((v0, v1, c0.clone()))
    } else {
        Some((v1, v0, c1.clone()))
    }
}

fn invert_difference(
    base: &DiagRat,
    exp: i64,
    family: Family,
    count: u32,
    pos: usize,
) -> Result<DiagRat, ParseError> {
    let bad = || ParseError::NonDiagonalDenominator { pos };
    if !base.poles().is_empty() {
        return Err(bad());
    }
    let (lo, hi, coeff) = as_difference(base.numerator()).ok_or_else(bad)?;
    let k = u32::try_from(-exp).expect("exponent magnitude fits by the parser cap");
    // (c (z_lo - z_hi))^exp = c^exp * (z_lo - z_hi)^exp with exp < 0.
    let mut scale = scalar::one();
    let inv = scalar::one() / coeff;
    for _ in 0..k {
        scale *= inv.clone();
    }
    let mut poles = BTreeMap::new();
    poles.insert((lo, hi), k);
    DiagRat::from_parts(family.live(count), MPoly::constant(scale), poles)
        .map_err(|_| bad())
}

// ---------------------------------------------------------------------
// Elaboration into polynomials over the line variables
// ---------------------------------------------------------------------

/// Elaborates into a polynomial in `L1..Lp` with rational coefficients.
/// Negative powers are rejected.
pub fn elaborate_poly(ast: &ExprAst, p: u32) -> Result<LambdaPoly<Scalar>, ParseError> {
    let mp = elaborate_mpoly(ast, p)?;
    let mut out = LambdaPoly::zero();
    for (m, c) in mp.terms() {
        out.add_term(m.clone(), c.clone());
    }
    Ok(out)
}

/// One-step convenience: parse and elaborate over `L1..Lp`.
pub fn parse_lambda_poly(text: &str, p: u32) -> Result<LambdaPoly<Scalar>, ParseError> {
    elaborate_poly(&parse_expr(text)?, p)
}

fn elaborate_mpoly(ast: &ExprAst, p: u32) -> Result<MPoly, ParseError> {
    match &ast.kind {
        ExprKind::Rational(c) => Ok(MPoly::constant(c.clone())),
        ExprKind::Var { family, index } => {
            let var_name = format!("{family}{index}");
            if *family != 'L' {
                return Err(ParseError::WrongFamily {
                    var: var_name,
                    pos: ast.pos,
                });
            }
            if *index == 0 || *index > p {
                return Err(ParseError::IndexOutOfRange {
                    var: var_name,
                    pos: ast.pos,
                    max: p,
                });
            }
            Ok(MPoly::var(VarId::BigLambda(*index)))
        }
        ExprKind::Sum(a, b) => Ok(elaborate_mpoly(a, p)?.add(&elaborate_mpoly(b, p)?)),
        ExprKind::Diff(a, b) => Ok(elaborate_mpoly(a, p)?.sub(&elaborate_mpoly(b, p)?)),
        ExprKind::Prod(a, b) => Ok(elaborate_mpoly(a, p)?.mul(&elaborate_mpoly(b, p)?)),
        ExprKind::Pow(base, exp) => {
            if *exp < 0 {
                return Err(ParseError::NegativePower { pos: ast.pos });
            }
            Ok(elaborate_mpoly(base, p)?.pow(*exp as u32))
        }
    }
}

// ---------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------

fn rational_text(c: &Scalar) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn monomial_text(m: &Monomial) -> Vec<String> {
    m.iter()
        .map(|(v, e)| {
            if e == 1 {
                format!("{v}")
            } else {
                format!("{v}^{e}")
            }
        })
        .collect()
}

fn polynomial_text(p: &MPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let mag = c.abs();
        let mut factors = Vec::new();
        if !mag.is_one() || m.is_unit() {
            factors.push(rational_text(&mag));
        }
        factors.extend(monomial_text(m));
        let piece = factors.join("*");
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&piece);
    }
    out
}

/// Renders a polynomial in the line variables in the input grammar, so
/// the output can be parsed back to an equal value.
pub fn serialize_lambda_poly(q: &LambdaPoly<Scalar>) -> String {
    let mut as_poly = MPoly::zero();
    for (m, c) in q.terms() {
        as_poly = as_poly.add(&MPoly::from_mono(m.clone(), c.clone()));
    }
    polynomial_text(&as_poly)
}

/// Renders a rational function in the input grammar, so the output can
/// be parsed back to an equal value.
pub fn serialize_diagrat(d: &DiagRat) -> String {
    let num = d.numerator();
    if num.is_zero() {
        return "0".to_string();
    }
    let mut factors: Vec<String> = Vec::new();
    let poly = polynomial_text(num);
    if num.terms().count() > 1 {
        factors.push(format!("({poly})"));
    } else if poly != "1" || d.poles().is_empty() {
        factors.push(poly);
    }
    for (&(a, b), &k) in d.poles() {
        factors.push(format!("({a}-{b})^-{k}"));
    }
    factors.join(" * ")
}
