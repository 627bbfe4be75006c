//! Parsing and printing for the polynomial input grammar.
//!
//! The grammar accepts integer and rational (`p/q`) literals, the variables
//! `t`, `x`, `y`, `z`, the operators `+ - *`, exponentiation `^` (tightest,
//! right-associative, non-negative integer exponents only), parentheses,
//! and insignificant whitespace. Unary minus is accepted as an extension.
//! Multiplication is always explicit: `t*x`, never `tx`.
//!
//! Each entry point restricts which variables may appear and reports
//! violations with the line and column of the offending token:
//!
//! ```
//! use skewdyn_core::algebra::{parse_tpoly, rint};
//! let p = skewdyn_core::algebra::parse_tpoly("t^2 - 1").unwrap();
//! assert_eq!(p.eval(&rint(3)), rint(8));
//! assert!(skewdyn_core::algebra::parse_tpoly("x + 1").is_err());
//! ```
//!
//! The printers produce a canonical descending-degree form that reparses to
//! the same polynomial, so values survive a print/parse round trip exactly.

use num::{BigInt, One, ToPrimitive, Zero};
use std::collections::BTreeMap;

use super::mpoly::{MPoly, Mono};
use super::ring::Rat;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Largest exponent the parser accepts, to keep hostile inputs from
/// allocating unbounded polynomials.
const MAX_EXPONENT: u64 = 1_000_000;

/// Cap on the number of distinct monomials produced while evaluating a
/// parsed expression.
const PARSE_TERM_BUDGET: usize = 1 << 20;

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
enum TokKind {
    Int(BigInt),
    /// Variable index: t=0, x=1, y=2, z=3.
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokKind,
    line: usize,
    col: usize,
}

const VAR_NAMES: [char; 4] = ['t', 'x', 'y', 'z'];

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n: BigInt = digits.parse().expect("digit run parses as integer");
                toks.push(Token { kind: TokKind::Int(n), line: tline, col: tcol });
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let kind = match c {
                    '+' => TokKind::Plus,
                    '-' => TokKind::Minus,
                    '*' => TokKind::Star,
                    '/' => TokKind::Slash,
                    '^' => TokKind::Caret,
                    '(' => TokKind::LParen,
                    _ => TokKind::RParen,
                };
                chars.next();
                col += 1;
                toks.push(Token { kind, line: tline, col: tcol });
            }
            c if c.is_alphabetic() => {
                chars.next();
                col += 1;
                match VAR_NAMES.iter().position(|&v| v == c) {
                    Some(idx) => {
                        toks.push(Token { kind: TokKind::Var(idx), line: tline, col: tcol })
                    }
                    None => {
                        return Err(Error::parse(
                            tline,
                            tcol,
                            format!("unknown variable '{c}' (expected one of t, x, y, z)"),
                        ))
                    }
                }
            }
            other => {
                return Err(Error::parse(tline, tcol, format!("unexpected character '{other}'")))
            }
        }
    }
    toks.push(Token { kind: TokKind::Eof, line, col });
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Expression values
// ---------------------------------------------------------------------------

/// Sparse polynomial in the four grammar variables, used only while
/// evaluating a parsed expression.
#[derive(Clone, PartialEq, Debug)]
struct ParsedPoly {
    terms: BTreeMap<[u32; 4], Rat>,
}

impl ParsedPoly {
    fn zero() -> Self {
        ParsedPoly { terms: BTreeMap::new() }
    }

    fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        ParsedPoly { terms }
    }

    fn var(idx: usize) -> Self {
        let mut exps = [0u32; 4];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, Rat::one());
        ParsedPoly { terms }
    }

    fn add_term(&mut self, exps: [u32; 4], c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        ParsedPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = ParsedPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0u32; 4];
                for k in 0..4 {
                    e[k] = ea[k].checked_add(eb[k]).ok_or_else(|| {
                        crate::Error::DegreeBudgetExceeded {
                            needed: usize::MAX,
                            budget: PARSE_TERM_BUDGET,
                        }
                    })?;
                }
                out.add_term(e, ca.clone() * cb.clone());
                if out.terms.len() > PARSE_TERM_BUDGET {
                    return Err(crate::Error::DegreeBudgetExceeded {
                        needed: out.terms.len(),
                        budget: PARSE_TERM_BUDGET,
                    });
                }
            }
        }
        Ok(out)
    }

    fn pow_u(&self, e: u32) -> Result<Self> {
        let mut acc = ParsedPoly::constant(Rat::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    allowed: [bool; 4],
    allowed_desc: &'static str,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ParsedPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                TokKind::Plus => {
                    self.advance();
                    acc = acc.add(&self.term()?);
                }
                TokKind::Minus => {
                    self.advance();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParsedPoly> {
        let mut acc = self.unary()?;
        while self.peek().kind == TokKind::Star {
            self.advance();
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParsedPoly> {
        if self.peek().kind == TokKind::Minus {
            self.advance();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParsedPoly> {
        let base = self.atom()?;
        if self.peek().kind == TokKind::Caret {
            self.advance();
            let e = self.exponent()?;
            return base.pow_u(e);
        }
        Ok(base)
    }

    /// Right-associative exponent chain: `2^3^2` is `2^(3^2)`.
    fn exponent(&mut self) -> Result<u32> {
        let tok = self.advance();
        let n = match &tok.kind {
            TokKind::Int(n) => n.clone(),
            _ => {
                return Err(Error::parse(
                    tok.line,
                    tok.col,
                    "expected a non-negative integer exponent after '^'".to_string(),
                ))
            }
        };
        let mut val = n.to_u64().filter(|&v| v <= MAX_EXPONENT).ok_or_else(|| {
            Error::parse(tok.line, tok.col, format!("exponent exceeds limit {MAX_EXPONENT}"))
        })?;
        if self.peek().kind == TokKind::Caret {
            self.advance();
            let rest = self.exponent()?;
            let mut acc: u64 = 1;
            for _ in 0..rest {
                acc = acc.saturating_mul(val);
                if acc > MAX_EXPONENT {
                    return Err(Error::parse(
                        tok.line,
                        tok.col,
                        format!("exponent exceeds limit {MAX_EXPONENT}"),
                    ));
                }
            }
            val = acc;
        }
        Ok(val as u32)
    }

    fn atom(&mut self) -> Result<ParsedPoly> {
        let tok = self.advance();
        match tok.kind {
            TokKind::Int(n) => {
                if self.peek().kind == TokKind::Slash {
                    self.advance();
                    let dtok = self.advance();
                    match dtok.kind {
                        TokKind::Int(d) if !d.is_zero() => {
                            Ok(ParsedPoly::constant(Rat::new(n, d)))
                        }
                        TokKind::Int(_) => Err(Error::parse(
                            dtok.line,
                            dtok.col,
                            "zero denominator in rational literal".to_string(),
                        )),
                        _ => Err(Error::parse(
                            dtok.line,
                            dtok.col,
                            "expected an integer denominator after '/'".to_string(),
                        )),
                    }
                } else {
                    Ok(ParsedPoly::constant(Rat::from(n)))
                }
            }
            TokKind::Var(idx) => {
                if !self.allowed[idx] {
                    return Err(Error::parse(
                        tok.line,
                        tok.col,
                        format!(
                            "variable '{}' not allowed here (expected a polynomial in {})",
                            VAR_NAMES[idx], self.allowed_desc
                        ),
                    ));
                }
                Ok(ParsedPoly::var(idx))
            }
            TokKind::LParen => {
                let inner = self.expr()?;
                let close = self.advance();
                if close.kind != TokKind::RParen {
                    return Err(Error::parse(close.line, close.col, "expected ')'".to_string()));
                }
                Ok(inner)
            }
            TokKind::Slash => Err(Error::parse(
                tok.line,
                tok.col,
                "'/' is only allowed between integer literals".to_string(),
            )),
            _ => Err(Error::parse(
                tok.line,
                tok.col,
                "expected a number, variable, or '('".to_string(),
            )),
        }
    }
}

fn parse_with_vars(
    src: &str,
    allowed: [bool; 4],
    allowed_desc: &'static str,
) -> Result<ParsedPoly> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, allowed, allowed_desc };
    let value = p.expr()?;
    let end = p.peek().clone();
    if end.kind != TokKind::Eof {
        return Err(Error::parse(end.line, end.col, "unexpected trailing input".to_string()));
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Parses a constant rational expression such as `3`, `-7/2`, or `(1+1)/1`
/// style arithmetic without variables.
///
/// # Errors
/// Returns [`crate::Error::ParseError`] on malformed input or if any
/// variable appears.
pub fn parse_rat(src: &str) -> Result<Rat> {
    let p = parse_with_vars(src, [false; 4], "no variables (a rational constant)")?;
    Ok(p.terms.get(&[0; 4]).cloned().unwrap_or_else(Rat::zero))
}

/// Parses a polynomial in `t` with rational coefficients.
///
/// # Errors
/// Returns [`crate::Error::ParseError`] on malformed input or if a variable
/// other than `t` appears.
pub fn parse_tpoly(src: &str) -> Result<UPoly<Rat>> {
    let p = parse_with_vars(src, [true, false, false, false], "t")?;
    let mut coeffs: Vec<Rat> = Vec::new();
    for (e, c) in &p.terms {
        let k = e[0] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rat::zero());
        }
        coeffs[k] = c.clone();
    }
    Ok(UPoly::from_coeffs(coeffs))
}

/// Parses a polynomial in `x` with coefficients in `Q[t]`, e.g. the base
/// map `x^2 + t`.
///
/// # Errors
/// Returns [`crate::Error::ParseError`] on malformed input or if a variable
/// other than `t`, `x` appears.
pub fn parse_xtpoly(src: &str) -> Result<UPoly<UPoly<Rat>>> {
    let p = parse_with_vars(src, [true, true, false, false], "t, x")?;
    let mut cols: BTreeMap<u32, BTreeMap<u32, Rat>> = BTreeMap::new();
    for (e, c) in &p.terms {
        cols.entry(e[1]).or_default().insert(e[0], c.clone());
    }
    let max_x = cols.keys().next_back().copied().unwrap_or(0) as usize;
    let mut coeffs = vec![UPoly::zero(); max_x + 1];
    for (i, col) in cols {
        let max_t = col.keys().next_back().copied().unwrap_or(0) as usize;
        let mut tv = vec![Rat::zero(); max_t + 1];
        for (k, c) in col {
            tv[k as usize] = c;
        }
        coeffs[i as usize] = UPoly::from_coeffs(tv);
    }
    Ok(UPoly::from_coeffs(coeffs))
}

/// Parses a polynomial in `x`, `y` with coefficients in `Q[t]`, e.g. the
/// fiber map `y^2 + t*x*y`.
///
/// # Errors
/// Returns [`crate::Error::ParseError`] on malformed input or if a variable
/// other than `t`, `x`, `y` appears.
pub fn parse_gpoly(src: &str) -> Result<MPoly<UPoly<Rat>>> {
    let p = parse_with_vars(src, [true, true, true, false], "t, x, y")?;
    let mut groups: BTreeMap<(u32, u32), BTreeMap<u32, Rat>> = BTreeMap::new();
    for (e, c) in &p.terms {
        groups.entry((e[1], e[2])).or_default().insert(e[0], c.clone());
    }
    let mut out = MPoly::zero();
    for ((i, j), col) in groups {
        let max_t = col.keys().next_back().copied().unwrap_or(0) as usize;
        let mut tv = vec![Rat::zero(); max_t + 1];
        for (k, c) in col {
            tv[k as usize] = c;
        }
        out.add_term(Mono { i, j }, UPoly::from_coeffs(tv));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Printers
// ---------------------------------------------------------------------------

fn rat_is_one(r: &Rat) -> bool {
    r.is_one()
}

fn push_term(out: &mut String, negative: bool, body: String) {
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else if negative {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    out.push_str(&body);
}

/// Prints a polynomial over `Q` in descending powers of `var`, in the input
/// grammar (so the output reparses to the same value).
pub fn upoly_string(p: &UPoly<Rat>, var: char) -> String {
    let Some(deg) = p.degree() else {
        return "0".to_string();
    };
    let mut out = String::new();
    for e in (0..=deg).rev() {
        let c = p.coeff(e);
        if c.is_zero() {
            continue;
        }
        let negative = c < Rat::zero();
        let mag = if negative { -c } else { c };
        let body = match (e, rat_is_one(&mag)) {
            (0, _) => mag.to_string(),
            (1, true) => var.to_string(),
            (1, false) => format!("{mag}*{var}"),
            (_, true) => format!("{var}^{e}"),
            (_, false) => format!("{mag}*{var}^{e}"),
        };
        push_term(&mut out, negative, body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Monomial body `t^k * extra` for a single-term `t`-coefficient; `extra`
/// holds the main-variable part (may be empty).
fn single_term_body(mag: &Rat, k: usize, extra: &str) -> String {
    let mut pieces: Vec<String> = Vec::new();
    if !rat_is_one(mag) || (k == 0 && extra.is_empty()) {
        pieces.push(mag.to_string());
    }
    match k {
        0 => {}
        1 => pieces.push("t".to_string()),
        _ => pieces.push(format!("t^{k}")),
    }
    if !extra.is_empty() {
        pieces.push(extra.to_string());
    }
    pieces.join("*")
}

/// Returns `Some((k, coeff))` when the `t`-polynomial has a single term.
fn single_term(p: &UPoly<Rat>) -> Option<(usize, Rat)> {
    let deg = p.degree()?;
    let mut found = None;
    for e in 0..=deg {
        let c = p.coeff(e);
        if !c.is_zero() {
            if found.is_some() {
                return None;
            }
            found = Some((e, c));
        }
    }
    found
}

fn coeff_term(out: &mut String, c: &UPoly<Rat>, extra: &str) {
    match single_term(c) {
        Some((k, coeff)) => {
            let negative = coeff < Rat::zero();
            let mag = if negative { -coeff } else { coeff };
            push_term(out, negative, single_term_body(&mag, k, extra));
        }
        None => {
            let inner = format!("({})", upoly_string(c, 't'));
            let body = if extra.is_empty() { inner } else { format!("{inner}*{extra}") };
            push_term(out, false, body);
        }
    }
}

/// Prints a polynomial in `var` over `Q[t]` in descending powers of `var`.
/// Multi-term `t`-coefficients are parenthesized so the output reparses.
pub fn xtpoly_string(p: &UPoly<UPoly<Rat>>, var: char) -> String {
    let Some(deg) = p.degree() else {
        return "0".to_string();
    };
    let mut out = String::new();
    for e in (0..=deg).rev() {
        let c = p.coeff(e);
        if c.is_zero() {
            continue;
        }
        let extra = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        coeff_term(&mut out, &c, &extra);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Prints a polynomial in `x`, `y` over `Q[t]` in descending monomial
/// order.
pub fn gpoly_string(p: &MPoly<UPoly<Rat>>) -> String {
    let mut terms: Vec<(Mono, UPoly<Rat>)> =
        p.terms().map(|(m, c)| (*m, c.clone())).collect();
    terms.reverse();
    let mut out = String::new();
    for (m, c) in &terms {
        if c.is_zero() {
            continue;
        }
        let mut extra_pieces: Vec<String> = Vec::new();
        match m.i {
            0 => {}
            1 => extra_pieces.push("x".to_string()),
            i => extra_pieces.push(format!("x^{i}")),
        }
        match m.j {
            0 => {}
            1 => extra_pieces.push("y".to_string()),
            j => extra_pieces.push(format!("y^{j}")),
        }
        let extra = extra_pieces.join("*");
        coeff_term(&mut out, c, &extra);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
