//! Textual grammar for sequences, rules, linear maps and functional specs.
//!
//! ```text
//! spec     := "l1" | "linf"
//!           | "weighted:" rule
//!           | "rescaled:" rule [":exclude=" (int | "[" int {"," int} "]")]
//!           | "coord:" int
//!           | "sum(" spec "," spec ")"
//!           | "pullback:" spec ":" map
//!           | "quotient:" ambient ":basis=[" seq {"," seq} "]"
//! ambient  := "l1" | "linf" | "weighted:" rule
//! map      := "identity" | "L" | "R" | "T"
//!           | "diag(" rule ")"
//!           | "table(" [int "->" seq {"," int "->" seq}] ")"
//!           | "compose(" map "," map ")" | "sum(" map "," map ")"
//!           | "F(f=" map ")"                       -- R(f(L(x))) + T(x)
//! rule     := int "^-" var | int "^" var | "(" rational ")^" var
//!           | "1/" var | var | rational
//!           | "table(" [int "=" rational {"," ...}] ";else=" rational ")"
//! var      := "i" | "n"
//! seq      := "0" | "(" rational {"," rational} ")" | term {("+"|"-") term}
//! term     := ["-"] [rational ["*"]] "e" int
//! ```
//!
//! Printing a value and parsing the result gives the same value back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::maps::LinearMapSpec;
use crate::norms::{FunctionalSpec, PolyhedralNorm};
use crate::rational::Rational;
use crate::rule::{PositiveRule, Rule};
use crate::seq::SparseSeq;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    /// The input with a caret under the failing position.
    pub fn pointer(&self, input: &str) -> String {
        format!("{input}\n{}^", " ".repeat(self.position.min(input.len())))
    }
}

type PResult<T> = Result<T, ParseError>;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn ident(&mut self) -> PResult<&'a str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 || !self.rest().starts_with(|c: char| c.is_ascii_alphabetic()) {
            return self.err("expected a name");
        }
        let word = &self.rest()[..len];
        self.pos += len;
        Ok(word)
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return None;
        }
        let d = &self.rest()[..len];
        self.pos += len;
        Some(d)
    }

    fn index(&mut self) -> PResult<usize> {
        let start = self.pos;
        match self.digits().and_then(|d| d.parse::<usize>().ok()) {
            Some(i) if i >= 1 => Ok(i),
            Some(_) => {
                self.pos = start;
                self.err("indices start at 1")
            }
            None => self.err("expected an index"),
        }
    }

    fn integer(&mut self) -> PResult<BigInt> {
        let neg = self.eat("-");
        match self.digits() {
            Some(d) => {
                let v: BigInt = d.parse().expect("digits parse");
                Ok(if neg { -v } else { v })
            }
            None => self.err("expected an integer"),
        }
    }

    /// `[-]p[/q]`, where `/` is only consumed when followed by digits.
    fn rational(&mut self) -> PResult<Rational> {
        let p = self.integer()?;
        let save = self.pos;
        if self.eat("/") {
            if let Some(d) = self.digits() {
                let q: BigInt = d.parse().expect("digits parse");
                if q.is_zero() {
                    return self.err("zero denominator");
                }
                return Ok(Rational::new(p, q));
            }
            self.pos = save;
        }
        Ok(Rational::from_integer(p))
    }

    fn var(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        let mut chars = r.chars();
        match chars.next() {
            Some('i') | Some('n') => {
                if chars.next().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    return false;
                }
                self.pos += 1;
                true
            }
            _ => false,
        }
    }

    fn finish(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

fn whole<T>(text: &str, f: impl FnOnce(&mut Cursor) -> PResult<T>) -> PResult<T> {
    let mut c = Cursor::new(text);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

pub fn parse_seq(text: &str) -> PResult<SparseSeq> {
    whole(text, seq)
}

pub fn parse_rule(text: &str) -> PResult<Rule> {
    whole(text, rule)
}

pub fn parse_map(text: &str) -> PResult<LinearMapSpec> {
    whole(text, map)
}

pub fn parse_spec(text: &str) -> PResult<FunctionalSpec> {
    whole(text, spec)
}

/// Parses `[seq, seq, ...]` (brackets optional).
pub fn parse_seq_list(text: &str) -> PResult<Vec<SparseSeq>> {
    whole(text, |c| {
        let bracketed = c.eat("[");
        let items = seq_list(c)?;
        if bracketed {
            c.expect("]")?;
        }
        Ok(items)
    })
}

fn seq_list(c: &mut Cursor) -> PResult<Vec<SparseSeq>> {
    let mut items = vec![seq(c)?];
    while c.eat(",") {
        items.push(seq(c)?);
    }
    Ok(items)
}

fn seq(c: &mut Cursor) -> PResult<SparseSeq> {
    if c.eat("(") {
        let mut vals = vec![c.rational()?];
        while c.eat(",") {
            vals.push(c.rational()?);
        }
        c.expect(")")?;
        return Ok(SparseSeq::from_dense(vals));
    }
    let mut out = SparseSeq::zero();
    let mut first = true;
    loop {
        let negative = if first {
            c.eat("-")
        } else if c.eat("+") {
            false
        } else if c.eat("-") {
            true
        } else {
            break;
        };
        let coeff = if c.peek() == Some('e') {
            Rational::one()
        } else {
            let r = c.rational()?;
            let has_e = c.eat("*") || c.peek() == Some('e');
            if !has_e {
                if first && r.is_zero() {
                    return Ok(SparseSeq::zero());
                }
                return c.err("expected `e<index>`");
            }
            r
        };
        c.expect("e")?;
        let i = c.index()?;
        let coeff = if negative { -coeff } else { coeff };
        out.add_scaled(&coeff, &SparseSeq::basis(i).expect("index >= 1"));
        first = false;
    }
    Ok(out)
}

fn rule(c: &mut Cursor) -> PResult<Rule> {
    if c.eat("table(") {
        let mut values = BTreeMap::new();
        if c.peek() != Some(';') {
            loop {
                let at = c.pos;
                let i = c.index()?;
                c.expect("=")?;
                if values.insert(i, c.rational()?).is_some() {
                    return Err(ParseError {
                        position: at,
                        message: format!("index {i} listed twice"),
                    });
                }
                if !c.eat(",") {
                    break;
                }
            }
        }
        c.expect(";")?;
        c.expect("else=")?;
        let default = c.rational()?;
        c.expect(")")?;
        return Ok(Rule::Table { values, default });
    }
    if c.eat("(") {
        let ratio = c.rational()?;
        c.expect(")")?;
        c.expect("^")?;
        if !c.var() {
            return c.err("expected `i` or `n`");
        }
        return Ok(Rule::Geometric { ratio });
    }
    if c.var() {
        return Ok(Rule::Index);
    }
    let start = c.pos;
    let p = c.integer()?;
    if c.eat("^") {
        let neg = c.eat("-");
        if !c.var() {
            return c.err("expected `i` or `n`");
        }
        let base = Rational::from_integer(p);
        if neg {
            if base.is_zero() {
                c.pos = start;
                return c.err("0^-i is undefined");
            }
            return Ok(Rule::Geometric {
                ratio: base.recip(),
            });
        }
        return Ok(Rule::Geometric { ratio: base });
    }
    let save = c.pos;
    if c.eat("/") {
        if c.var() {
            if !p.is_one() {
                c.pos = start;
                return c.err("only `1/i` is supported as a reciprocal rule");
            }
            return Ok(Rule::Reciprocal);
        }
        c.pos = save;
    }
    c.pos = start;
    Ok(Rule::Constant(c.rational()?))
}

fn positive_rule(c: &mut Cursor) -> PResult<PositiveRule> {
    let start = c.pos;
    let r = rule(c)?;
    PositiveRule::new(r).map_err(|e| ParseError {
        position: start,
        message: e.to_string(),
    })
}

fn map(c: &mut Cursor) -> PResult<LinearMapSpec> {
    let start = c.pos;
    let name = c.ident()?;
    Ok(match name {
        "identity" | "id" => LinearMapSpec::Identity,
        "L" | "shift_left" => LinearMapSpec::ShiftLeft,
        "R" | "shift_right" => LinearMapSpec::ShiftRight,
        "T" | "truncate_first" => LinearMapSpec::TruncateFirst,
        "diag" => {
            c.expect("(")?;
            let r = rule(c)?;
            c.expect(")")?;
            LinearMapSpec::Diagonal(r)
        }
        "table" => {
            c.expect("(")?;
            let mut images = BTreeMap::new();
            if c.peek() != Some(')') {
                loop {
                    let at = c.pos;
                    let i = c.index()?;
                    c.expect("->")?;
                    if images.insert(i, seq(c)?).is_some() {
                        return Err(ParseError {
                            position: at,
                            message: format!("index {i} listed twice"),
                        });
                    }
                    if !c.eat(",") {
                        break;
                    }
                }
            }
            c.expect(")")?;
            LinearMapSpec::FiniteTable(images)
        }
        "compose" | "sum" => {
            c.expect("(")?;
            let a = map(c)?;
            c.expect(",")?;
            let b = map(c)?;
            c.expect(")")?;
            if name == "compose" {
                LinearMapSpec::compose(a, b)
            } else {
                LinearMapSpec::sum(a, b)
            }
        }
        "F" => {
            c.expect("(")?;
            c.expect("f=")?;
            let f = map(c)?;
            c.expect(")")?;
            LinearMapSpec::first_entry_lift(f)
        }
        other => {
            c.pos = start;
            return c.err(format!("unknown map `{other}`"));
        }
    })
}

fn ambient(c: &mut Cursor) -> PResult<PolyhedralNorm> {
    let start = c.pos;
    match c.ident()? {
        "l1" => Ok(PolyhedralNorm::L1),
        "linf" => Ok(PolyhedralNorm::LInf),
        "weighted" => {
            c.expect(":")?;
            Ok(PolyhedralNorm::WeightedL1(positive_rule(c)?))
        }
        other => {
            c.pos = start;
            c.err(format!(
                "unsupported ambient norm `{other}`: quotients need l1, linf or weighted"
            ))
        }
    }
}

fn spec(c: &mut Cursor) -> PResult<FunctionalSpec> {
    let start = c.pos;
    let name = c.ident()?;
    Ok(match name {
        "l1" => FunctionalSpec::L1,
        "linf" => FunctionalSpec::LInf,
        "weighted" => {
            c.expect(":")?;
            FunctionalSpec::WeightedL1(positive_rule(c)?)
        }
        "rescaled" => {
            c.expect(":")?;
            let scales = positive_rule(c)?;
            let mut excluded = BTreeSet::new();
            if c.eat(":exclude=") {
                if c.eat("[") {
                    if c.peek() != Some(']') {
                        excluded.insert(c.index()?);
                        while c.eat(",") {
                            excluded.insert(c.index()?);
                        }
                    }
                    c.expect("]")?;
                } else {
                    excluded.insert(c.index()?);
                }
            }
            FunctionalSpec::RescaledL1 { scales, excluded }
        }
        "coord" => {
            c.expect(":")?;
            FunctionalSpec::CoordinateAbs(c.index()?)
        }
        "sum" => {
            c.expect("(")?;
            let a = spec(c)?;
            c.expect(",")?;
            let b = spec(c)?;
            c.expect(")")?;
            FunctionalSpec::sum(a, b)
        }
        "pullback" => {
            c.expect(":")?;
            let inner = spec(c)?;
            c.expect(":")?;
            FunctionalSpec::pullback(inner, map(c)?)
        }
        "quotient" => {
            c.expect(":")?;
            let amb = ambient(c)?;
            c.expect(":")?;
            c.expect("basis=")?;
            c.expect("[")?;
            let at = c.pos;
            let basis = seq_list(c)?;
            c.expect("]")?;
            let subspace = crate::quotient::Subspace::new(basis).map_err(|e| ParseError {
                position: at,
                message: e.to_string(),
            })?;
            FunctionalSpec::Quotient {
                ambient: amb,
                subspace,
            }
        }
        other => {
            c.pos = start;
            return c.err(format!("unknown spec `{other}`"));
        }
    })
}

impl fmt::Display for LinearMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(inner) = self.as_first_entry_lift() {
            return write!(f, "F(f={inner})");
        }
        match self {
            LinearMapSpec::Identity => f.write_str("identity"),
            LinearMapSpec::ShiftLeft => f.write_str("L"),
            LinearMapSpec::ShiftRight => f.write_str("R"),
            LinearMapSpec::TruncateFirst => f.write_str("T"),
            LinearMapSpec::Diagonal(r) => write!(f, "diag({r})"),
            LinearMapSpec::FiniteTable(images) => {
                f.write_str("table(")?;
                for (k, (i, img)) in images.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}->{img}")?;
                }
                f.write_str(")")
            }
            LinearMapSpec::Compose { outer, inner } => write!(f, "compose({outer},{inner})"),
            LinearMapSpec::SumMap { left, right } => write!(f, "sum({left},{right})"),
        }
    }
}

impl fmt::Display for PolyhedralNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyhedralNorm::L1 => f.write_str("l1"),
            PolyhedralNorm::LInf => f.write_str("linf"),
            PolyhedralNorm::WeightedL1(w) => {
                f.write_str("weighted:")?;
                w.rule().write_with(f, 'i')
            }
        }
    }
}

impl fmt::Display for FunctionalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalSpec::L1 => f.write_str("l1"),
            FunctionalSpec::LInf => f.write_str("linf"),
            FunctionalSpec::WeightedL1(w) => {
                f.write_str("weighted:")?;
                w.rule().write_with(f, 'i')
            }
            FunctionalSpec::RescaledL1 { scales, excluded } => {
                f.write_str("rescaled:")?;
                scales.rule().write_with(f, 'n')?;
                match excluded.len() {
                    0 => Ok(()),
                    1 => write!(f, ":exclude={}", excluded.first().expect("one element")),
                    _ => {
                        let items: Vec<String> = excluded.iter().map(|i| i.to_string()).collect();
                        write!(f, ":exclude=[{}]", items.join(","))
                    }
                }
            }
            FunctionalSpec::CoordinateAbs(i) => write!(f, "coord:{i}"),
            FunctionalSpec::Sum(a, b) => write!(f, "sum({a},{b})"),
            FunctionalSpec::Pullback { inner, map } => write!(f, "pullback:{inner}:{map}"),
            FunctionalSpec::Quotient { ambient, subspace } => {
                let items: Vec<String> = subspace.basis().iter().map(|b| b.to_string()).collect();
                write!(f, "quotient:{ambient}:basis=[{}]", items.join(","))
            }
        }
    }
}

impl FromStr for FunctionalSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> PResult<Self> {
        parse_spec(s)
    }
}

impl FromStr for LinearMapSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> PResult<Self> {
        parse_map(s)
    }
}

impl FromStr for Rule {
    type Err = ParseError;
    fn from_str(s: &str) -> PResult<Self> {
        parse_rule(s)
    }
}

impl FromStr for SparseSeq {
    type Err = ParseError;
    fn from_str(s: &str) -> PResult<Self> {
        parse_seq(s)
    }
}
