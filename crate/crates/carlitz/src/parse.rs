//! Expression syntax shared by series literals and operator words.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! atom    := INT | 'x' | 'g' | 'tau' | 'd' | 'deltaN' | 'O' '(' ('1' | 'x' ('^' exponent)?) ')' | '(' sum ')'
//! exponent:= INT | '(' '-'? INT ('/' INT)? ')'
//! ```
//!
//! Series literals use `x`, integer coefficients and `g` (the generator of
//! the constant field); operator expressions add `tau`, `d` and
//! `delta1..deltaN`, with any generator-free subexpression read as a scalar.

use std::fmt;

use carlitz_core::opring::{
    normalize, Convention, Factor, Gen, NormalForm, OperatorWord, Strategy,
};
use carlitz_core::{FieldRef, PerfSeries, QExp};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

fn err<T>(message: impl Into<String>, span: Span) -> Result<T, ParseError> {
    Err(ParseError {
        message: message.into(),
        span,
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(k) => format!("'{}'", k),
        Tok::Ident(s) => format!("'{}'", s),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Slash => "'/'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let span = Span { start, end: pos };
            let value = text[start..pos]
                .parse::<i64>()
                .or_else(|_| err("integer literal out of range", span))?;
            out.push((Tok::Int(value), span));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while pos < bytes.len() && bytes[pos].is_ascii_alphanumeric() {
                pos += 1;
            }
            out.push((Tok::Ident(text[start..pos].to_string()), Span { start, end: pos }));
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return err(
                    format!("unexpected character '{}'", ch),
                    Span { start, end: start + ch.len_utf8() },
                );
            }
        };
        pos += 1;
        out.push((tok, Span { start, end: pos }));
    }
    Ok(out)
}

/// An exponent as written: `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub num: i64,
    pub den: i64,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (k, 1) if k >= 0 => write!(f, "{}", k),
            (k, 1) => write!(f, "({})", k),
            (k, d) => write!(f, "({}/{})", k, d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Int(i64),
    /// The series variable `x`.
    Var,
    /// The generator `g` of the constant field.
    ConstGen,
    Generator(Gen),
    /// `O(x^e)`.
    BigO(Exponent),
    Neg(Box<ParseTree>),
    /// The first entry always carries [`Sign::Plus`].
    Sum(Vec<(Sign, ParseTree)>),
    Product(Vec<ParseTree>),
    Power(Box<ParseTree>, Exponent),
    Paren(Box<ParseTree>),
}

/// A parsed expression. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct ParseTree {
    pub kind: NodeKind,
    pub span: Span,
}

impl PartialEq for ParseTree {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NodeKind::Int(k) => write!(f, "{}", k),
            NodeKind::Var => f.write_str("x"),
            NodeKind::ConstGen => f.write_str("g"),
            NodeKind::Generator(g) => write!(f, "{}", g),
            NodeKind::BigO(e) => write!(f, "O(x^{})", e),
            NodeKind::Neg(t) => write!(f, "-{}", t),
            NodeKind::Sum(terms) => {
                for (k, (sign, t)) in terms.iter().enumerate() {
                    match (k, sign) {
                        (0, _) => write!(f, "{}", t)?,
                        (_, Sign::Plus) => write!(f, " + {}", t)?,
                        (_, Sign::Minus) => write!(f, " - {}", t)?,
                    }
                }
                Ok(())
            }
            NodeKind::Product(fs) => {
                for (k, t) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{}", t)?;
                }
                Ok(())
            }
            NodeKind::Power(b, e) => write!(f, "{}^{}", b, e),
            NodeKind::Paren(t) => write!(f, "({})", t),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> Span {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(Span { start: self.end, end: self.end })
    }

    fn bump(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Span, ParseError> {
        match self.bump() {
            Some((t, s)) if t == want => Ok(s),
            Some((t, s)) => err(format!("expected {}, found {}", describe(&want), describe(&t)), s),
            None => err(format!("expected {}, found end of input", describe(&want)), self.here()),
        }
    }

    fn sum(&mut self) -> Result<ParseTree, ParseError> {
        let first = self.product()?;
        let mut span = first.span;
        let mut terms = vec![(Sign::Plus, first)];
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => Sign::Plus,
                Some(Tok::Minus) => Sign::Minus,
                _ => break,
            };
            self.bump();
            let t = self.product()?;
            span = span.join(t.span);
            terms.push((sign, t));
        }
        if terms.len() == 1 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(ParseTree { kind: NodeKind::Sum(terms), span })
    }

    fn product(&mut self) -> Result<ParseTree, ParseError> {
        let first = self.unary()?;
        let mut span = first.span;
        let mut factors = vec![first];
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let t = self.unary()?;
            span = span.join(t.span);
            factors.push(t);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        Ok(ParseTree { kind: NodeKind::Product(factors), span })
    }

    fn unary(&mut self) -> Result<ParseTree, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            let s = self.bump().unwrap().1;
            let t = self.unary()?;
            let span = s.join(t.span);
            return Ok(ParseTree { kind: NodeKind::Neg(Box::new(t)), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParseTree, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let (e, es) = self.exponent()?;
            let span = base.span.join(es);
            return Ok(ParseTree { kind: NodeKind::Power(Box::new(base), e), span });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<(Exponent, Span), ParseError> {
        match self.bump() {
            Some((Tok::Int(k), s)) => Ok((Exponent { num: k, den: 1 }, s)),
            Some((Tok::LParen, open)) => {
                let negative = matches!(self.peek(), Some(Tok::Minus));
                if negative {
                    self.bump();
                }
                let num = match self.bump() {
                    Some((Tok::Int(k), _)) => if negative { -k } else { k },
                    Some((t, s)) => return err(format!("expected an integer exponent, found {}", describe(&t)), s),
                    None => return err("unterminated exponent", self.here()),
                };
                let mut den = 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    den = match self.bump() {
                        Some((Tok::Int(0), s)) => return err("zero denominator", s),
                        Some((Tok::Int(k), _)) => k,
                        Some((t, s)) => return err(format!("expected a denominator, found {}", describe(&t)), s),
                        None => return err("unterminated exponent", self.here()),
                    };
                }
                let close = self.expect(Tok::RParen)?;
                Ok((Exponent { num, den }, open.join(close)))
            }
            Some((t, s)) => err(format!("expected an exponent, found {}", describe(&t)), s),
            None => err("expected an exponent, found end of input", self.here()),
        }
    }

    fn atom(&mut self) -> Result<ParseTree, ParseError> {
        let Some((tok, span)) = self.bump() else {
            return err("unexpected end of input", self.here());
        };
        let kind = match tok {
            Tok::Int(k) => NodeKind::Int(k),
            Tok::LParen => {
                let inner = self.sum()?;
                let close = self.expect(Tok::RParen)?;
                return Ok(ParseTree {
                    kind: NodeKind::Paren(Box::new(inner)),
                    span: span.join(close),
                });
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => NodeKind::Var,
                "g" => NodeKind::ConstGen,
                "tau" => NodeKind::Generator(Gen::Tau),
                "d" => NodeKind::Generator(Gen::D),
                "O" => return self.big_o(span),
                other => match other.strip_prefix("delta").map(str::parse::<u32>) {
                    Some(Ok(j)) if j >= 1 => NodeKind::Generator(Gen::Delta(j)),
                    _ => return err(format!("unknown identifier '{}'", other), span),
                },
            },
            t => return err(format!("unexpected {}", describe(&t)), span),
        };
        Ok(ParseTree { kind, span })
    }

    fn big_o(&mut self, start: Span) -> Result<ParseTree, ParseError> {
        self.expect(Tok::LParen)?;
        match self.bump() {
            Some((Tok::Ident(v), _)) if v == "x" => {}
            Some((Tok::Int(1), _)) => {
                let close = self.expect(Tok::RParen)?;
                return Ok(ParseTree {
                    kind: NodeKind::BigO(Exponent { num: 0, den: 1 }),
                    span: start.join(close),
                });
            }
            Some((t, s)) => return err(format!("expected 'x' inside O(...), found {}", describe(&t)), s),
            None => return err("unterminated O(...)", self.here()),
        }
        let mut e = Exponent { num: 1, den: 1 };
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            e = self.exponent()?.0;
        }
        let close = self.expect(Tok::RParen)?;
        Ok(ParseTree { kind: NodeKind::BigO(e), span: start.join(close) })
    }
}

/// Parses text into a tree without interpreting it.
pub fn parse_tree(text: &str) -> Result<ParseTree, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return err("empty expression", Span { start: 0, end: text.len() });
    }
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let tree = p.sum()?;
    if let Some((t, s)) = p.bump() {
        return err(format!("unexpected {} after the expression", describe(&t)), s);
    }
    Ok(tree)
}

fn qexp(field: &FieldRef, e: Exponent, span: Span) -> Result<QExp, ParseError> {
    QExp::checked_new(e.num, e.den, field.p() as u64).map_or_else(
        || err(format!("exponent denominator {} is not a power of q = {}", e.den, field.q()), span),
        Ok,
    )
}

fn lift<T>(r: carlitz_core::Result<T>, span: Span) -> Result<T, ParseError> {
    r.or_else(|e| err(e.to_string(), span))
}

fn has_generator(t: &ParseTree) -> bool {
    match &t.kind {
        NodeKind::Generator(_) => true,
        NodeKind::Int(_) | NodeKind::Var | NodeKind::ConstGen | NodeKind::BigO(_) => false,
        NodeKind::Neg(c) | NodeKind::Paren(c) | NodeKind::Power(c, _) => has_generator(c),
        NodeKind::Sum(ts) => ts.iter().any(|(_, c)| has_generator(c)),
        NodeKind::Product(ts) => ts.iter().any(has_generator),
    }
}

/// Evaluates a generator-free tree as a series.
pub fn eval_series(field: &FieldRef, t: &ParseTree) -> Result<PerfSeries, ParseError> {
    Ok(match &t.kind {
        NodeKind::Int(k) => PerfSeries::from_int(field, *k),
        NodeKind::Var => PerfSeries::x(field),
        NodeKind::ConstGen => PerfSeries::constant(field, field.generator()),
        NodeKind::Generator(g) => return err(format!("operator '{}' in a series literal", g), t.span),
        NodeKind::BigO(e) => PerfSeries::big_o(field, qexp(field, *e, t.span)?),
        NodeKind::Neg(c) => -eval_series(field, c)?,
        NodeKind::Paren(c) => eval_series(field, c)?,
        NodeKind::Sum(ts) => {
            let mut acc = PerfSeries::zero(field);
            for (sign, c) in ts {
                let v = eval_series(field, c)?;
                acc = match sign {
                    Sign::Plus => &acc + &v,
                    Sign::Minus => &acc - &v,
                };
            }
            acc
        }
        NodeKind::Product(ts) => {
            let mut acc = PerfSeries::one(field);
            for c in ts {
                acc = &acc * &eval_series(field, c)?;
            }
            acc
        }
        NodeKind::Power(base, e) => {
            let ex = qexp(field, *e, t.span)?;
            match base.kind {
                NodeKind::Var => PerfSeries::monomial(field, field.one(), ex),
                NodeKind::ConstGen if ex.is_integer() => {
                    PerfSeries::constant(field, field.gen_pow(ex.numer()))
                }
                _ => {
                    let b = eval_series(field, base)?;
                    let (num, k) = ex.as_q_power(field.q());
                    lift(b.pow(num), t.span)?.frobenius(-(k as i32))
                }
            }
        }
    })
}

/// Parses a series literal.
pub fn parse_series(field: &FieldRef, text: &str) -> Result<PerfSeries, ParseError> {
    eval_series(field, &parse_tree(text)?)
}

type WordSum = Vec<Vec<Factor>>;

fn concat(left: &WordSum, right: &WordSum) -> WordSum {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in left {
        for r in right {
            let mut w = l.clone();
            w.extend(r.iter().cloned());
            out.push(w);
        }
    }
    out
}

fn eval_words(field: &FieldRef, n: usize, t: &ParseTree) -> Result<WordSum, ParseError> {
    if !has_generator(t) {
        return Ok(vec![vec![Factor::Scalar(eval_series(field, t)?)]]);
    }
    let minus_one = || Factor::Scalar(PerfSeries::from_int(field, -1));
    Ok(match &t.kind {
        NodeKind::Generator(Gen::Delta(j)) if *j as usize > n => {
            return err(format!("delta{} exceeds the number of s-variables n = {}", j, n), t.span)
        }
        NodeKind::Generator(g) => vec![vec![Factor::Gen(*g)]],
        NodeKind::Neg(c) => eval_words(field, n, c)?
            .into_iter()
            .map(|w| std::iter::once(minus_one()).chain(w).collect())
            .collect(),
        NodeKind::Paren(c) => eval_words(field, n, c)?,
        NodeKind::Sum(ts) => {
            let mut out = Vec::new();
            for (sign, c) in ts {
                for w in eval_words(field, n, c)? {
                    out.push(match sign {
                        Sign::Plus => w,
                        Sign::Minus => std::iter::once(minus_one()).chain(w).collect(),
                    });
                }
            }
            out
        }
        NodeKind::Product(ts) => {
            let mut acc: WordSum = vec![vec![]];
            for c in ts {
                acc = concat(&acc, &eval_words(field, n, c)?);
            }
            acc
        }
        NodeKind::Power(base, e) => {
            if e.den != 1 || e.num < 0 {
                return err("operators only take non-negative integer powers", t.span);
            }
            let b = eval_words(field, n, base)?;
            let mut acc: WordSum = vec![vec![]];
            for _ in 0..e.num {
                acc = concat(&acc, &b);
            }
            acc
        }
        NodeKind::Int(_) | NodeKind::Var | NodeKind::ConstGen | NodeKind::BigO(_) => {
            unreachable!("generator-free nodes are scalars")
        }
    })
}

/// Parses an operator expression in a ring with `n` s-variables into a sum
/// of words.
pub fn parse_operator(field: &FieldRef, n: usize, text: &str) -> Result<Vec<OperatorWord>, ParseError> {
    let tree = parse_tree(text)?;
    Ok(eval_words(field, n, &tree)?
        .into_iter()
        .map(|w| OperatorWord::new(n, w))
        .collect())
}

/// Parses and normalizes an operator expression.
pub fn parse_normal_form(
    field: &FieldRef,
    n: usize,
    text: &str,
    conv: Convention,
) -> Result<NormalForm, ParseError> {
    let words = parse_operator(field, n, text)?;
    lift(
        normalize(field, n, &words, conv, Strategy::Leftmost),
        Span { start: 0, end: text.len() },
    )
}
