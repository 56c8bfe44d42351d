//! Plain-text presentation files.
//!
//! ```text
//! # comment
//! prime 3
//! precision 4
//! generators x y0 y1 y2
//! relator y0^p * [y0, x^-1] * [y1, y2]
//! orientation x = 1 - p
//! ```
//!
//! Words are products (`*` or juxtaposition) of generators, parenthesised
//! words and commutators `[u, v]`, each optionally raised to an integer power
//! `^e`. Exponents and orientation values are integer expressions in `p` built
//! from `+ - * ^` and parentheses. Generators not mentioned in an
//! `orientation` line get `θ = 1`. `precision` defaults to [`DEFAULT_PRECISION`].

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::padic::{Padic, UnitOneP};
use crate::presentations::{Orientation, OrientedPresentation, Presentation, PresentationError, ValidationReport};
use crate::words::{Word, WordError};

pub const DEFAULT_PRECISION: u32 = 4;

/// Largest `|e|` allowed in `a^e` inside an integer expression.
const MAX_EXPR_EXPONENT: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: PresentationError,
    },
    #[error("orientation does not kill every relator: {0:?}")]
    Validation(ValidationReport),
    #[error(transparent)]
    Word(#[from] WordError),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, col, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Lexer {
    fn new(text: &str, line: usize, col0: usize) -> Result<Self, FormatError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = col0 + i;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), col));
            } else if "*^[](),+-=".contains(c) {
                toks.push((Tok::Sym(c), col));
                i += 1;
            } else {
                return Err(syntax(line, col, format!("unexpected character `{c}`")));
            }
        }
        Ok(Lexer { toks, pos: 0, line, end_col: col0 + chars.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |&(_, c)| c)
    }

    fn err(&self, msg: impl Into<String>) -> FormatError {
        syntax(self.line, self.col(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FormatError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn done(&self) -> Result<(), FormatError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("unexpected trailing input")),
        }
    }
}

/// Integer expressions in `p`.
struct ExprParser<'a> {
    lex: &'a mut Lexer,
    prime: u64,
}

impl ExprParser<'_> {
    fn expr(&mut self) -> Result<BigInt, FormatError> {
        let mut acc = self.term()?;
        loop {
            if self.lex.eat('+') {
                acc += self.term()?;
            } else if self.lex.eat('-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BigInt, FormatError> {
        let mut acc = self.unary()?;
        while self.lex.eat('*') {
            acc *= self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BigInt, FormatError> {
        if self.lex.eat('-') {
            return Ok(-self.unary()?);
        }
        let base = self.primary()?;
        if self.lex.eat('^') {
            let col = self.lex.col();
            let e = self.unary()?;
            let e = e
                .to_u32()
                .filter(|&e| e <= MAX_EXPR_EXPONENT)
                .ok_or_else(|| syntax(self.lex.line, col, format!("exponent {e} out of range")))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<BigInt, FormatError> {
        match self.lex.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.lex.pos += 1;
                Ok(n)
            }
            Some(Tok::Ident(s)) if s == "p" => {
                self.lex.pos += 1;
                Ok(BigInt::from(self.prime))
            }
            Some(Tok::Sym('(')) => {
                self.lex.pos += 1;
                let v = self.expr()?;
                self.lex.expect(')')?;
                Ok(v)
            }
            _ => Err(self.lex.err("expected an integer, `p` or `(`")),
        }
    }
}

struct WordParser<'a> {
    lex: &'a mut Lexer,
    prime: u64,
    gens: &'a HashMap<String, usize>,
}

impl WordParser<'_> {
    fn word(&mut self) -> Result<Word, FormatError> {
        let mut acc = Word::identity();
        loop {
            match self.lex.peek() {
                Some(Tok::Ident(_)) | Some(Tok::Sym('[')) | Some(Tok::Sym('(')) | Some(Tok::Int(_)) => {
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Sym('*')) => {
                    self.lex.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc.normalize()),
            }
        }
    }

    fn factor(&mut self) -> Result<Word, FormatError> {
        let base = self.primary()?;
        if self.lex.eat('^') {
            let col = self.lex.col();
            let e = self.exponent()?;
            let e = e
                .to_i64()
                .ok_or_else(|| syntax(self.lex.line, col, format!("exponent {e} out of range")))?;
            return base.pow(e).map_err(|err| syntax(self.lex.line, col, err.to_string()));
        }
        Ok(base)
    }

    /// `-`? followed by an integer, `p` or a parenthesised expression, with
    /// right-associative `^` so that `x^p^2` is `x^(p^2)`.
    fn exponent(&mut self) -> Result<BigInt, FormatError> {
        let mut ep = ExprParser { lex: self.lex, prime: self.prime };
        ep.unary()
    }

    fn primary(&mut self) -> Result<Word, FormatError> {
        let col = self.lex.col();
        match self.lex.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.lex.pos += 1;
                if name == "p" {
                    return Err(syntax(self.lex.line, col, "`p` denotes the prime, not a generator"));
                }
                let g = self
                    .gens
                    .get(&name)
                    .ok_or_else(|| syntax(self.lex.line, col, format!("undeclared generator `{name}`")))?;
                Ok(Word::gen(*g))
            }
            Some(Tok::Int(n)) if n.is_one() => {
                self.lex.pos += 1;
                Ok(Word::identity())
            }
            Some(Tok::Sym('(')) => {
                self.lex.pos += 1;
                let w = self.word()?;
                self.lex.expect(')')?;
                Ok(w)
            }
            Some(Tok::Sym('[')) => {
                self.lex.pos += 1;
                let a = self.word()?;
                self.lex.expect(',')?;
                let b = self.word()?;
                self.lex.expect(']')?;
                Ok(Word::commutator(a, b))
            }
            _ => Err(syntax(self.lex.line, col, "expected a generator, `1`, `(` or `[`")),
        }
    }
}

/// Parses a word over the given generator names.
pub fn parse_word(text: &str, prime: u64, generators: &[String]) -> Result<Word, FormatError> {
    let gens: HashMap<String, usize> = generators.iter().cloned().zip(0..).collect();
    let mut lex = Lexer::new(text, 1, 1)?;
    let w = WordParser { lex: &mut lex, prime, gens: &gens }.word()?;
    lex.done()?;
    Ok(w)
}

/// Parses an integer expression in `p`.
pub fn parse_int_expr(text: &str, prime: u64) -> Result<BigInt, FormatError> {
    let mut lex = Lexer::new(text, 1, 1)?;
    let v = ExprParser { lex: &mut lex, prime }.expr()?;
    lex.done()?;
    Ok(v)
}

fn bigint_padic(v: &BigInt, prime: u64, prec: u32) -> Result<Padic, PresentationError> {
    let m = BigInt::from(Padic::zero(prime, prec)?.modulus());
    let mut r = v % &m;
    if r.is_negative() {
        r += &m;
    }
    Ok(Padic::new(prime, r.to_i128().expect("reduced below the modulus"), prec)?)
}

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    rest: &'a str,
    rest_col: usize,
}

/// Parses a file without checking that the orientation kills the relators.
pub fn parse_unchecked(text: &str) -> Result<OrientedPresentation, FormatError> {
    parse_impl(text, None)
}

/// Parses and validates a file.
pub fn parse(text: &str) -> Result<OrientedPresentation, FormatError> {
    let op = parse_unchecked(text)?;
    let report = op.validate()?;
    if !report.is_valid() {
        return Err(FormatError::Validation(report));
    }
    Ok(op)
}

/// Like [`parse`], with the `precision` line overridden.
pub fn parse_with_precision(text: &str, precision: u32) -> Result<OrientedPresentation, FormatError> {
    let op = parse_impl(text, Some(precision))?;
    let report = op.validate()?;
    if !report.is_valid() {
        return Err(FormatError::Validation(report));
    }
    Ok(op)
}

fn parse_impl(text: &str, precision_override: Option<u32>) -> Result<OrientedPresentation, FormatError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        lines.push(Line {
            number: i + 1,
            keyword: &trimmed[..kw_len],
            rest: &trimmed[kw_len..],
            rest_col: indent + kw_len + 1,
        });
    }

    let mut prime = None;
    let mut precision = None;
    let mut generators: Option<Vec<String>> = None;
    for l in &lines {
        match l.keyword {
            "prime" | "precision" => {
                let mut lex = Lexer::new(l.rest, l.number, l.rest_col)?;
                let col = lex.col();
                let v = match lex.peek().cloned() {
                    Some(Tok::Int(n)) => {
                        lex.pos += 1;
                        n
                    }
                    _ => return Err(lex.err("expected a positive integer")),
                };
                lex.done()?;
                let slot = if l.keyword == "prime" { &mut prime } else { &mut precision };
                if slot.is_some() {
                    return Err(syntax(l.number, 1, format!("duplicate `{}` line", l.keyword)));
                }
                let v = v
                    .to_u64()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| syntax(l.number, col, "expected a positive integer"))?;
                *slot = Some((v, l.number));
            }
            "generators" => {
                if generators.is_some() {
                    return Err(syntax(l.number, 1, "duplicate `generators` line"));
                }
                let mut lex = Lexer::new(l.rest, l.number, l.rest_col)?;
                let mut names = Vec::new();
                loop {
                    match lex.peek().cloned() {
                        Some(Tok::Ident(s)) => {
                            lex.pos += 1;
                            names.push(s);
                            lex.eat(',');
                        }
                        None => break,
                        _ => return Err(lex.err("expected a generator name")),
                    }
                }
                generators = Some(names);
            }
            "relator" | "orientation" => {}
            other => return Err(syntax(l.number, 1, format!("unknown keyword `{other}`"))),
        }
    }

    let (prime, prime_line) = prime.ok_or_else(|| syntax(1, 1, "missing `prime` line"))?;
    let precision = match (precision_override, precision) {
        (Some(n), _) => n,
        (None, Some((n, line))) => u32::try_from(n).map_err(|_| syntax(line, 1, "precision out of range"))?,
        (None, None) => DEFAULT_PRECISION,
    };
    let generators = generators.unwrap_or_default();
    let invalid = |line: usize| move |source: PresentationError| FormatError::Invalid { line, source };
    Presentation::free(prime, generators.clone()).map_err(invalid(prime_line))?;
    let one = UnitOneP::one(prime, precision).map_err(|e| invalid(prime_line)(e.into()))?;

    let gens: HashMap<String, usize> = generators.iter().cloned().zip(0..).collect();
    let mut relators = Vec::new();
    let mut values = vec![one; generators.len()];
    let mut oriented = vec![false; generators.len()];
    for l in &lines {
        match l.keyword {
            "relator" => {
                let mut lex = Lexer::new(l.rest, l.number, l.rest_col)?;
                let w = WordParser { lex: &mut lex, prime, gens: &gens }.word()?;
                lex.done()?;
                relators.push(w);
            }
            "orientation" => {
                let mut lex = Lexer::new(l.rest, l.number, l.rest_col)?;
                let col = lex.col();
                let name = match lex.peek().cloned() {
                    Some(Tok::Ident(s)) => {
                        lex.pos += 1;
                        s
                    }
                    _ => return Err(lex.err("expected a generator name")),
                };
                let g = *gens
                    .get(&name)
                    .ok_or_else(|| syntax(l.number, col, format!("undeclared generator `{name}`")))?;
                if oriented[g] {
                    return Err(syntax(l.number, col, format!("`{name}` oriented twice")));
                }
                lex.expect('=')?;
                let v = ExprParser { lex: &mut lex, prime }.expr()?;
                lex.done()?;
                let v = bigint_padic(&v, prime, precision).map_err(invalid(l.number))?;
                values[g] = UnitOneP::new(v).map_err(|e| invalid(l.number)(e.into()))?;
                oriented[g] = true;
            }
            _ => {}
        }
    }
    let pres = Presentation::new(prime, generators, relators).map_err(invalid(prime_line))?;
    let orientation = Orientation::new(prime, precision, values).map_err(invalid(prime_line))?;
    OrientedPresentation::new(pres, orientation).map_err(invalid(prime_line))
}

/// Writes a file that [`parse_unchecked`] reads back to an equal value.
pub fn to_file_string(op: &OrientedPresentation) -> String {
    let pres = op.presentation();
    let mut out = String::new();
    writeln!(out, "prime {}", op.prime()).unwrap();
    writeln!(out, "precision {}", op.precision()).unwrap();
    writeln!(out, "generators {}", pres.generators().join(" ")).unwrap();
    for r in pres.relators() {
        writeln!(out, "relator {}", r.display(pres.generators())).unwrap();
    }
    for (name, v) in pres.generators().iter().zip(op.orientation().values()) {
        if !v.is_one() {
            writeln!(out, "orientation {name} = {}", v.as_padic().value()).unwrap();
        }
    }
    out
}

/// `v` as a readable expression in `p` when it is `1 ± p^k`, else its residue.
pub fn describe_unit(v: &UnitOneP) -> String {
    let x = v.as_padic();
    let p = BigInt::from(x.prime());
    let m = BigInt::from(x.modulus());
    let s = x.signed_value();
    let minus_one = BigInt::from(s) - BigInt::one();
    if minus_one.is_zero() {
        return "1".to_string();
    }
    for k in 1..x.prec() {
        let pk = p.pow(k);
        let power = if k == 1 { "p".to_string() } else { format!("p^{k}") };
        if (&minus_one - &pk) % &m == BigInt::zero() {
            return format!("1+{power}");
        }
        if (&minus_one + &pk) % &m == BigInt::zero() {
            return format!("1-{power}");
        }
    }
    x.value().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
prime 3
precision 4
generators x y0 y1 y2
relator y0^p * [y0, x^-1] * [y1, y2]
orientation x = 1 - p
";

    #[test]
    fn parses_sample() {
        let op = parse(SAMPLE).unwrap();
        assert_eq!(op.ngens(), 4);
        assert_eq!(op.precision(), 4);
        assert_eq!(op.orientation().value(0).as_padic().value(), 79);
        let expected = Word::gen_pow(1, 3).mul(&Word::commutator(Word::gen(1), Word::gen_pow(0, -1))).mul(
            &Word::commutator(Word::gen(2), Word::gen(3)),
        );
        assert_eq!(op.presentation().relators()[0], expected);
    }

    #[test]
    fn round_trip() {
        let op = parse(SAMPLE).unwrap();
        let text = to_file_string(&op);
        assert_eq!(parse_unchecked(&text).unwrap(), op);
    }

    #[test]
    fn expressions() {
        assert_eq!(parse_int_expr("1+p^2", 5).unwrap(), BigInt::from(26));
        assert_eq!(parse_int_expr("(1-p)^p", 3).unwrap(), BigInt::from(-8));
        assert_eq!(parse_int_expr("-p*2+1", 3).unwrap(), BigInt::from(-5));
        let names = vec!["x".to_string()];
        assert_eq!(parse_word("x^p^2", 3, &names).unwrap(), Word::gen_pow(0, 9));
        assert_eq!(parse_word("x x x x^-3", 3, &names).unwrap(), Word::identity());
        assert_eq!(parse_word("(x^2)^-(p-1)", 3, &names).unwrap(), Word::gen_pow(0, -4));
    }

    #[test]
    fn error_positions() {
        let bad = "prime 3\ngenerators x\nrelator x * y\n";
        match parse(bad) {
            Err(FormatError::Syntax { line, col, .. }) => assert_eq!((line, col), (3, 13)),
            other => panic!("{other:?}"),
        }
        let bad = "prime 3\ngenerators x\nrelator [x, x\n";
        assert!(matches!(parse(bad), Err(FormatError::Syntax { line: 3, col: 14, .. })));
        assert!(matches!(parse("prime 3\nfoo\n"), Err(FormatError::Syntax { line: 2, col: 1, .. })));
        assert!(matches!(parse("prime 2\n"), Err(FormatError::Invalid { line: 1, .. })));
        let not_one = "prime 3\ngenerators x\norientation x = 2\n";
        assert!(matches!(parse(not_one), Err(FormatError::Invalid { line: 3, .. })));
    }

    #[test]
    fn validation_is_forwarded() {
        let text = "prime 3\ngenerators x y\nrelator x y x^-1 y^-(1+p)\norientation y = 1+p\n";
        assert!(parse_unchecked(text).is_ok());
        assert!(matches!(parse(text), Err(FormatError::Validation(_))));
    }

    #[test]
    fn unit_descriptions() {
        let op = parse(SAMPLE).unwrap();
        assert_eq!(describe_unit(op.orientation().value(0)), "1-p");
        assert_eq!(describe_unit(op.orientation().value(1)), "1");
    }
}
