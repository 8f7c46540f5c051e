use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Unit};

/// A generator of the free associative algebra: `η` or a symbol `[u]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Eta,
    Sym(Unit),
}

impl Letter {
    pub fn degree(&self) -> i64 {
        match self {
            Letter::Eta => -1,
            Letter::Sym(_) => 1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Eta => f.write_str("eta"),
            Letter::Sym(u) => write!(f, "[{u}]"),
        }
    }
}

pub type Word = Vec<Letter>;

pub fn word_degree(word: &[Letter]) -> i64 {
    word.iter().map(Letter::degree).sum()
}

fn format_word(word: &[Letter]) -> String {
    word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("*")
}

/// `coeff · w` for a word `w` in `η` and symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: i64,
    pub word: Word,
}

impl Monomial {
    pub fn new(coeff: i64, word: Word) -> Self {
        Monomial { coeff, word }
    }

    /// `coeff · η^a [u_1]...[u_k]` in that normal ordering.
    pub fn from_parts(coeff: i64, eta_power: usize, symbols: &[Unit]) -> Self {
        let mut word = vec![Letter::Eta; eta_power];
        word.extend(symbols.iter().cloned().map(Letter::Sym));
        Monomial { coeff, word }
    }

    pub fn degree(&self) -> i64 {
        word_degree(&self.word)
    }

    pub fn eta_power(&self) -> usize {
        self.word.iter().filter(|l| matches!(l, Letter::Eta)).count()
    }

    /// Symbol entries in order of appearance.
    pub fn symbols(&self) -> Vec<Unit> {
        self.word
            .iter()
            .filter_map(|l| match l {
                Letter::Sym(u) => Some(u.clone()),
                Letter::Eta => None,
            })
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coeff, self.word.is_empty()) {
            (c, true) => write!(f, "{c}"),
            (1, false) => f.write_str(&format_word(&self.word)),
            (-1, false) => write!(f, "-{}", format_word(&self.word)),
            (c, false) => write!(f, "{c}*{}", format_word(&self.word)),
        }
    }
}

/// A formal integer combination of words over one field, with like terms
/// collected and zero terms dropped. Terms are kept sorted by word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwExpression {
    field: FieldDescriptor,
    terms: Vec<Monomial>,
}

impl MwExpression {
    pub fn zero(field: &FieldDescriptor) -> Self {
        MwExpression {
            field: field.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(field: &FieldDescriptor) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &FieldDescriptor, c: i64) -> Self {
        Self::from_terms(field, vec![Monomial::new(c, Vec::new())]).expect("no units")
    }

    pub fn eta(field: &FieldDescriptor) -> Self {
        Self::from_terms(field, vec![Monomial::new(1, vec![Letter::Eta])]).expect("no units")
    }

    pub fn symbol(u: &Unit) -> Self {
        MwExpression {
            field: u.field().clone(),
            terms: vec![Monomial::new(1, vec![Letter::Sym(u.clone())])],
        }
    }

    /// `<u> = 1 + η[u]`.
    pub fn bracket(u: &Unit) -> Self {
        Self::from_terms(
            u.field(),
            vec![
                Monomial::new(1, Vec::new()),
                Monomial::new(1, vec![Letter::Eta, Letter::Sym(u.clone())]),
            ],
        )
        .expect("same field")
    }

    /// `[u_1][u_2]...[u_n]`.
    pub fn symbol_product(field: &FieldDescriptor, units: &[Unit]) -> Result<Self> {
        Self::from_terms(field, vec![Monomial::from_parts(1, 0, units)])
    }

    pub fn from_terms(field: &FieldDescriptor, terms: Vec<Monomial>) -> Result<Self> {
        let mut collected: BTreeMap<Word, i64> = BTreeMap::new();
        for t in terms {
            for l in &t.word {
                if let Letter::Sym(u) = l {
                    field.check_same(u.field())?;
                }
            }
            *collected.entry(t.word).or_insert(0) += t.coeff;
        }
        Ok(MwExpression {
            field: field.clone(),
            terms: collected
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(word, coeff)| Monomial { coeff, word })
                .collect(),
        })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms; `None` for the zero expression.
    pub fn degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for t in &self.terms {
            let d = t.degree();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::Inhomogeneous(e, d)),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn add(&self, other: &MwExpression) -> Result<MwExpression> {
        self.field.check_same(&other.field)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(&self.field, terms)
    }

    pub fn scale(&self, k: i64) -> MwExpression {
        let terms = self
            .terms
            .iter()
            .map(|t| Monomial::new(t.coeff * k, t.word.clone()))
            .collect();
        Self::from_terms(&self.field, terms).expect("same field")
    }

    pub fn neg(&self) -> MwExpression {
        self.scale(-1)
    }

    pub fn sub(&self, other: &MwExpression) -> Result<MwExpression> {
        self.add(&other.neg())
    }

    /// Free associative product: words are concatenated, nothing commuted.
    pub fn mul(&self, other: &MwExpression) -> Result<MwExpression> {
        self.field.check_same(&other.field)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut word = a.word.clone();
                word.extend(b.word.iter().cloned());
                terms.push(Monomial::new(a.coeff * b.coeff, word));
            }
        }
        Self::from_terms(&self.field, terms)
    }

    pub fn pow(&self, k: u32) -> Result<MwExpression> {
        let mut out = MwExpression::one(&self.field);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Parses the text syntax: `[u]`, `eta`, `<u>` (for `1 + eta*[u]`),
    /// integers, `*` (optional between factors), `+`, `-`, `^k`, parentheses.
    pub fn parse(field: &FieldDescriptor, text: &str) -> Result<Self> {
        let mut p = Parser {
            field,
            chars: text.chars().collect(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for MwExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let s = t.to_string();
            if i == 0 {
                f.write_str(&s)?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for MwExpression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `e1 · e2`.
pub fn mw_product(e1: &MwExpression, e2: &MwExpression) -> Result<MwExpression> {
    e1.mul(e2)
}

struct Parser<'a> {
    field: &'a FieldDescriptor,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at offset {} in `{text}`", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MwExpression> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c == '[' || c == '(' || c == '<' || c == 'e' || c.is_ascii_digit())
    }

    fn term(&mut self) -> Result<MwExpression> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?)?;
            } else if self.starts_factor() {
                acc = acc.mul(&self.power()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MwExpression> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent out of range"))?;
            return base.pow(k);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("integer out of range"))
    }

    fn delimited(&mut self, close: char) -> Result<String> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos] != close {
            self.pos += 1;
        }
        if self.pos == self.chars.len() {
            return Err(self.error(&format!("missing `{close}`")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        self.pos += 1;
        Ok(s)
    }

    fn atom(&mut self) -> Result<MwExpression> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("missing `)`"));
                }
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let lit = self.delimited(']')?;
                Ok(MwExpression::symbol(&self.field.parse_unit(&lit)?))
            }
            Some('<') => {
                self.pos += 1;
                let lit = self.delimited('>')?;
                Ok(MwExpression::bracket(&self.field.parse_unit(&lit)?))
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            Some('e') => {
                let rest: String = self.chars[self.pos..].iter().take(3).collect();
                if rest == "eta" {
                    self.pos += 3;
                    Ok(MwExpression::eta(self.field))
                } else {
                    Err(self.error("unknown identifier"))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(MwExpression::constant(self.field, n))
            }
            _ => Err(self.error("expected a factor")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldDescriptor {
        FieldDescriptor::finite(7).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let f = f7();
        let e = MwExpression::parse(&f, "eta*(2 + eta*[-1])").unwrap();
        assert_eq!(e.to_string(), "2*eta + eta*eta*[6]");
        assert_eq!(e.degree().unwrap(), Some(-1));
        let e = MwExpression::parse(&f, "[3][5] - 2[3]*[5]").unwrap();
        assert_eq!(e.to_string(), "-[3]*[5]");
        let e = MwExpression::parse(&f, "<3>").unwrap();
        assert_eq!(e.to_string(), "1 + eta*[3]");
        assert!(MwExpression::parse(&f, "[0]").is_err());
        assert!(MwExpression::parse(&f, "[3] +").is_err());
        assert!(MwExpression::parse(&f, "foo").is_err());
        assert!(MwExpression::parse(&f, "[3] + eta").unwrap().degree().is_err());
    }

    #[test]
    fn display_round_trips() {
        let f9 = FieldDescriptor::finite(9).unwrap();
        for text in ["[g^3]*eta - 4*[2]*[g]*eta + 7", "eta^3*[g^5]", "0", "-eta"] {
            let e = MwExpression::parse(&f9, text).unwrap();
            let again = MwExpression::parse(&f9, &e.to_string()).unwrap();
            assert_eq!(e, again);
        }
        let r = FieldDescriptor::real();
        let e = MwExpression::parse(&r, "[-3/2]*[5] + <-1>").unwrap();
        assert_eq!(MwExpression::parse(&r, &e.to_string()).unwrap(), e);
    }

    #[test]
    fn product_is_free() {
        let f = f7();
        let a = MwExpression::parse(&f, "[3]").unwrap();
        let b = MwExpression::parse(&f, "eta").unwrap();
        assert_ne!(mw_product(&a, &b).unwrap(), mw_product(&b, &a).unwrap());
        let ab = mw_product(&a, &b).unwrap();
        let m = &ab.terms()[0];
        assert_eq!(m.degree(), 0);
        assert_eq!(m.eta_power(), 1);
        assert_eq!(m.symbols().len(), 1);
    }
}
