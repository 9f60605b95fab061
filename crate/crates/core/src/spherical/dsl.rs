//! Parser and evaluator for the invariant-polynomial language: sums of
//! signed products of trace words over two algebra-valued slots, e.g.
//! `2*tr(X X Y)*tr(X Y) - tr(Y Y)`.
//!
//! Grammar:
//!   expr   := term (('+'|'-') term)*
//!   term   := scalar | [scalar '*'] trace ('*' trace)*
//!   trace  := 'tr(' word ')'
//!   word   := ('X'|'Y')+ separated by spaces
//!   scalar := decimal literal
//!
//! A bare scalar term denotes a constant polynomial (empty product of
//! traces), so the constant function `1` is expressible.

use nalgebra::DMatrix;

use crate::chevalley::{AlgebraElement, Representation};
use crate::error::{Error, Result};
use crate::C64;

/// One letter of a trace word: the first or second slot of the polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    X,
    Y,
}

/// A nonempty word over the two slots, standing for `tr(prod of slots)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceWord(pub Vec<Slot>);

/// One summand: a scalar coefficient times a product of trace words.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub words: Vec<TraceWord>,
}

/// A polynomial on pairs of algebra elements, invariant under the diagonal
/// adjoint action because it is built from traces in a fixed faithful
/// representation.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantPolynomial {
    pub source: String,
    pub terms: Vec<Term>,
}

impl InvariantPolynomial {
    /// The constant polynomial 1.
    pub fn one() -> Self {
        InvariantPolynomial {
            source: "1".to_string(),
            terms: vec![Term {
                coeff: 1.0,
                words: Vec::new(),
            }],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.words.is_empty())
    }

    pub fn constant_value(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.words.is_empty())
            .map(|t| t.coeff)
            .sum()
    }

    /// Largest total slot count over all terms.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.words.iter().map(|w| w.0.len()).sum())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate on already-represented matrices.
    pub fn eval_matrices(&self, x: &DMatrix<C64>, y: &DMatrix<C64>) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for term in &self.terms {
            let mut val = C64::new(term.coeff, 0.0);
            for word in &term.words {
                val *= trace_word(word, x, y);
            }
            acc += val;
        }
        acc
    }

    /// Evaluate on algebra elements through a representation.
    pub fn eval_elements(
        &self,
        rep: &Representation,
        x: &AlgebraElement,
        y: &AlgebraElement,
    ) -> Result<C64> {
        Ok(self.eval_matrices(&rep.image(x)?, &rep.image(y)?))
    }
}

fn trace_word(word: &TraceWord, x: &DMatrix<C64>, y: &DMatrix<C64>) -> C64 {
    let pick = |s: Slot| match s {
        Slot::X => x,
        Slot::Y => y,
    };
    let mut iter = word.0.iter();
    let first = pick(*iter.next().expect("words are nonempty"));
    let mut acc = first.clone();
    for &s in iter {
        acc *= pick(s);
    }
    acc.trace()
}

/// Parse the trace-polynomial language; errors carry the byte position.
pub fn parse_invariant(src: &str) -> Result<InvariantPolynomial> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.fail("unexpected trailing input"));
    }
    Ok(InvariantPolynomial {
        source: src.to_string(),
        terms: poly,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn fail(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        self.skip_ws();
        // Optional leading sign on the first term.
        let mut sign = 1.0;
        if self.eat(b'-') {
            sign = -1.0;
        } else {
            self.eat(b'+');
        }
        let mut terms = vec![self.term(sign)?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term(1.0)?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(self.term(-1.0)?);
                }
                _ => break,
            }
        }
        Ok(terms)
    }

    fn term(&mut self, sign: f64) -> Result<Term> {
        self.skip_ws();
        let mut coeff = sign;
        let mut words = Vec::new();
        if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            coeff *= self.scalar()?;
            self.skip_ws();
            if !self.eat(b'*') {
                // Bare scalar term.
                return Ok(Term { coeff, words });
            }
        }
        words.push(self.trace()?);
        loop {
            self.skip_ws();
            let mark = self.pos;
            if self.eat(b'*') {
                words.push(self.trace()?);
            } else {
                self.pos = mark;
                break;
            }
        }
        Ok(Term { coeff, words })
    }

    fn scalar(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E')
        {
            self.pos += 1;
            // Allow an exponent sign right after e/E.
            if matches!(self.src.get(self.pos - 1), Some(b'e') | Some(b'E'))
                && matches!(self.peek(), Some(b'+') | Some(b'-'))
            {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("invalid scalar literal `{text}`"),
        })
    }

    fn trace(&mut self) -> Result<TraceWord> {
        self.skip_ws();
        if !(self.eat(b't') && self.eat(b'r') && self.eat(b'(')) {
            return Err(self.fail("expected `tr(`"));
        }
        let mut word = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'X') | Some(b'x') => {
                    self.pos += 1;
                    word.push(Slot::X);
                }
                Some(b'Y') | Some(b'y') => {
                    self.pos += 1;
                    word.push(Slot::Y);
                }
                Some(b')') => {
                    if word.is_empty() {
                        return Err(self.fail("empty trace word"));
                    }
                    self.pos += 1;
                    return Ok(TraceWord(word));
                }
                _ => return Err(self.fail("expected `X`, `Y`, or `)` in trace word")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_word() {
        let p = parse_invariant("tr(X Y)").unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[0].coeff, 1.0);
        assert_eq!(p.terms[0].words, vec![TraceWord(vec![Slot::X, Slot::Y])]);
    }

    #[test]
    fn full_grammar_exercise() {
        let p = parse_invariant("2*tr(X X Y)*tr(X Y) - tr(Y Y)").unwrap();
        assert_eq!(p.terms.len(), 2);
        assert_eq!(p.terms[0].coeff, 2.0);
        assert_eq!(
            p.terms[0].words,
            vec![
                TraceWord(vec![Slot::X, Slot::X, Slot::Y]),
                TraceWord(vec![Slot::X, Slot::Y]),
            ]
        );
        assert_eq!(p.terms[1].coeff, -1.0);
        assert_eq!(p.terms[1].words, vec![TraceWord(vec![Slot::Y, Slot::Y])]);
    }

    #[test]
    fn empty_word_is_rejected_with_position() {
        let err = parse_invariant("tr()").unwrap_err();
        match err {
            Error::Parse { pos, .. } => assert_eq!(pos, 3),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn bare_scalar_is_a_constant() {
        let p = parse_invariant("1").unwrap();
        assert!(p.is_constant());
        assert_eq!(p.constant_value(), 1.0);
        let p = parse_invariant("2.5 - 1").unwrap();
        assert!(p.is_constant());
        assert_eq!(p.constant_value(), 1.5);
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(parse_invariant("tr(X) + ").is_err());
        assert!(parse_invariant("tr(Z)").is_err());
        assert!(parse_invariant("tr(X))").is_err());
        assert!(parse_invariant("").is_err());
        assert!(parse_invariant("* tr(X)").is_err());
    }

    #[test]
    fn degree_and_constant_detection() {
        let p = parse_invariant("tr(X Y X Y)").unwrap();
        assert_eq!(p.degree(), 4);
        assert!(!p.is_constant());
        assert_eq!(InvariantPolynomial::one().degree(), 0);
    }
}
