//! Word expressions: `[x^2,(x)^y]`, `xYyX`, `(xy)^-3`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := factor+
//! factor := atom ('^' (signed-integer | atom))*
//! atom   := letter | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! Uppercase letters are inverses. `a^b` with an atom operand is the conjugate
//! `b⁻¹ab`; with an integer it is a power. Juxtaposition is the product.

use std::fmt;

use thiserror::Error;

use crate::word::{generator_index, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordExpr {
    Generator(char),
    Inverse(Box<WordExpr>),
    Product(Vec<WordExpr>),
    Power(Box<WordExpr>, i64),
    Conjugate { base: Box<WordExpr>, by: Box<WordExpr> },
    Commutator(Box<WordExpr>, Box<WordExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(char),
    #[error(transparent)]
    Word(#[from] WordError),
}

impl WordExpr {
    pub fn generator(name: char) -> WordExpr {
        WordExpr::Generator(name)
    }

    pub fn power(self, exponent: i64) -> WordExpr {
        WordExpr::Power(Box::new(self), exponent)
    }

    pub fn conjugate(self, by: WordExpr) -> WordExpr {
        WordExpr::Conjugate {
            base: Box::new(self),
            by: Box::new(by),
        }
    }

    pub fn commutator(self, other: WordExpr) -> WordExpr {
        WordExpr::Commutator(Box::new(self), Box::new(other))
    }

    /// Highest generator index named in the expression (0 if none).
    pub fn max_generator(&self) -> Result<usize, ParseError> {
        Ok(match self {
            WordExpr::Generator(c) => generator_index(*c).ok_or(ParseError::UnknownGenerator(*c))?,
            WordExpr::Inverse(e) | WordExpr::Power(e, _) => e.max_generator()?,
            WordExpr::Product(es) => {
                let mut m = 0;
                for e in es {
                    m = m.max(e.max_generator()?);
                }
                m
            }
            WordExpr::Conjugate { base, by } => base.max_generator()?.max(by.max_generator()?),
            WordExpr::Commutator(a, b) => a.max_generator()?.max(b.max_generator()?),
        })
    }

    /// Evaluates the expression to a reduced word in `F_rank`.
    pub fn flatten(&self, rank: usize) -> Result<Word, ParseError> {
        Ok(match self {
            WordExpr::Generator(c) => {
                let g = generator_index(*c).ok_or(ParseError::UnknownGenerator(*c))?;
                if g > rank {
                    return Err(ParseError::UnknownGenerator(*c));
                }
                Word::generator(rank, g)?
            }
            WordExpr::Inverse(e) => e.flatten(rank)?.invert(),
            WordExpr::Product(es) => {
                let mut acc = Word::identity(rank);
                for e in es {
                    acc = acc.multiply(&e.flatten(rank)?)?;
                }
                acc
            }
            WordExpr::Power(e, n) => e.flatten(rank)?.pow(*n)?,
            WordExpr::Conjugate { base, by } => base.flatten(rank)?.conjugate(&by.flatten(rank)?)?,
            WordExpr::Commutator(a, b) => a.flatten(rank)?.commutator(&b.flatten(rank)?)?,
        })
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Generator(c) => write!(f, "{}", c),
            WordExpr::Inverse(e) => match e.as_ref() {
                WordExpr::Generator(c) => write!(f, "{}", c.to_ascii_uppercase()),
                other => write!(f, "({})^-1", other),
            },
            WordExpr::Product(es) => {
                for e in es {
                    match e {
                        WordExpr::Product(_) => write!(f, "({})", e)?,
                        _ => write!(f, "{}", e)?,
                    }
                }
                Ok(())
            }
            WordExpr::Power(e, n) => {
                write_operand(f, e)?;
                write!(f, "^{}", n)
            }
            WordExpr::Conjugate { base, by } => {
                write_operand(f, base)?;
                write!(f, "^")?;
                write_operand(f, by)
            }
            WordExpr::Commutator(a, b) => write!(f, "[{},{}]", a, b),
        }
    }
}

// Operands of '^' must be atoms: a bare letter or a bracketed expression.
fn write_operand(f: &mut fmt::Formatter<'_>, e: &WordExpr) -> fmt::Result {
    match e {
        WordExpr::Generator(_) | WordExpr::Commutator(..) => write!(f, "{}", e),
        _ => write!(f, "({})", e),
    }
}

/// Parses a word expression.
pub fn parse(text: &str) -> Result<WordExpr, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

/// Parses and flattens, choosing the rank as the larger of 2 and the highest
/// generator named.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let e = parse(text)?;
    let rank = e.max_generator()?.max(2);
    e.flatten(rank)
}

/// Parses and flattens into a fixed rank.
pub fn parse_word_with_rank(text: &str, rank: usize) -> Result<Word, ParseError> {
    parse(text)?.flatten(rank)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message,
        }
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

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(format!("expected '{}', found '{}'", c, d))),
            None => Err(self.error(format!("expected '{}', found end of input", c))),
        }
    }

    fn starts_atom(c: char) -> bool {
        c.is_ascii_alphabetic() || c == '(' || c == '['
    }

    fn expr(&mut self) -> Result<WordExpr, ParseError> {
        let mut factors = Vec::new();
        while let Some(c) = self.peek() {
            if !Self::starts_atom(c) {
                break;
            }
            factors.push(self.factor()?);
        }
        match factors.len() {
            0 => Err(match self.peek() {
                Some(c) => self.error(format!("expected a word, found '{}'", c)),
                None => self.error("expected a word, found end of input".to_string()),
            }),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(WordExpr::Product(factors)),
        }
    }

    fn factor(&mut self) -> Result<WordExpr, ParseError> {
        let mut e = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c == '-' || c == '+' || c.is_ascii_digit() => {
                    let n = self.integer()?;
                    e = e.power(n);
                }
                Some(c) if Self::starts_atom(c) => {
                    let by = self.atom()?;
                    e = e.conjugate(by);
                }
                Some(c) => return Err(self.error(format!("expected exponent, found '{}'", c))),
                None => return Err(self.error("expected exponent, found end of input".into())),
            }
        }
        Ok(e)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut negative = false;
        if let Some(&c) = self.chars.get(self.pos) {
            if c == '-' || c == '+' {
                negative = c == '-';
                self.pos += 1;
            }
        }
        self.skip_ws();
        let digits_start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return Err(self.error("expected digits".into()));
        }
        let digits: String = self.chars[digits_start..self.pos].iter().collect();
        let value: i64 = digits.parse().map_err(|_| ParseError::Syntax {
            position: start,
            message: "exponent out of range".into(),
        })?;
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<WordExpr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(a.commutator(b))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let g = WordExpr::Generator(c.to_ascii_lowercase());
                if c.is_ascii_uppercase() {
                    Ok(WordExpr::Inverse(Box::new(g)))
                } else {
                    Ok(g)
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;
    use proptest::prelude::*;

    fn flat(s: &str) -> String {
        parse_word(s).unwrap().to_letter_string()
    }

    #[test]
    fn basic_expressions() {
        assert_eq!(flat("[x,y]"), "XYxy");
        assert_eq!(flat("x^3"), "xxx");
        assert_eq!(flat("[x^2,(x)^y]"), "XXYXyxxYxy");
        assert_eq!(parse_word("[x^2,(x)^y]").unwrap().len(), 10);
        assert_eq!(flat("x^y"), "Yxy");
        assert_eq!(flat("(xy)^-2"), "YXYX");
        assert_eq!(flat("X^2"), "XX");
        assert_eq!(flat(" x  Y y X "), "");
        assert_eq!(flat("x^0"), "");
        assert_eq!(flat("x^y^2"), "Yxxy");
        assert_eq!(flat("x^(y^2)"), "YYxyy");
    }

    #[test]
    fn rank_inference() {
        assert_eq!(parse_word("x").unwrap().rank(), 2);
        assert_eq!(parse_word("z^2y^23x^36y^33z^-26").unwrap().rank(), 3);
        assert_eq!(parse_word("z^2y^23x^36y^33z^-26").unwrap().len(), 120);
    }

    #[test]
    fn errors_carry_position() {
        match parse("[x,y").unwrap_err() {
            ParseError::Syntax { position, .. } => assert_eq!(position, 4),
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(parse("x^"), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse(""), Err(ParseError::Syntax { position: 0, .. })));
        assert!(matches!(parse("x)"), Err(ParseError::Syntax { position: 1, .. })));
        assert_eq!(parse_word("q").unwrap_err(), ParseError::UnknownGenerator('q'));
        assert_eq!(
            parse_word_with_rank("z", 2).unwrap_err(),
            ParseError::UnknownGenerator('z')
        );
    }

    #[test]
    fn expression_display_reparses() {
        let e = parse("[[x^4,(x^3)^y],[x^2,(x)^y]]").unwrap();
        let again = parse(&e.to_string()).unwrap();
        assert_eq!(e.flatten(2).unwrap(), again.flatten(2).unwrap());
    }

    proptest! {
        #[test]
        fn render_round_trip(ls in prop::collection::vec((1usize..=4, any::<bool>()), 0..30)) {
            let letters: Vec<Letter> = ls.into_iter().map(|(g, i)| Letter::new(g, i)).collect();
            let w = Word::reduce(&letters, 4).unwrap();
            prop_assert_eq!(parse_word_with_rank(&w.to_string(), 4).unwrap(), w.clone());
            if !w.is_identity() {
                prop_assert_eq!(parse_word_with_rank(&w.to_letter_string(), 4).unwrap(), w);
            }
        }
    }
}
