//! Reduced words in the free group `F_k`.
//!
//! A [`Word`] is stored as a sequence of syllables `g^e` with nonzero
//! exponents and no two adjacent syllables on the same generator. That is the
//! run-length form of a freely reduced letter sequence, so every `Word` value
//! is reduced by construction. The run-length form keeps words like
//! `x^(12!)` cheap to hold and to evaluate.
//!
//! Generators are numbered `1..=rank`. The first four render as `x, y, z, w`
//! and inverses as the corresponding uppercase letter; higher generators render
//! as `g5, g6, ...`.

use std::fmt;

use thiserror::Error;

/// Upper bound on the number of syllables any constructed word may hold.
pub const MAX_SYLLABLES: usize = 1 << 24;

const NAMES: [char; 4] = ['x', 'y', 'z', 'w'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("word too long (exponent overflow or more than {MAX_SYLLABLES} syllables)")]
    TooLong,
}

/// A signed generator index: `+i` is the `i`-th generator, `-i` its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn from_signed(value: i32) -> Letter {
        Letter(value)
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generator();
        if g >= 1 && g <= NAMES.len() {
            let c = NAMES[g - 1];
            if self.is_inverse() {
                write!(f, "{}", c.to_ascii_uppercase())
            } else {
                write!(f, "{}", c)
            }
        } else if self.is_inverse() {
            write!(f, "G{}", g)
        } else {
            write!(f, "g{}", g)
        }
    }
}

/// Name of generator `index` (1-based), as used by the parser and renderer.
pub fn generator_name(index: usize) -> String {
    Letter::new(index, false).to_string()
}

/// Index of a lowercase generator name, if it is one of the named generators.
pub fn generator_index(name: char) -> Option<usize> {
    NAMES.iter().position(|&c| c == name).map(|i| i + 1)
}

/// One maximal run `g^e` of a reduced word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: i64,
}

/// A freely reduced word in the free group of the given rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word {
            rank,
            syllables: Vec::new(),
        }
    }

    /// The generator `index` (1-based) as a one-letter word.
    pub fn generator(rank: usize, index: usize) -> Result<Word, WordError> {
        Word::power_of_generator(rank, index, 1)
    }

    /// `g^exponent` for a single generator.
    pub fn power_of_generator(rank: usize, index: usize, exponent: i64) -> Result<Word, WordError> {
        check_index(rank, index)?;
        let syllables = if exponent == 0 {
            Vec::new()
        } else {
            vec![Syllable {
                generator: index,
                exponent,
            }]
        };
        Ok(Word { rank, syllables })
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce(letters: &[Letter], rank: usize) -> Result<Word, WordError> {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        let mut w = Word::identity(rank);
        for &l in letters {
            check_index(rank, l.generator())?;
            w.push(l.generator(), l.sign())?;
        }
        Ok(w)
    }

    /// Builds a word from `(generator, exponent)` pairs, reducing as it goes.
    pub fn from_syllables<I>(rank: usize, parts: I) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        let mut w = Word::identity(rank);
        for (g, e) in parts {
            check_index(rank, g)?;
            w.push(g, e)?;
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the word length `|w|`.
    pub fn len(&self) -> u64 {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Expands the word into individual letters.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let l = Letter::new(s.generator, s.exponent < 0);
            std::iter::repeat_n(l, s.exponent.unsigned_abs() as usize)
        })
    }

    /// Exponent sum of every generator (the image in the abelianization).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for s in &self.syllables {
            v[s.generator - 1] += s.exponent;
        }
        v
    }

    /// Largest generator index that actually occurs.
    pub fn max_generator(&self) -> usize {
        self.syllables.iter().map(|s| s.generator).max().unwrap_or(0)
    }

    /// Same letters, viewed in a free group of (possibly) larger rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word, WordError> {
        if self.max_generator() > rank {
            return Err(WordError::IndexOutOfRange {
                index: self.max_generator(),
                rank,
            });
        }
        Ok(Word {
            rank,
            syllables: self.syllables.clone(),
        })
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        same_rank(self, other)?;
        let mut w = self.clone();
        for s in &other.syllables {
            w.push(s.generator, s.exponent)?;
        }
        Ok(w)
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator,
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    /// `by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Word) -> Result<Word, WordError> {
        by.invert().multiply(self)?.multiply(by)
    }

    /// `[self, other] = self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &Word) -> Result<Word, WordError> {
        self.invert()
            .multiply(&other.invert())?
            .multiply(self)?
            .multiply(other)
    }

    pub fn pow(&self, exponent: i64) -> Result<Word, WordError> {
        if exponent == 0 || self.is_identity() {
            return Ok(Word::identity(self.rank));
        }
        if let [s] = self.syllables.as_slice() {
            let e = s.exponent.checked_mul(exponent).ok_or(WordError::TooLong)?;
            return Word::power_of_generator(self.rank, s.generator, e);
        }
        let mut base = if exponent < 0 { self.invert() } else { self.clone() };
        let mut n = exponent.unsigned_abs();
        let mut acc = Word::identity(self.rank);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    /// Conjugates the word to its cyclically reduced core.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.syllables.clone();
        loop {
            if s.len() < 2 {
                break;
            }
            let first = s[0];
            let last = s[s.len() - 1];
            if first.generator != last.generator {
                break;
            }
            // merge the last syllable into the first one
            s.pop();
            let e = first.exponent + last.exponent;
            if e == 0 {
                s.remove(0);
            } else {
                s[0].exponent = e;
                break;
            }
        }
        Word {
            rank: self.rank,
            syllables: s,
        }
    }

    /// Letter-by-letter rendering, e.g. `XXYXyxxYxy`.
    pub fn to_letter_string(&self) -> String {
        self.letters().map(|l| l.to_string()).collect()
    }

    fn push(&mut self, generator: usize, exponent: i64) -> Result<(), WordError> {
        if exponent == 0 {
            return Ok(());
        }
        match self.syllables.last_mut() {
            Some(last) if last.generator == generator => {
                let e = last
                    .exponent
                    .checked_add(exponent)
                    .ok_or(WordError::TooLong)?;
                if e == 0 {
                    self.syllables.pop();
                } else {
                    last.exponent = e;
                }
            }
            _ => {
                if self.syllables.len() >= MAX_SYLLABLES {
                    return Err(WordError::TooLong);
                }
                self.syllables.push(Syllable {
                    generator,
                    exponent,
                });
            }
        }
        Ok(())
    }
}

/// Compact rendering in expression syntax: `x^3Y^2x`. The identity renders as
/// `x^0` so that the output always parses.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "x^0");
        }
        for s in &self.syllables {
            let l = Letter::new(s.generator, s.exponent < 0);
            let n = s.exponent.unsigned_abs();
            if n == 1 {
                write!(f, "{}", l)?;
            } else {
                write!(f, "{}^{}", l, n)?;
            }
        }
        Ok(())
    }
}

fn check_index(rank: usize, index: usize) -> Result<(), WordError> {
    if index == 0 || index > rank {
        Err(WordError::IndexOutOfRange { index, rank })
    } else {
        Ok(())
    }
}

fn same_rank(a: &Word, b: &Word) -> Result<(), WordError> {
    if a.rank != b.rank {
        Err(WordError::RankMismatch {
            left: a.rank,
            right: b.rank,
        })
    } else {
        Ok(())
    }
}

/// Parses a plain letter string such as `xYyX` (no powers or brackets).
pub fn letters_from_str(s: &str) -> Option<Vec<Letter>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            generator_index(c.to_ascii_lowercase()).map(|g| Letter::new(g, c.is_ascii_uppercase()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str, rank: usize) -> Word {
        Word::reduce(&letters_from_str(s).unwrap(), rank).unwrap()
    }

    #[test]
    fn reduce_cancels() {
        assert!(w("xYyX", 2).is_identity());
        assert_eq!(w("xyY", 2).to_letter_string(), "x");
    }

    #[test]
    fn example_word_has_length_120() {
        let e = Word::from_syllables(3, [(3, 2), (2, 23), (1, 36), (2, 33), (3, -26)]).unwrap();
        assert_eq!(e.len(), 120);
        assert_eq!(e.syllables().len(), 5);
        assert_eq!(e.exponent_sums(), vec![36, 56, -24]);
    }

    #[test]
    fn index_out_of_range() {
        let err = Word::reduce(&[Letter::new(3, false)], 2).unwrap_err();
        assert_eq!(err, WordError::IndexOutOfRange { index: 3, rank: 2 });
    }

    #[test]
    fn multiply_and_invert() {
        assert!(w("x", 2).multiply(&w("X", 2)).unwrap().is_identity());
        assert_eq!(w("xy", 2).invert().to_letter_string(), "YX");
        assert_eq!(w("xy", 2).multiply(&w("Yx", 2)).unwrap().to_letter_string(), "xx");
        assert!(matches!(
            w("x", 2).multiply(&w("x", 3)),
            Err(WordError::RankMismatch { .. })
        ));
    }

    #[test]
    fn commutator_and_conjugate_conventions() {
        let c = w("x", 2).commutator(&w("y", 2)).unwrap();
        assert_eq!(c.to_letter_string(), "XYxy");
        assert_eq!(c.len(), 4);
        assert_eq!(w("x", 2).conjugate(&w("y", 2)).unwrap().to_letter_string(), "Yxy");
        let u = w("xyXXy", 2);
        assert!(u.commutator(&u).unwrap().is_identity());
    }

    #[test]
    fn pow_and_cyclic_reduction() {
        assert_eq!(w("xy", 2).pow(3).unwrap().to_letter_string(), "xyxyxy");
        assert_eq!(w("xy", 2).pow(-2).unwrap().to_letter_string(), "YXYX");
        assert_eq!(w("xyx", 2).pow(2).unwrap().to_letter_string(), "xyxxyx");
        assert_eq!(w("yxY", 2).cyclically_reduced().to_letter_string(), "x");
        assert_eq!(w("YxyX", 2).cyclically_reduced().to_letter_string(), "YxyX");
        assert_eq!(w("xxyX", 2).cyclically_reduced().to_letter_string(), "xy");
        let big = w("x", 2).pow(479_001_600).unwrap();
        assert_eq!(big.len(), 479_001_600);
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(w("XXYXyxxYxy", 2).to_string(), "X^2YXyx^2Yxy");
        assert_eq!(Word::identity(2).to_string(), "x^0");
        assert_eq!(Word::generator(5, 5).unwrap().to_string(), "g5");
    }

    fn arb_letters(rank: usize, max: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((1..=rank, any::<bool>()), 0..max)
            .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
    }

    fn naive_reduce(letters: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::new();
        for &l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(ls in arb_letters(3, 40)) {
            let a = Word::reduce(&ls, 3).unwrap();
            let b = Word::reduce(&a.letters().collect::<Vec<_>>(), 3).unwrap();
            prop_assert_eq!(&a, &b);
            let letters: Vec<Letter> = a.letters().collect();
            prop_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
            prop_assert_eq!(letters, naive_reduce(&ls));
        }

        #[test]
        fn group_axioms(a in arb_letters(2, 20), b in arb_letters(2, 20), c in arb_letters(2, 20)) {
            let (u, v, t) = (Word::reduce(&a, 2).unwrap(), Word::reduce(&b, 2).unwrap(), Word::reduce(&c, 2).unwrap());
            let left = u.multiply(&v).unwrap().multiply(&t).unwrap();
            let right = u.multiply(&v.multiply(&t).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert!(u.multiply(&u.invert()).unwrap().is_identity());
            prop_assert!(u.multiply(&v).unwrap().len() <= u.len() + v.len());
        }

        #[test]
        fn commutator_matches_sequential_reduction(a in arb_letters(2, 15), b in arb_letters(2, 15)) {
            let (u, v) = (Word::reduce(&a, 2).unwrap(), Word::reduce(&b, 2).unwrap());
            let mut raw: Vec<Letter> = Vec::new();
            raw.extend(a.iter().rev().map(|l| l.inverse()));
            raw.extend(b.iter().rev().map(|l| l.inverse()));
            raw.extend(a.iter().copied());
            raw.extend(b.iter().copied());
            let expected = naive_reduce(&raw);
            let got: Vec<Letter> = u.commutator(&v).unwrap().letters().collect();
            prop_assert_eq!(got, expected);
        }
    }
}
