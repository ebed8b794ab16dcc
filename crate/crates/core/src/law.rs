//! Law words: `x^(n!)`, the iterated commutator `w_{r1,...,rm}` and
//! `v_n = w_{n,n-1,...,1}`.
//!
//! The commutator word is built on a balanced binary tree whose leaves carry
//! the exponents in the given (descending) order. Odd-numbered leaves are
//! `x^r`, even-numbered ones the conjugate `(x^r)^y`, and an internal node is
//! the commutator of its children, split at `ceil(m/2)`. If `x` is sent to an
//! element whose order divides some `r_i`, the corresponding leaf vanishes and
//! the vanishing propagates to the root since `[1, u] = [u, 1] = 1`.

use std::fmt;

use thiserror::Error;

use crate::parse::WordExpr;
use crate::word::{Word, WordError};

/// Largest `n` accepted by [`power_law`]; `12!` still fits comfortably.
pub const MAX_FACTORIAL_N: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("exponent list must be nonempty")]
    Empty,
    #[error("exponents must be positive and strictly decreasing: {0:?}")]
    NotDecreasing(Vec<u64>),
    #[error("n = {0} is outside the supported range")]
    OutOfRange(u64),
    #[error("constructed word reduced to the identity for exponents {0:?}")]
    Trivial(Vec<u64>),
    #[error("constructed word has length {length}, above the bound {bound}")]
    BoundExceeded { length: u64, bound: u64 },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// One node of the commutator tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawTree {
    /// Leaf number `position` (1-based) carrying `x^exponent`, conjugated by
    /// `y` when `position` is even.
    Leaf { position: usize, exponent: u64 },
    Commutator(Box<LawTree>, Box<LawTree>),
}

impl LawTree {
    fn build(exponents: &[u64], first_position: usize) -> LawTree {
        if exponents.len() == 1 {
            return LawTree::Leaf {
                position: first_position,
                exponent: exponents[0],
            };
        }
        let split = exponents.len().div_ceil(2);
        let left = LawTree::build(&exponents[..split], first_position);
        let right = LawTree::build(&exponents[split..], first_position + split);
        LawTree::Commutator(Box::new(left), Box::new(right))
    }

    /// Leaf exponents in left-to-right order.
    pub fn exponents(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<u64>) {
        match self {
            LawTree::Leaf { exponent, .. } => out.push(*exponent),
            LawTree::Commutator(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn to_expr(&self) -> WordExpr {
        match self {
            LawTree::Leaf { position, exponent } => {
                let x = WordExpr::generator('x');
                let p = if *exponent == 1 { x } else { x.power(*exponent as i64) };
                if position % 2 == 0 {
                    p.conjugate(WordExpr::generator('y'))
                } else {
                    p
                }
            }
            LawTree::Commutator(a, b) => a.to_expr().commutator(b.to_expr()),
        }
    }

    pub fn to_word(&self) -> Result<Word, WordError> {
        match self {
            LawTree::Leaf { position, exponent } => {
                let p = Word::power_of_generator(2, 1, *exponent as i64)?;
                if position % 2 == 0 {
                    p.conjugate(&Word::generator(2, 2)?)
                } else {
                    Ok(p)
                }
            }
            LawTree::Commutator(a, b) => a.to_word()?.commutator(&b.to_word()?),
        }
    }
}

/// The exponent sequence together with its commutator tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawRecipe {
    exponents: Vec<u64>,
    tree: LawTree,
}

impl LawRecipe {
    pub fn new(exponents: &[u64]) -> Result<LawRecipe, LawError> {
        if exponents.is_empty() {
            return Err(LawError::Empty);
        }
        let decreasing = exponents.windows(2).all(|p| p[0] > p[1]);
        if !decreasing || exponents[exponents.len() - 1] == 0 {
            return Err(LawError::NotDecreasing(exponents.to_vec()));
        }
        if exponents[0] > i64::MAX as u64 {
            return Err(LawError::OutOfRange(exponents[0]));
        }
        Ok(LawRecipe {
            exponents: exponents.to_vec(),
            tree: LawTree::build(exponents, 1),
        })
    }

    /// Recipe for `v_n`: exponents `n, n-1, ..., 1`.
    pub fn descending(n: u64) -> Result<LawRecipe, LawError> {
        if n < 1 {
            return Err(LawError::OutOfRange(n));
        }
        let exps: Vec<u64> = (1..=n).rev().collect();
        LawRecipe::new(&exps)
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn tree(&self) -> &LawTree {
        &self.tree
    }

    /// The two top-level subtrees, or `None` for a single leaf.
    pub fn halves(&self) -> Option<(&LawTree, &LawTree)> {
        match &self.tree {
            LawTree::Leaf { .. } => None,
            LawTree::Commutator(a, b) => Some((a, b)),
        }
    }

    /// The length bound `4 m^2 (r1 + 1)`.
    pub fn length_bound(&self) -> u64 {
        let m = self.exponents.len() as u64;
        4 * m * m * (self.exponents[0] + 1)
    }

    /// Builds the reduced word, checking nontriviality and the length bound.
    pub fn word(&self) -> Result<Word, LawError> {
        let w = self.tree.to_word()?;
        if w.is_identity() {
            return Err(LawError::Trivial(self.exponents.clone()));
        }
        let bound = self.length_bound();
        if w.len() > bound {
            return Err(LawError::BoundExceeded {
                length: w.len(),
                bound,
            });
        }
        Ok(w)
    }
}

impl fmt::Display for LawRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tree.to_expr())
    }
}

/// `x^(n!)` in `F_2`, a law in every group of order at most `n`.
pub fn power_law(n: u64) -> Result<Word, LawError> {
    if !(1..=MAX_FACTORIAL_N).contains(&n) {
        return Err(LawError::OutOfRange(n));
    }
    let factorial: u64 = (1..=n).product();
    Ok(Word::power_of_generator(2, 1, factorial as i64)?)
}

/// The commutator word `w_{r1,...,rm}`.
pub fn commutator_word(exponents: &[u64]) -> Result<Word, LawError> {
    LawRecipe::new(exponents)?.word()
}

/// `v_n = w_{n,n-1,...,1}`.
pub fn law_word(n: u64) -> Result<Word, LawError> {
    LawRecipe::descending(n)?.word()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;

    #[test]
    fn power_law_values() {
        assert_eq!(power_law(1).unwrap().to_letter_string(), "x");
        assert_eq!(power_law(3).unwrap().len(), 6);
        assert_eq!(power_law(12).unwrap().len(), 479_001_600);
        assert_eq!(power_law(0), Err(LawError::OutOfRange(0)));
        assert_eq!(power_law(13), Err(LawError::OutOfRange(13)));
    }

    #[test]
    fn small_commutator_words() {
        assert_eq!(commutator_word(&[7]).unwrap().to_letter_string(), "xxxxxxx");
        let w = commutator_word(&[2, 1]).unwrap();
        assert_eq!(w.to_letter_string(), "XXYXyxxYxy");
        assert_eq!(w.len(), 10);
        assert_eq!(LawRecipe::new(&[2, 1]).unwrap().length_bound(), 48);
        assert_eq!(law_word(2).unwrap(), w);
        assert_eq!(law_word(1).unwrap().to_letter_string(), "x");
    }

    #[test]
    fn four_leaves_match_the_nested_commutator() {
        let (a, b, c, d) = (9, 5, 4, 2);
        let expected = parse_word(&format!("[[x^{a},(x^{b})^y],[x^{c},(x^{d})^y]]")).unwrap();
        assert_eq!(commutator_word(&[a, b, c, d]).unwrap(), expected);
        let r = LawRecipe::new(&[a, b, c, d]).unwrap();
        assert_eq!(r.to_string(), "[[x^9,(x^5)^y],[x^4,(x^2)^y]]");
    }

    #[test]
    fn rejects_bad_exponents() {
        assert_eq!(commutator_word(&[]), Err(LawError::Empty));
        assert!(matches!(commutator_word(&[2, 2]), Err(LawError::NotDecreasing(_))));
        assert!(matches!(commutator_word(&[1, 2]), Err(LawError::NotDecreasing(_))));
        assert!(matches!(commutator_word(&[3, 0]), Err(LawError::NotDecreasing(_))));
        assert_eq!(law_word(0), Err(LawError::OutOfRange(0)));
    }

    #[test]
    fn halves_partition_at_ceiling() {
        for m in 2..=12u64 {
            let r = LawRecipe::descending(m).unwrap();
            let (a, b) = r.halves().unwrap();
            let split = (m as usize).div_ceil(2);
            assert_eq!(a.exponents(), r.exponents()[..split].to_vec());
            assert_eq!(b.exponents(), r.exponents()[split..].to_vec());
        }
    }

    fn decreasing_sequences(max: u64, max_len: usize) -> Vec<Vec<u64>> {
        // all nonempty subsets of {1..max} with at most max_len elements
        let mut out = Vec::new();
        for mask in 1u32..(1 << max) {
            if mask.count_ones() as usize > max_len {
                continue;
            }
            let v: Vec<u64> = (1..=max).rev().filter(|i| mask & (1 << (i - 1)) != 0).collect();
            out.push(v);
        }
        out
    }

    #[test]
    fn nontrivial_and_bounded_for_all_small_sequences() {
        for r in decreasing_sequences(12, 12) {
            let recipe = LawRecipe::new(&r).unwrap();
            let w = recipe.word().unwrap();
            assert!(!w.is_identity());
            assert!(w.len() <= recipe.length_bound(), "{:?}", r);
        }
    }

    #[test]
    fn nontrivial_and_bounded_for_random_larger_sequences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = rng.gen_range(1..=24);
            let mut v: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=500)).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v.dedup();
            let recipe = LawRecipe::new(&v).unwrap();
            let w = recipe.word().unwrap();
            assert!(w.len() <= recipe.length_bound());
        }
    }

    #[test]
    fn split_property_for_vn() {
        for n in 1..=64u64 {
            let r = LawRecipe::descending(n).unwrap();
            let Some((a, b)) = r.halves() else {
                assert_eq!(n, 1);
                continue;
            };
            let (a, b) = (a.exponents(), b.exponents());
            for l in 1..=n / 3 {
                assert!(a.iter().any(|e| e % l == 0), "n={n} l={l}");
                assert!(b.iter().any(|e| e % l == 0), "n={n} l={l}");
            }
        }
    }
}
