//! Enumeration of reduced words in `F_2`, optionally up to symmetry.
//!
//! Letters are coded `0 = x, 1 = X, 2 = y, 3 = Y`; `c ^ 1` is the inverse.

use rand::Rng;

use crate::word::{Letter, Word};

fn letter(code: u8) -> Letter {
    Letter::new((code / 2 + 1) as usize, code % 2 == 1)
}

fn to_word(codes: &[u8]) -> Word {
    let letters: Vec<Letter> = codes.iter().map(|&c| letter(c)).collect();
    Word::reduce(&letters, 2).expect("rank 2 letters")
}

/// Calls `f` on the letter codes of every reduced word of length `len`.
fn for_each_reduced(len: usize, cyclic: bool, f: &mut dyn FnMut(&[u8])) {
    fn go(buf: &mut Vec<u8>, len: usize, cyclic: bool, f: &mut dyn FnMut(&[u8])) {
        if buf.len() == len {
            if !cyclic || len < 2 || buf[0] != buf[len - 1] ^ 1 {
                f(buf);
            }
            return;
        }
        for c in 0..4u8 {
            if let Some(&last) = buf.last() {
                if c == last ^ 1 {
                    continue;
                }
            }
            buf.push(c);
            go(buf, len, cyclic, f);
            buf.pop();
        }
    }
    if len == 0 {
        f(&[]);
        return;
    }
    go(&mut Vec::with_capacity(len), len, cyclic, f);
}

/// Every reduced word of `F_2` of exactly the given length (`4·3^(len-1)` of them).
pub fn reduced_words(len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_reduced(len, false, &mut |c| out.push(to_word(c)));
    out
}

/// The 8 automorphisms of `F_2` permuting `{x, X, y, Y}` as signed generators.
const SIGNED_PERMS: [[u8; 4]; 8] = [
    [0, 1, 2, 3],
    [1, 0, 2, 3],
    [0, 1, 3, 2],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 0, 1],
    [2, 3, 1, 0],
    [3, 2, 1, 0],
];

/// Whether `codes` (cyclically reduced) is the lexicographically least
/// element of its orbit under rotation, inversion and signed generator
/// permutation.
fn is_canonical(codes: &[u8]) -> bool {
    let n = codes.len();
    let mut image = vec![0u8; n];
    for sp in &SIGNED_PERMS {
        for inverted in [false, true] {
            for (k, slot) in image.iter_mut().enumerate() {
                *slot = if inverted {
                    sp[(codes[n - 1 - k] ^ 1) as usize]
                } else {
                    sp[codes[k] as usize]
                };
            }
            for r in 0..n {
                // compare rotation image[r..] ++ image[..r] with codes
                for k in 0..n {
                    let a = image[(r + k) % n];
                    let b = codes[k];
                    if a < b {
                        return false;
                    }
                    if a > b {
                        break;
                    }
                }
            }
        }
    }
    true
}

/// One representative per orbit of cyclically reduced words of the given
/// length under conjugation, inversion and signed generator permutations.
/// Laws and the detection value `k` are constant on these orbits.
pub fn canonical_cyclic_words(len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_reduced(len, true, &mut |c| {
        if is_canonical(c) {
            out.push(to_word(c));
        }
    });
    out
}

/// A uniformly random reduced word of `F_2` of the given length.
pub fn random_reduced_word<R: Rng>(rng: &mut R, len: usize) -> Word {
    let mut codes: Vec<u8> = Vec::with_capacity(len);
    while codes.len() < len {
        let c = rng.gen_range(0..4u8);
        if codes.last().is_none_or(|&l| l != c ^ 1) {
            codes.push(c);
        }
    }
    to_word(&codes)
}

/// `count` random reduced words, each of a length drawn uniformly from `1..=max_len`.
pub fn random_reduced_words<R: Rng>(rng: &mut R, count: usize, max_len: usize) -> Vec<Word> {
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            random_reduced_word(rng, len)
        })
        .collect()
}
