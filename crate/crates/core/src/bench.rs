//! Desk-scale benchmarks: `v_n` as a law over the catalog, and exhaustive
//! maxima of `k(w)` over short words.

use std::fmt;

use thiserror::Error;

use crate::catalog::GroupCatalog;
use crate::detect::{is_law, k_w, Detection, LawOutcome};
use crate::law::{law_word, LawError, LawRecipe};
use crate::word::Word;
use crate::wordgen::canonical_cyclic_words;

/// Longest words [`bench_f`] enumerates.
pub const MAX_BENCH_LENGTH: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error(transparent)]
    Law(#[from] LawError),
    #[error("v_{n} is not a law in {group}: counterexample {tuple:?}")]
    NotALaw { n: u64, group: String, tuple: Vec<usize> },
    #[error("v_{n} has length {length}, above the bound {bound}")]
    TooLong { n: u64, length: u64, bound: u64 },
    #[error("law check in {group} was inconclusive")]
    Inconclusive { group: String },
    #[error("word length cap is {MAX_BENCH_LENGTH}, got {0}")]
    LengthCap(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    /// Only orders up to the given bound were covered.
    Partial(usize),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => f.write_str("verified"),
            Verdict::Partial(b) => write!(f, "partial({})", b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VnRow {
    pub n: u64,
    pub length: u64,
    /// `4n²(n+1)`.
    pub length_bound: u64,
    /// `⌊n²/9⌋`: `v_n` is a law in every group up to this order.
    pub order_bound: usize,
    /// Orders actually checked: `min(order_bound, catalog bound)`.
    pub covered: usize,
    pub groups_checked: usize,
    pub verdict: Verdict,
}

impl VnRow {
    /// The implied datapoint `F(4n³ + 4n²) > ⌊n²/9⌋`, as `(argument, lower bound)`.
    pub fn growth_point(&self) -> (u64, usize) {
        (self.length_bound, self.order_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FRow {
    pub length: usize,
    /// Maximum of `k(w)` over reduced words of length `≤ length`; `None`
    /// when some word is not detected within the catalog.
    pub max_k: Option<usize>,
    pub word: Word,
    /// Canonical representatives examined at this exact length.
    pub words_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BenchReport {
    pub catalog_bound: usize,
    pub vn: Vec<VnRow>,
    pub f: Vec<FRow>,
}

/// Checks `v_n` against every catalog group of order `≤ ⌊n²/9⌋`.
pub fn bench_vn(ns: impl IntoIterator<Item = u64>, catalog: &GroupCatalog) -> Result<BenchReport, BenchError> {
    let mut report = BenchReport {
        catalog_bound: catalog.max_order(),
        ..Default::default()
    };
    for n in ns {
        let recipe = LawRecipe::descending(n)?;
        let w = law_word(n)?;
        let bound = recipe.length_bound();
        if w.len() > bound {
            return Err(BenchError::TooLong {
                n,
                length: w.len(),
                bound,
            });
        }
        let order_bound = (n * n / 9) as usize;
        let covered = order_bound.min(catalog.max_order());
        let mut groups_checked = 0;
        for e in catalog.up_to(covered) {
            match is_law(&w, &e.group) {
                LawOutcome::Law => groups_checked += 1,
                LawOutcome::Counterexample(tuple) => {
                    return Err(BenchError::NotALaw {
                        n,
                        group: e.id.clone(),
                        tuple,
                    })
                }
                LawOutcome::Inconclusive { .. } => return Err(BenchError::Inconclusive { group: e.id.clone() }),
            }
        }
        let verdict = if covered == order_bound {
            Verdict::Verified
        } else {
            Verdict::Partial(covered)
        };
        report.vn.push(VnRow {
            n,
            length: w.len(),
            length_bound: bound,
            order_bound,
            covered,
            groups_checked,
            verdict,
        });
    }
    Ok(report)
}

/// Maximum of `k(w)` over all reduced words of `F_2` of each length up to
/// `max_len`. Cyclically reduced words modulo symmetry suffice: every
/// reduced word is conjugate to a shorter or equal cyclically reduced one.
pub fn bench_f(max_len: usize, catalog: &GroupCatalog) -> Result<BenchReport, BenchError> {
    if max_len > MAX_BENCH_LENGTH {
        return Err(BenchError::LengthCap(max_len));
    }
    let mut report = BenchReport {
        catalog_bound: catalog.max_order(),
        ..Default::default()
    };
    // (k, word); k = None means undetected, which beats every value
    let mut best: Option<(Option<usize>, Word)> = None;
    for len in 1..=max_len {
        let words = canonical_cyclic_words(len);
        for w in &words {
            let k = match k_w(w, catalog).expect("nontrivial word") {
                Detection::Detected(r) => Some(r.min_order),
                Detection::Undetected { .. } => None,
                Detection::Inconclusive { group, .. } => return Err(BenchError::Inconclusive { group }),
            };
            let better = match &best {
                None => true,
                Some((b, _)) => match (k, *b) {
                    (_, None) => false,
                    (None, Some(_)) => true,
                    (Some(k), Some(b)) => k > b,
                },
            };
            if better {
                best = Some((k, w.clone()));
            }
        }
        let (max_k, word) = best.clone().expect("every length has words");
        report.f.push(FRow {
            length: len,
            max_k,
            word,
            words_checked: words.len(),
        });
    }
    Ok(report)
}
