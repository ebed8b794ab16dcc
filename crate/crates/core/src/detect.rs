//! Evaluating words in finite groups: laws, detection values, shortest laws
//! and `PSL_2(F_p)` witnesses.
//!
//! Tuple scans run over the generators that actually occur in the word; the
//! others are sent to the identity, which changes nothing. The first occurring
//! generator ranges over conjugacy-class representatives only: conjugating a
//! counterexample by `h` gives another one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::GroupCatalog;
use crate::group::FiniteGroup;
use crate::matrix::{next_prime_above, Mat2};
use crate::word::Word;
use crate::wordgen::canonical_cyclic_words;

/// Default limit on the number of tuples a single law check may visit.
pub const DEFAULT_TUPLE_CAP: u128 = 100_000_000;
/// Above this order only words in at most two generators are scanned.
pub const LARGE_ORDER: usize = 512;
/// Default limit on `word count × |Γ|²` for [`shortest_law`].
pub const DEFAULT_SHORTEST_LAW_CAP: u128 = 10_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("expected {expected} images, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("element {0} out of range")]
    Element(usize),
    #[error("the word is trivial")]
    TrivialWord,
    #[error("the vector is zero")]
    ZeroVector,
}

/// Generators (1-based) occurring in `w`, ascending.
fn occurring(w: &Word) -> Vec<usize> {
    let mut g: Vec<usize> = w.syllables().iter().map(|s| s.generator).collect();
    g.sort_unstable();
    g.dedup();
    g
}

/// `w` evaluated with generator `i` (1-based) sent to `images[i - 1]`.
pub fn evaluate(w: &Word, images: &[usize], group: &FiniteGroup) -> Result<usize, DetectError> {
    if images.len() != w.rank() {
        return Err(DetectError::Arity {
            expected: w.rank(),
            got: images.len(),
        });
    }
    if let Some(&bad) = images.iter().find(|&&g| g >= group.order()) {
        return Err(DetectError::Element(bad));
    }
    Ok(eval_unchecked(w, images, group))
}

fn eval_unchecked(w: &Word, images: &[usize], group: &FiniteGroup) -> usize {
    w.syllables().iter().fold(0, |acc, s| {
        let g = images[s.generator - 1];
        let v = match s.exponent {
            1 => g,
            -1 => group.inverse(g),
            e => group.pow(g, e),
        };
        group.mul(acc, v)
    })
}

/// Three-valued answer of a bounded law check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawOutcome {
    Law,
    /// The first counterexample in scan order (a full tuple, one image per generator).
    Counterexample(Vec<usize>),
    /// The scan would exceed its budget.
    Inconclusive { tuples: u128, cap: u128 },
}

impl LawOutcome {
    pub fn is_law(&self) -> Option<bool> {
        match self {
            LawOutcome::Law => Some(true),
            LawOutcome::Counterexample(_) => Some(false),
            LawOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Number of tuples [`is_law_capped`] would visit in the worst case.
pub fn scan_cost(w: &Word, group: &FiniteGroup) -> u128 {
    let k = occurring(w).len();
    if k == 0 {
        return 0;
    }
    let reps = group.class_representatives().len() as u128;
    (1..k).fold(reps, |acc, _| acc.saturating_mul(group.order() as u128))
}

/// Whether `w` is a law in `group`, with the default tuple cap.
pub fn is_law(w: &Word, group: &FiniteGroup) -> LawOutcome {
    is_law_capped(w, group, DEFAULT_TUPLE_CAP)
}

/// Whether `w` is a law in `group`, giving up past `cap` tuples.
///
/// Parallel over the first coordinate; the reported counterexample is the
/// first one in scan order regardless of thread count.
pub fn is_law_capped(w: &Word, group: &FiniteGroup, cap: u128) -> LawOutcome {
    let gens = occurring(w);
    if gens.is_empty() {
        return LawOutcome::Law;
    }
    let tuples = scan_cost(w, group);
    if tuples > cap || (group.order() > LARGE_ORDER && gens.len() > 2) {
        return LawOutcome::Inconclusive { tuples, cap };
    }
    let n = group.order();
    let reps = group.class_representatives();
    let found = reps.par_iter().find_map_first(|&first| {
        let mut images = vec![0usize; w.rank()];
        images[gens[0] - 1] = first;
        let rest = &gens[1..];
        loop {
            if eval_unchecked(w, &images, group) != 0 {
                return Some(images);
            }
            // odometer over the remaining coordinates, last one fastest
            let mut k = rest.len();
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                let slot = &mut images[rest[k] - 1];
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
    });
    match found {
        Some(t) => LawOutcome::Counterexample(t),
        None => LawOutcome::Law,
    }
}

/// A group of minimal order detecting a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionResult {
    pub word: Word,
    pub min_order: usize,
    /// Catalog id of the witness group.
    pub witness_group: String,
    pub witness_name: String,
    pub witness_tuple: Vec<usize>,
    /// Index of the non-identity value `w(witness_tuple)`.
    pub witness_value: usize,
    /// Order through which the catalog is complete.
    pub exhaustive_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detection {
    Detected(DetectionResult),
    /// No catalog group detects the word: `k(w) > exhaustive_bound`.
    Undetected { exhaustive_bound: usize },
    /// A group scanned before any detection could not be decided.
    Inconclusive { group: String, tuples: u128, cap: u128 },
}

/// The detection value `k(w)`: the least order of a catalog group with a
/// tuple on which `w` is not the identity.
pub fn k_w(w: &Word, catalog: &GroupCatalog) -> Result<Detection, DetectError> {
    if w.is_identity() {
        return Err(DetectError::TrivialWord);
    }
    for entry in catalog.entries() {
        let g = &entry.group;
        match is_law(w, g) {
            LawOutcome::Law => continue,
            LawOutcome::Counterexample(t) => {
                let value = eval_unchecked(w, &t, g);
                return Ok(Detection::Detected(DetectionResult {
                    word: w.clone(),
                    min_order: g.order(),
                    witness_group: entry.id.clone(),
                    witness_name: g.name().to_string(),
                    witness_tuple: t,
                    witness_value: value,
                    exhaustive_bound: catalog.max_order(),
                }));
            }
            LawOutcome::Inconclusive { tuples, cap } => {
                return Ok(Detection::Inconclusive {
                    group: entry.id.clone(),
                    tuples,
                    cap,
                })
            }
        }
    }
    Ok(Detection::Undetected {
        exhaustive_bound: catalog.max_order(),
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least order of a finite abelian group detecting `v ∈ Z^k`: the smallest
/// `m ≥ 2` not dividing the gcd of the entries.
pub fn abelian_k(v: &[i64]) -> Result<u64, DetectError> {
    let g = v.iter().fold(0u64, |acc, &x| gcd(acc, x.unsigned_abs()));
    if g == 0 {
        return Err(DetectError::ZeroVector);
    }
    Ok((2..).find(|m| g % m != 0).expect("some integer does not divide g"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShortestLaw {
    Found { word: Word, length: u64 },
    /// No law of length `≤ max_len`.
    NoneUpTo { max_len: usize },
    Inconclusive { cost: u128, cap: u128 },
}

/// Shortest law of `group` in `F_2` with length at most `max_len`, up to
/// rotation, inversion and signed generator permutations.
pub fn shortest_law(group: &FiniteGroup, max_len: usize, cap: u128) -> ShortestLaw {
    // 4·3^(L-1) reduced words of length L
    let words: u128 = (1..=max_len as u32).map(|l| 4 * 3u128.saturating_pow(l - 1)).sum();
    let n = group.order() as u128;
    let cost = words.saturating_mul(n * n);
    if cost > cap {
        return ShortestLaw::Inconclusive { cost, cap };
    }
    for len in 1..=max_len {
        for w in canonical_cyclic_words(len) {
            match is_law_capped(&w, group, u128::MAX) {
                LawOutcome::Law => return ShortestLaw::Found { word: w, length: len as u64 },
                LawOutcome::Counterexample(_) => {}
                LawOutcome::Inconclusive { tuples, cap } => return ShortestLaw::Inconclusive { cost: tuples, cap },
            }
        }
    }
    ShortestLaw::NoneUpTo { max_len }
}

/// Search budget for [`psl2_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Psl2Budget {
    pub sweep: u64,
    pub random: u64,
    pub seed: u64,
}

impl Default for Psl2Budget {
    fn default() -> Self {
        Psl2Budget {
            sweep: 100_000,
            random: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPhase {
    Sweep,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Psl2Witness {
    pub p: u32,
    /// `(p³ − p) / 2`, an upper bound for `k(w)`.
    pub group_order: u64,
    /// One matrix per generator of the word (identity for unused ones).
    pub tuple: Vec<Mat2>,
    pub value: Mat2,
    pub phase: SearchPhase,
    pub attempts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Psl2Outcome {
    Witness(Psl2Witness),
    Inconclusive { p: u32, budget: Psl2Budget },
}

/// `w` evaluated in `SL_2(F_p)`.
pub fn evaluate_sl2(w: &Word, images: &[Mat2], p: u32) -> Mat2 {
    w.syllables().iter().fold(Mat2::IDENTITY, |acc, s| {
        let g = images[s.generator - 1];
        let base = if s.exponent < 0 { g.inverse_sl(p) } else { g };
        acc.mul(&base.pow(s.exponent.unsigned_abs(), p), p)
    })
}

/// The prime used by [`psl2_witness`]: the smallest prime `p > 3|w| + 1`.
pub fn psl2_prime(w: &Word) -> u32 {
    next_prime_above(3 * w.len() + 1) as u32
}

/// Unipotent and diagonal matrices swept before random sampling.
fn sweep_candidates(p: u32) -> Vec<Mat2> {
    let mut c = Vec::new();
    for t in 1..p {
        c.push(Mat2::new(1, t, 0, 1, p));
        c.push(Mat2::new(1, 0, t, 1, p));
    }
    for t in 2..p {
        let inv = Mat2::new(t, 0, 0, 1, p).pow(p as u64 - 2, p).a;
        if t < inv {
            c.push(Mat2::new(t, 0, 0, inv, p));
        }
    }
    c
}

fn random_sl2(rng: &mut ChaCha8Rng, p: u32) -> Mat2 {
    loop {
        let m = Mat2::new(rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), p);
        if m.det(p) == 1 {
            return m;
        }
    }
}

/// A tuple in `PSL_2(F_p)` on which `w` is not the identity, certifying
/// `k(w) ≤ (p³ − p)/2`.
pub fn psl2_witness(w: &Word, budget: Psl2Budget) -> Result<Psl2Outcome, DetectError> {
    if w.is_identity() {
        return Err(DetectError::TrivialWord);
    }
    let p = psl2_prime(w);
    let gens = occurring(w);
    let mut images = vec![Mat2::IDENTITY; w.rank()];
    let witness = |images: &[Mat2], phase, attempts| {
        let value = evaluate_sl2(w, images, p);
        (!value.is_projective_identity(p)).then(|| Psl2Witness {
            p,
            group_order: (p as u64 * p as u64 * p as u64 - p as u64) / 2,
            tuple: images.iter().map(|m| m.projective_canonical(p)).collect(),
            value: value.projective_canonical(p),
            phase,
            attempts,
        })
    };

    let cands = sweep_candidates(p);
    let mut idx = vec![0usize; gens.len()];
    let mut attempts = 0;
    'sweep: while attempts < budget.sweep {
        for (slot, &g) in idx.iter().zip(&gens) {
            images[g - 1] = cands[*slot];
        }
        attempts += 1;
        if let Some(found) = witness(&images, SearchPhase::Sweep, attempts) {
            return Ok(Psl2Outcome::Witness(found));
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                break 'sweep;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cands.len() {
                break;
            }
            idx[k] = 0;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for attempt in 1..=budget.random {
        for &g in &gens {
            images[g - 1] = random_sl2(&mut rng, p);
        }
        if let Some(found) = witness(&images, SearchPhase::Random, attempt) {
            return Ok(Psl2Outcome::Witness(found));
        }
    }
    Ok(Psl2Outcome::Inconclusive { p, budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::standard_catalog;
    use crate::group::{cyclic, perm_index, symmetric};
    use crate::parse::parse_word;
    use crate::perm::Perm;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn catalog() -> &'static GroupCatalog {
        static C: OnceLock<GroupCatalog> = OnceLock::new();
        C.get_or_init(|| standard_catalog().unwrap())
    }

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let s3 = symmetric(3);
        let c = w("[x,y]");
        assert_eq!(evaluate(&c, &[0, 0], &s3).unwrap(), 0);
        let a = perm_index(&s3, &Perm::parse_cycles(3, "(0 1)").unwrap()).unwrap();
        let b = perm_index(&s3, &Perm::parse_cycles(3, "(0 2)").unwrap()).unwrap();
        let v = evaluate(&c, &[a, b], &s3).unwrap();
        assert_eq!(s3.element_order(v), 3);
        assert_eq!(evaluate(&c, &[a, a], &s3).unwrap(), 0);
        assert!(matches!(evaluate(&c, &[a], &s3), Err(DetectError::Arity { .. })));
    }

    #[test]
    fn law_examples() {
        assert_eq!(is_law(&w("x^2"), &cyclic(2)), LawOutcome::Law);
        assert!(matches!(is_law(&w("[x,y]"), &symmetric(3)), LawOutcome::Counterexample(_)));
        let tiny = is_law_capped(&w("[x,y]"), &symmetric(3), 2);
        assert!(matches!(tiny, LawOutcome::Inconclusive { .. }));
    }

    #[test]
    fn detection_examples() {
        let Detection::Detected(r) = k_w(&w("x"), catalog()).unwrap() else { panic!() };
        assert_eq!((r.min_order, r.witness_group.as_str()), (2, "o2-1"));
        let Detection::Detected(r) = k_w(&w("[x,y]"), catalog()).unwrap() else { panic!() };
        assert_eq!((r.min_order, r.witness_group.as_str(), r.witness_name.as_str()), (6, "o6-2", "S3"));
        let e = w("z^2 y^23 x^36 y^33 z^-26");
        assert_eq!(e.exponent_sums(), vec![36, 56, -24]);
        let Detection::Detected(r) = k_w(&e, catalog()).unwrap() else { panic!() };
        assert_eq!((r.min_order, r.witness_tuple.clone()), (3, vec![0, 1, 0]));
        assert_eq!(k_w(&Word::identity(2), catalog()), Err(DetectError::TrivialWord));
    }

    #[test]
    fn abelian_examples() {
        assert_eq!(abelian_k(&[1, 0]), Ok(2));
        assert_eq!(abelian_k(&[36, 56, -24]), Ok(3));
        assert_eq!(abelian_k(&[6]), Ok(4));
        assert_eq!(abelian_k(&[0, 0]), Err(DetectError::ZeroVector));
    }

    #[test]
    fn shortest_law_examples() {
        let f = |g: &FiniteGroup, l| match shortest_law(g, l, DEFAULT_SHORTEST_LAW_CAP) {
            ShortestLaw::Found { word, length } => Some((word.to_letter_string(), length)),
            _ => None,
        };
        assert_eq!(f(&cyclic(2), 2), Some(("xx".into(), 2)));
        assert_eq!(f(&cyclic(3), 3), Some(("xxx".into(), 3)));
        assert_eq!(f(&cyclic(3), 2), None);
        // x^2 y^2 ... S3 has exponent 6; [x,y]^... longer than 4
        assert_eq!(f(&symmetric(3), 4), None);
    }

    #[test]
    fn psl2_examples() {
        let b = Psl2Budget::default();
        let Psl2Outcome::Witness(r) = psl2_witness(&w("[x,y]"), b).unwrap() else { panic!() };
        assert_eq!((r.p, r.group_order, r.phase), (17, 2448, SearchPhase::Sweep));
        let Psl2Outcome::Witness(r) = psl2_witness(&w("x"), b).unwrap() else { panic!() };
        assert_eq!(r.p, 5);
        let v2 = crate::law::law_word(2).unwrap();
        assert_eq!(v2.len(), 10);
        let Psl2Outcome::Witness(r) = psl2_witness(&v2, b).unwrap() else { panic!() };
        assert_eq!(r.p, 37);
        assert!(!evaluate_sl2(&v2, &r.tuple, 37).is_projective_identity(37));
    }

    /// Full scan over every tuple, no pruning.
    fn naive_is_law(w: &Word, g: &FiniteGroup) -> bool {
        let n = g.order();
        let k = w.rank();
        let mut t = vec![0usize; k];
        loop {
            if eval_unchecked(w, &t, g) != 0 {
                return false;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                t[i] += 1;
                if t[i] < n {
                    break;
                }
                t[i] = 0;
            }
        }
    }

    fn small_word(rank: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((1..=rank, -3i64..=3), 0..8).prop_map(move |parts| {
            Word::from_syllables(rank, parts.into_iter().filter(|p| p.1 != 0)).unwrap()
        })
    }

    #[test]
    fn x_to_n_factorial_is_a_law() {
        for n in 1..=6usize {
            let f: i64 = (1..=n as i64).product();
            let word = Word::power_of_generator(1, 1, f).unwrap();
            for e in catalog().up_to(n) {
                assert_eq!(is_law(&word, &e.group), LawOutcome::Law, "n={n} {}", e.id);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pruned_scan_matches_naive(word in small_word(2), idx in 0usize..27) {
            let entries: Vec<_> = catalog().up_to(8).collect();
            let g = &entries[idx % entries.len()].group;
            prop_assert_eq!(is_law(&word, g).is_law(), Some(naive_is_law(&word, g)));
        }

        #[test]
        fn evaluate_is_a_homomorphism(u in small_word(3), v in small_word(3), seed in any::<u64>(), idx in 0usize..42) {
            let g = &catalog().entries()[idx % catalog().len()].group;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t: Vec<usize> = (0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..g.order())).collect();
            let uv = u.multiply(&v).unwrap();
            let lhs = evaluate(&uv, &t, g).unwrap();
            let rhs = g.mul(evaluate(&u, &t, g).unwrap(), evaluate(&v, &t, g).unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(evaluate(&u.invert(), &t, g).unwrap(), g.inverse(evaluate(&u, &t, g).unwrap()));
        }

        #[test]
        fn detection_is_invariant(word in small_word(2), by in small_word(2)) {
            prop_assume!(!word.is_identity());
            let k = |x: &Word| match k_w(x, catalog()).unwrap() {
                Detection::Detected(r) => Some(r.min_order),
                _ => None,
            };
            let base = k(&word);
            prop_assert_eq!(k(&word.invert()), base);
            prop_assert_eq!(k(&word.conjugate(&by).unwrap()), base);
        }

        #[test]
        fn detection_witness_is_genuine(word in small_word(2)) {
            prop_assume!(!word.is_identity());
            if let Detection::Detected(r) = k_w(&word, catalog()).unwrap() {
                let g = &catalog().get(&r.witness_group).unwrap().group;
                prop_assert_ne!(evaluate(&word, &r.witness_tuple, g).unwrap(), 0);
                for e in catalog().entries().iter().filter(|e| e.group.order() < r.min_order) {
                    prop_assert!(naive_is_law(&word, &e.group));
                }
            }
        }
    }
}
