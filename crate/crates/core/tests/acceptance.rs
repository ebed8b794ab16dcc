//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed; the
//! process exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use resfin::bench::{bench_vn, Verdict};
use resfin::catalog::{enumerate_groups, handcoded_extension, GroupCatalog};
use resfin::detect::{
    abelian_k, evaluate, evaluate_sl2, is_law, k_w, psl2_witness, shortest_law, Detection, LawOutcome, Psl2Budget,
    Psl2Outcome, ShortestLaw, DEFAULT_SHORTEST_LAW_CAP,
};
use resfin::group::{perm_index, symmetric, verify_lucchini, FiniteGroup};
use resfin::law::{law_word, LawRecipe};
use resfin::matrix::is_prime;
use resfin::parse::parse_word;
use resfin::perm::Perm;
use resfin::stallings::{buskin_check, divisibility, divisibility_brute_force, StallingsGraph};
use resfin::word::{Letter, Word};
use resfin::wordgen::{random_reduced_word, random_reduced_words, reduced_words};

// Pinned limits.
const LAW_BOUND_TIME: Duration = Duration::from_secs(1);
const ENUMERATION_TIME: Duration = Duration::from_secs(600);
const SHORTEST_LAW_TIME: Duration = Duration::from_secs(60);
const BUSKIN_SWEEP_TIME: Duration = Duration::from_secs(30 * 60);
const BUSKIN_SAMPLE_TIME: Duration = Duration::from_secs(60);
const SEED: u64 = 0x5eed;

fn catalog() -> &'static GroupCatalog {
    static CATALOG: OnceLock<GroupCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| handcoded_extension(enumerate_groups(12).unwrap(), 16).unwrap())
}

fn random_word(rng: &mut ChaCha8Rng, lengths: std::ops::RangeInclusive<usize>) -> Word {
    let len = rng.gen_range(lengths);
    random_reduced_word(rng, len)
}

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

/// Runs one criterion; the closure returns a short detail string.
fn criterion(number: u32, title: &str, f: impl FnOnce() -> String) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("criterion {number:>2} PASS  {title}: {detail} [{secs:.2}s]");
            true
        }
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            println!("criterion {number:>2} FAIL  {title}: {msg} [{secs:.2}s]");
            false
        }
    }
}

fn law_bounds() -> String {
    let start = Instant::now();
    for n in 1..=64u64 {
        let v = law_word(n).unwrap();
        assert!(!v.is_identity(), "v_{n} trivial");
        let bound = 4 * n * n * (n + 1);
        assert_eq!(LawRecipe::descending(n).unwrap().length_bound(), bound);
        assert!(v.len() <= bound, "|v_{n}| = {} > {bound}", v.len());
    }
    let t = start.elapsed();
    assert!(t < LAW_BOUND_TIME, "took {t:?}");
    format!("v_1..v_64 nontrivial, |v_64| = {} <= {}", law_word(64).unwrap().len(), 4 * 64 * 64 * 65)
}

fn vn_laws_over_catalog() -> String {
    let report = bench_vn(1..=12, catalog()).expect("no law failure");
    for row in &report.vn {
        assert_eq!(row.verdict, Verdict::Verified, "n = {}", row.n);
        assert_eq!(row.covered, row.order_bound);
        let expected = catalog().up_to(row.order_bound).count();
        assert_eq!(row.groups_checked, expected, "n = {}", row.n);
    }
    // independent re-check of the largest case straight from the detector
    let v12 = law_word(12).unwrap();
    let mut groups = 0;
    for e in catalog().up_to(16) {
        assert_eq!(is_law(&v12, &e.group), LawOutcome::Law, "{}", e.id);
        groups += 1;
    }
    assert_eq!(groups, 42);
    format!("v_n is a law in every group of order <= n^2/9 for n = 1..12 (v_12: {groups} groups)")
}

fn growth_datapoints() -> String {
    let report = bench_vn(1..=12, catalog()).expect("no law failure");
    let mut shown = Vec::new();
    for row in &report.vn {
        let (arg, lower) = row.growth_point();
        assert_eq!(arg, 4 * row.n.pow(3) + 4 * row.n.pow(2));
        assert!(row.length <= arg);
        // k(v_n) itself, where the catalog reaches it, must exceed the bound
        let v = law_word(row.n).unwrap();
        match k_w(&v, catalog()).unwrap() {
            Detection::Detected(r) => assert!(r.min_order > lower, "k(v_{}) = {}", row.n, r.min_order),
            Detection::Undetected { exhaustive_bound } => assert!(exhaustive_bound >= lower),
            Detection::Inconclusive { group, .. } => panic!("inconclusive in {group}"),
        }
        shown.push(format!("F({arg})>{lower}"));
    }
    format!("{} rows: {}", shown.len(), shown.join(" "))
}

fn catalog_completeness() -> String {
    let start = Instant::now();
    let base = enumerate_groups(12).unwrap();
    let t = start.elapsed();
    assert!(t < ENUMERATION_TIME, "enumeration took {t:?}");
    assert_eq!(base.counts(), vec![1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]);
    let full = handcoded_extension(base, 16).unwrap();
    assert_eq!(&full.counts()[12..], &[1, 2, 1, 14]);
    // validation (pairwise non-isomorphism, counts) happens again on load
    let reloaded = GroupCatalog::from_text(&full.to_text()).unwrap();
    reloaded.validate().unwrap();
    assert_eq!(reloaded.len(), 42);
    format!("counts {:?}, enumeration through 12 in {:.3}s", reloaded.counts(), t.as_secs_f64())
}

fn normal_cyclic_powers() -> String {
    let mut checked = 0;
    // |G| = 1 admits no positive ell < 1; the statement concerns nontrivial groups
    for e in catalog().entries().iter().filter(|e| e.group.order() > 1) {
        let g = &e.group;
        let n = g.order() as u64;
        for x in 0..g.order() {
            let ord = g.element_order(x);
            if ord * ord < n {
                continue;
            }
            let ell = g.lucchini_ell(x);
            assert!(ell * ell < n, "{}: element {x} gives ell = {ell}", e.id);
            assert!(g.is_normal(&g.cyclic_subgroup(x, ell)).unwrap());
            checked += 1;
        }
    }
    format!("{checked} elements with ord(x)^2 >= |G| in the 41 nontrivial groups, zero exceptions")
}

fn lucchini_theorem() -> String {
    let mut actions = 0;
    let mut skipped = 0;
    for e in catalog().entries() {
        let g = &e.group;
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for x in 0..g.order() {
            let h = g.subgroup_generated(&[x]);
            if seen.contains(&h) {
                continue;
            }
            seen.push(h.clone());
            if h.len() == g.order() {
                // trivial action on one point
                skipped += 1;
                continue;
            }
            let action = g.coset_action(&h).unwrap();
            let r = verify_lucchini(&action).unwrap();
            assert!(r.stabilizer_cyclic, "{}: stabilizer of <{x}>", e.id);
            assert!(r.holds, "{}: {r:?}", e.id);
            actions += 1;
        }
    }
    // equality case |G| = n^2 - n
    let s3 = symmetric(3);
    let t = perm_index(&s3, &Perm::parse_cycles(3, "(0 1)").unwrap()).unwrap();
    let r = verify_lucchini(&s3.coset_action(&s3.subgroup_generated(&[t])).unwrap()).unwrap();
    assert_eq!((r.degree, r.group_order, r.stabilizer_order), (3, 6, 2));
    assert!(r.holds && r.group_order == r.degree * r.degree - r.degree);
    format!("{actions} coset actions hold ({skipped} of degree 1 skipped); S3/<(0 1)> attains 6 = 3^2-3")
}

fn detection_values() -> String {
    let Detection::Detected(r) = k_w(&w("[x,y]"), catalog()).unwrap() else {
        panic!("[x,y] undetected")
    };
    assert_eq!(r.min_order, 6);
    let s3 = &catalog().get(&r.witness_group).unwrap().group;
    assert_eq!(s3.order(), 6);
    assert!(!s3.is_abelian());
    assert_ne!(evaluate(&r.word, &r.witness_tuple, s3).unwrap(), 0);

    let example = w("z^2 y^23 x^36 y^33 z^-26");
    let Detection::Detected(e) = k_w(&example, catalog()).unwrap() else {
        panic!("example undetected")
    };
    assert_eq!(e.min_order, 3);
    let z3 = &catalog().get(&e.witness_group).unwrap().group;
    assert_eq!(e.witness_tuple, vec![0, 1, 0]);
    assert_ne!(evaluate(&example, &e.witness_tuple, z3).unwrap(), 0);
    let z2 = &catalog().up_to(2).last().unwrap().group;
    assert_eq!(is_law(&example, z2), LawOutcome::Law);
    format!(
        "k([x,y]) = 6 via {} ({}); k(z^2y^23x^36y^33Z^26) = 3 via {} at (0,1,0), law in Z2",
        r.witness_group, r.witness_name, e.witness_group
    )
}

fn alpha_spot_check() -> String {
    let g = FiniteGroup::psl2(13).unwrap();
    let start = Instant::now();
    let r = shortest_law(&g, 4, DEFAULT_SHORTEST_LAW_CAP);
    let t = start.elapsed();
    assert_eq!(r, ShortestLaw::NoneUpTo { max_len: 4 });
    assert!(t < SHORTEST_LAW_TIME, "took {t:?}");
    format!("PSL2(13) (order {}) has no law of length <= 4", g.order())
}

fn cubic_upper_bound() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut max_p = 0;
    for word in random_reduced_words(&mut rng, 100, 12) {
        let outcome = psl2_witness(&word, Psl2Budget::default()).unwrap();
        let Psl2Outcome::Witness(r) = outcome else {
            panic!("inconclusive for {word}")
        };
        let floor = 3 * word.len() + 1;
        assert!(is_prime(r.p as u64) && r.p as u64 > floor);
        assert!((floor + 1..r.p as u64).all(|q| !is_prime(q)), "p not minimal for {word}");
        assert!(!evaluate_sl2(&word, &r.tuple, r.p).is_projective_identity(r.p));
        let p = r.p as u64;
        assert_eq!(r.group_order, (p * p * p - p) / 2);
        max_p = max_p.max(r.p);
    }
    format!("100 words, all witnessed; largest p = {max_p}")
}

fn buskin_sweep() -> String {
    let start = Instant::now();
    let mut total = 0;
    for len in 1..=10 {
        for word in reduced_words(len) {
            assert!(buskin_check(&word), "bound fails for {word}");
            total += 1;
        }
    }
    let sweep = start.elapsed();
    assert!(sweep < BUSKIN_SWEEP_TIME, "sweep took {sweep:?}");

    let mut compared = 0;
    for len in 1..=8 {
        for word in reduced_words(len) {
            assert_eq!(
                divisibility(&word, 4).index(),
                divisibility_brute_force(&word, 4),
                "{word}"
            );
            compared += 1;
        }
    }

    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for word in random_reduced_words(&mut rng, 1000, 14) {
        assert!(buskin_check(&word), "bound fails for {word}");
    }
    let sample = start.elapsed();
    assert!(sample < BUSKIN_SAMPLE_TIME, "sample took {sample:?}");
    format!(
        "{total} words of length <= 10 in {:.2}s; {compared} words match the S_m oracle; 1000-word sample in {:.2}s",
        sweep.as_secs_f64(),
        sample.as_secs_f64()
    )
}

/// Least `m` such that some homomorphism `Z^k -> Z/m` moves `v`.
fn cyclic_quotient_oracle(v: &[i64]) -> u64 {
    (2u64..)
        .find(|&m| {
            let k = v.len();
            let mut a = vec![0u64; k];
            loop {
                let image: i128 = a.iter().zip(v).map(|(&ai, &vi)| ai as i128 * vi as i128).sum();
                if image.rem_euclid(m as i128) != 0 {
                    return true;
                }
                let mut i = k;
                loop {
                    if i == 0 {
                        return false;
                    }
                    i -= 1;
                    a[i] += 1;
                    if a[i] < m {
                        break;
                    }
                    a[i] = 0;
                }
            }
        })
        .unwrap()
}

fn abelian_detection() -> String {
    assert_eq!(abelian_k(&[36, 56, -24]).unwrap(), 3);
    assert_eq!(cyclic_quotient_oracle(&[36, 56, -24]), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut largest = 0;
    for _ in 0..1000 {
        let rank = rng.gen_range(1..=4);
        let scale: i64 = rng.gen_range(1..=840);
        let v: Vec<i64> = loop {
            let v: Vec<i64> = (0..rank).map(|_| scale * rng.gen_range(-6..=6)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let k = abelian_k(&v).unwrap();
        assert_eq!(k, cyclic_quotient_oracle(&v), "{v:?}");
        largest = largest.max(k);
    }
    format!("1000 vectors agree with the oracle (largest value {largest}); (36,56,-24) -> 3")
}

fn property_suites() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    // reduce idempotence
    for _ in 0..1000 {
        let letters: Vec<Letter> = (0..rng.gen_range(0..30))
            .map(|_| Letter::new(rng.gen_range(1..=3), rng.gen_bool(0.5)))
            .collect();
        let once = Word::reduce(&letters, 3).unwrap();
        let twice = Word::reduce(&once.letters().collect::<Vec<_>>(), 3).unwrap();
        assert_eq!(once, twice);
    }

    // evaluate is a homomorphism
    for _ in 0..1000 {
        let g = &catalog().entries()[rng.gen_range(0..catalog().len())].group;
        let u = random_word(&mut rng, 0..=11);
        let v = random_word(&mut rng, 0..=11);
        let t = [rng.gen_range(0..g.order()), rng.gen_range(0..g.order())];
        let uv = evaluate(&u.multiply(&v).unwrap(), &t, g).unwrap();
        assert_eq!(uv, g.mul(evaluate(&u, &t, g).unwrap(), evaluate(&v, &t, g).unwrap()));
    }

    // fold confluence: 20 random fold orders per generating set
    for _ in 0..20 {
        let gens: Vec<Word> = (0..rng.gen_range(1..=4))
            .map(|_| random_word(&mut rng, 1..=8))
            .collect();
        let raw = StallingsGraph::wedge(2, &gens);
        let canonical = raw.fold();
        for _ in 0..20 {
            assert_eq!(raw.fold_randomly(&mut rng), canonical);
        }
    }

    // D <= k where both are exact
    let mut exact = 0;
    while exact < 200 {
        let word = random_word(&mut rng, 1..=12);
        let Detection::Detected(r) = k_w(&word, catalog()).unwrap() else {
            continue;
        };
        let d = divisibility(&word, r.min_order).index();
        assert!(d.is_some_and(|d| d <= r.min_order), "{word}: D = {d:?}, k = {}", r.min_order);
        exact += 1;
    }

    // x^{n!} is a law in every group of order <= n
    for n in 1..=6u64 {
        let law = resfin::law::power_law(n).unwrap();
        for e in catalog().up_to(n as usize) {
            assert_eq!(is_law(&law, &e.group), LawOutcome::Law, "n = {n}, {}", e.id);
        }
    }
    "reduce idempotence, evaluate homomorphism, fold confluence (20 orders), D <= k on 200 words, x^(n!) laws for n <= 6".into()
}

fn main() {
    let results = [
        criterion(1, "law construction bounds", law_bounds),
        criterion(2, "v_n laws over the catalog", vn_laws_over_catalog),
        criterion(3, "implied growth datapoints", growth_datapoints),
        criterion(4, "catalog completeness", catalog_completeness),
        criterion(5, "normal powers of large-order elements", normal_cyclic_powers),
        criterion(6, "Lucchini bound on coset actions", lucchini_theorem),
        criterion(7, "detection values", detection_values),
        criterion(8, "alpha lower bound spot check", alpha_spot_check),
        criterion(9, "cubic upper bound mechanism", cubic_upper_bound),
        criterion(10, "Buskin sweep", buskin_sweep),
        criterion(11, "abelian detection", abelian_detection),
        criterion(12, "property suites", property_suites),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {} failed", results.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
