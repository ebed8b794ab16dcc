//! Stallings subgroup graphs and the divisibility function `D(w)`.
//!
//! An edge `(u, v, g)` reads generator `g` forwards from `u` to `v` and its
//! inverse backwards. Points of coset tables are acted on from the right: the
//! path of a word visits `0, 0·a₁, 0·a₁a₂, …`.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::perm::Perm;
use crate::word::{Letter, Word};

/// A based, labelled graph; basepoint 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StallingsGraph {
    rank: usize,
    vertices: usize,
    /// `(source, target, generator)`, generator 1-based.
    edges: Vec<(usize, usize, usize)>,
}

/// Union-find over vertex indices.
struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }
}

impl StallingsGraph {
    /// Unfolded wedge of one loop per word at the basepoint.
    pub fn wedge(rank: usize, words: &[Word]) -> StallingsGraph {
        let mut vertices = 1;
        let mut edges = Vec::new();
        for w in words {
            let letters: Vec<Letter> = w.letters().collect();
            let mut cur = 0;
            for (i, l) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() {
                    0
                } else {
                    vertices += 1;
                    vertices - 1
                };
                if l.is_inverse() {
                    edges.push((next, cur, l.generator()));
                } else {
                    edges.push((cur, next, l.generator()));
                }
                cur = next;
            }
        }
        StallingsGraph { rank, vertices, edges }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// No two edges with the same label leave, or enter, the same vertex.
    pub fn is_folded(&self) -> bool {
        let mut out = std::collections::HashSet::new();
        let mut inc = std::collections::HashSet::new();
        self.edges
            .iter()
            .all(|&(u, v, g)| out.insert((u, g)) && inc.insert((v, g)))
    }

    /// Identifies the endpoints of one conflicting pair; false when folded.
    fn fold_step(edges: &[(usize, usize, usize)], dsu: &mut Dsu, pick: Option<&mut dyn FnMut(usize) -> usize>) -> bool {
        let mut seen_out = std::collections::HashMap::new();
        let mut seen_in = std::collections::HashMap::new();
        let mut conflicts = Vec::new();
        for &(u, v, g) in edges {
            let (u, v) = (dsu.find(u), dsu.find(v));
            if let Some(&w) = seen_out.get(&(u, g)) {
                if w != v {
                    conflicts.push((w, v));
                }
            } else {
                seen_out.insert((u, g), v);
            }
            if let Some(&w) = seen_in.get(&(v, g)) {
                if w != u {
                    conflicts.push((w, u));
                }
            } else {
                seen_in.insert((v, g), u);
            }
        }
        if conflicts.is_empty() {
            return false;
        }
        match pick {
            Some(pick) => {
                let (a, b) = conflicts[pick(conflicts.len())];
                dsu.0[a] = b;
            }
            None => {
                for (a, b) in conflicts {
                    let (a, b) = (dsu.find(a), dsu.find(b));
                    if a != b {
                        dsu.0[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        true
    }

    fn folded_with(&self, mut pick: Option<&mut dyn FnMut(usize) -> usize>) -> StallingsGraph {
        let mut dsu = Dsu((0..self.vertices).collect());
        loop {
            let p = pick.as_mut().map(|f| &mut **f as &mut dyn FnMut(usize) -> usize);
            if !Self::fold_step(&self.edges, &mut dsu, p) {
                break;
            }
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v, g)| (dsu.find(u), dsu.find(v), g))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let base = dsu.find(0);
        canonical(self.rank, self.vertices, base, &edges)
    }

    /// Folded graph in canonical form.
    pub fn fold(&self) -> StallingsGraph {
        self.folded_with(None)
    }

    /// Folds one randomly chosen conflicting pair at a time.
    pub fn fold_randomly<R: Rng>(&self, rng: &mut R) -> StallingsGraph {
        let mut shuffled = self.clone();
        shuffled.edges.shuffle(rng);
        let mut pick = |n: usize| rng.gen_range(0..n);
        shuffled.folded_with(Some(&mut pick))
    }

    fn step(&self, v: usize, l: Letter) -> Option<usize> {
        let g = l.generator();
        self.edges.iter().find_map(|&(a, b, h)| match (h == g, l.is_inverse()) {
            (true, false) if a == v => Some(b),
            (true, true) if b == v => Some(a),
            _ => None,
        })
    }

    /// Whether `w` labels a closed path at the basepoint of this folded graph.
    pub fn contains(&self, w: &Word) -> bool {
        let mut v = 0;
        for s in w.syllables() {
            let l = Letter::new(s.generator, s.exponent < 0);
            let mut left = s.exponent.unsigned_abs();
            let start = v;
            let mut taken = 0u64;
            while left > 0 {
                match self.step(v, l) {
                    None => return false,
                    Some(n) => v = n,
                }
                left -= 1;
                taken += 1;
                if v == start {
                    // injective labels: the remaining steps go round this cycle
                    left %= taken;
                }
            }
        }
        v == 0
    }
}

/// Renumbers vertices reachable from `base` in breadth-first order.
fn canonical(rank: usize, vertices: usize, base: usize, edges: &[(usize, usize, usize)]) -> StallingsGraph {
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); vertices];
    for &(u, v, g) in edges {
        adj[u].push((g, v, false));
        adj[v].push((g, u, true));
    }
    for a in &mut adj {
        // generator order, forward before backward
        a.sort_unstable_by_key(|&(g, _, back)| (g, back));
    }
    let mut label = vec![usize::MAX; vertices];
    label[base] = 0;
    let mut next = 1;
    let mut queue = VecDeque::from([base]);
    while let Some(u) = queue.pop_front() {
        for &(_, v, _) in &adj[u] {
            if label[v] == usize::MAX {
                label[v] = next;
                next += 1;
                queue.push_back(v);
            }
        }
    }
    let mut out: Vec<_> = edges
        .iter()
        .filter(|e| label[e.0] != usize::MAX)
        .map(|&(u, v, g)| (label[u], label[v], g))
        .collect();
    out.sort_unstable_by_key(|&(u, v, g)| (u, g, v));
    StallingsGraph {
        rank,
        vertices: next,
        edges: out,
    }
}

/// Folded Stallings graph of the subgroup generated by `generators`.
pub fn subgroup_graph(rank: usize, generators: &[Word]) -> StallingsGraph {
    StallingsGraph::wedge(rank, generators).fold()
}

impl fmt::Display for StallingsGraph {
    /// `vertices n` followed by one `u -g-> v` line per edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.vertices)?;
        for &(u, v, g) in &self.edges {
            writeln!(f, "{} -{}-> {}", u, crate::word::generator_name(g), v)?;
        }
        Ok(())
    }
}

/// Partial injective maps, one per generator, on `{0, …, degree − 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCosetTable {
    degree: usize,
    forward: Vec<Vec<Option<usize>>>,
    backward: Vec<Vec<Option<usize>>>,
}

impl PartialCosetTable {
    pub fn new(rank: usize, degree: usize) -> PartialCosetTable {
        PartialCosetTable {
            degree,
            forward: vec![vec![None; degree]; rank],
            backward: vec![vec![None; degree]; rank],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Image of point `p` under generator `g` (1-based), if defined.
    pub fn image(&self, g: usize, p: usize) -> Option<usize> {
        self.forward[g - 1][p]
    }

    fn apply(&self, p: usize, l: Letter) -> Option<usize> {
        let g = l.generator() - 1;
        if l.is_inverse() {
            self.backward[g][p]
        } else {
            self.forward[g][p]
        }
    }

    /// Defines `p · l = q`.
    fn define(&mut self, p: usize, l: Letter, q: usize) {
        let g = l.generator() - 1;
        let (src, dst) = if l.is_inverse() { (q, p) } else { (p, q) };
        self.forward[g][src] = Some(dst);
        self.backward[g][dst] = Some(src);
    }

    fn undefine(&mut self, p: usize, l: Letter, q: usize) {
        let g = l.generator() - 1;
        let (src, dst) = if l.is_inverse() { (q, p) } else { (p, q) };
        self.forward[g][src] = None;
        self.backward[g][dst] = None;
    }

    /// Whether `p · l = q` can still be defined.
    fn free(&self, p: usize, l: Letter, q: usize) -> bool {
        let inv = Letter::new(l.generator(), !l.is_inverse());
        self.apply(q, inv).is_none() && self.apply(p, l).is_none()
    }

    /// Completes every map to a permutation, pairing undefined points in
    /// ascending order.
    pub fn complete(&self) -> Vec<Perm> {
        self.forward
            .iter()
            .zip(&self.backward)
            .map(|(fw, bw)| {
                let mut free_targets = (0..self.degree).filter(|&q| bw[q].is_none());
                let images = fw
                    .iter()
                    .map(|im| im.unwrap_or_else(|| free_targets.next().expect("as many free targets as sources")) as u32)
                    .collect();
                Perm::from_images(images).expect("injective completion")
            })
            .collect()
    }
}

/// Endpoint of the path of `w` from point 0 under a permutation action.
pub fn act(w: &Word, perms: &[Perm], point: usize) -> usize {
    w.letters().fold(point, |p, l| {
        let g = &perms[l.generator() - 1];
        if l.is_inverse() {
            g.inverse().apply(p)
        } else {
            g.apply(p)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divisibility {
    /// `D(w) = index`; following `w` from 0 in `table` ends at `endpoint ≠ 0`.
    Found {
        index: usize,
        table: PartialCosetTable,
        endpoint: usize,
    },
    /// No subgroup of index `≤ max_index` misses `w`.
    ExceedsMaxIndex { max_index: usize },
}

impl Divisibility {
    pub fn index(&self) -> Option<usize> {
        match self {
            Divisibility::Found { index, .. } => Some(*index),
            Divisibility::ExceedsMaxIndex { .. } => None,
        }
    }
}

struct DivSearch<'a> {
    letters: &'a [Letter],
    table: PartialCosetTable,
    used: usize,
}

impl DivSearch<'_> {
    /// Extends the table along `letters[pos..]` from point `cur`; on success
    /// returns the endpoint.
    fn run(&mut self, pos: usize, cur: usize) -> Option<usize> {
        if pos == self.letters.len() {
            return (cur != 0).then_some(cur);
        }
        let l = self.letters[pos];
        if let Some(next) = self.table.apply(cur, l) {
            return self.run(pos + 1, next);
        }
        let fresh = self.used < self.table.degree;
        let limit = if fresh { self.used + 1 } else { self.used };
        for q in 0..limit {
            if !self.table.free(cur, l, q) {
                continue;
            }
            let used = self.used;
            self.used = used.max(q + 1);
            self.table.define(cur, l, q);
            if let Some(end) = self.run(pos + 1, q) {
                return Some(end);
            }
            self.table.undefine(cur, l, q);
            self.used = used;
        }
        None
    }
}

/// The divisibility function: the least index of a subgroup missing `w`,
/// searched by iterative deepening over the degree.
///
/// Panics if `w` is trivial.
pub fn divisibility(w: &Word, max_index: usize) -> Divisibility {
    assert!(!w.is_identity(), "the trivial word lies in every subgroup");
    // conjugate subgroups have the same index
    let w = w.cyclically_reduced();
    let letters: Vec<Letter> = w.letters().collect();
    for m in 2..=max_index {
        let mut s = DivSearch {
            letters: &letters,
            table: PartialCosetTable::new(w.rank(), m),
            used: 1,
        };
        if let Some(endpoint) = s.run(0, 0) {
            return Divisibility::Found {
                index: m,
                table: s.table,
                endpoint,
            };
        }
    }
    Divisibility::ExceedsMaxIndex { max_index }
}

/// The bound `⌊|w|/2⌋ + 2` on `D(w)`.
pub fn buskin_bound(w: &Word) -> usize {
    (w.len() / 2) as usize + 2
}

/// Whether `D(w)` is found within [`buskin_bound`].
pub fn buskin_check(w: &Word) -> bool {
    divisibility(w, buskin_bound(w)).index().is_some()
}

/// `D(w)` by trying every tuple of permutations of degree `≤ max_degree`.
pub fn divisibility_brute_force(w: &Word, max_degree: usize) -> Option<usize> {
    (2..=max_degree).find(|&m| {
        let all = all_perms(m);
        let mut idx = vec![0usize; w.rank()];
        loop {
            let tuple: Vec<Perm> = idx.iter().map(|&i| all[i].clone()).collect();
            if act(w, &tuple, 0) != 0 {
                return true;
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return false;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < all.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    })
}

fn all_perms(m: usize) -> Vec<Perm> {
    fn go(cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(Perm::from_images(cur.clone()).expect("bijection"));
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u32);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;
    use crate::wordgen::reduced_words;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn graph(gens: &[&str]) -> StallingsGraph {
        subgroup_graph(2, &gens.iter().map(|g| w(g)).collect::<Vec<_>>())
    }

    #[test]
    fn graph_examples() {
        let g = graph(&["x"]);
        assert_eq!((g.vertex_count(), g.edges()), (1, &[(0, 0, 1)][..]));
        assert_eq!(graph(&["xx", "yx"]).vertex_count(), 2);
        let b = graph(&["x", "y"]);
        assert!(b.contains(&w("[x,y]^3 Y")));
        assert_eq!(graph(&["xxy", "xxY"]).vertex_count(), 3);
        assert_eq!(graph(&["x", "x"]).edges(), &[(0, 0, 1)]);
        assert_eq!(graph(&["x", "xxx"]).edges(), &[(0, 0, 1)]);
    }

    #[test]
    fn fold_is_idempotent() {
        let g = graph(&["xxy", "yxY", "XyX"]);
        assert!(g.is_folded());
        assert_eq!(g.fold(), g);
    }

    #[test]
    fn membership_examples() {
        let g = graph(&["x"]);
        assert!(g.contains(&w("x^3")));
        assert!(g.contains(&w("x^-479001600")));
        assert!(!g.contains(&w("y")));
        let h = graph(&["xx", "yx"]);
        // [x,y] = X Y x y: 0 -X-> ? ...
        // 0 -x-> 1 -x-> 0 and 0 -y-> 1: the path of XYxy stops at its last letter
        assert_eq!(h.edges(), &[(0, 1, 1), (0, 1, 2), (1, 0, 1)]);
        let c = w("[x,y]");
        assert!(!h.contains(&c));
        assert_eq!(h.contains(&c), h.contains(&c.invert()));
        assert!(h.contains(&w("yx xx XY")));
        assert!(!h.contains(&w("x")));
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(divisibility(&w("x"), 10).index(), Some(2));
        assert_eq!(divisibility(&w("x^2"), 10).index(), Some(3));
        assert_eq!(divisibility(&w("[x,y]"), 10).index(), Some(3));
        assert_eq!(divisibility(&w("[x,y]"), 2), Divisibility::ExceedsMaxIndex { max_index: 2 });
        assert!(buskin_check(&w("[x,y]")));
        assert!(buskin_check(&w("x")));
    }

    #[test]
    fn witness_tables_complete_to_detecting_actions() {
        for word in reduced_words(5) {
            if let Divisibility::Found { index, table, .. } = divisibility(&word, 6) {
                let perms = table.complete();
                let cr = word.cyclically_reduced();
                assert_ne!(act(&cr, &perms, 0), 0, "{word} at index {index}");
            }
        }
    }

    #[test]
    fn divisibility_matches_brute_force() {
        for len in 1..=5 {
            for word in reduced_words(len) {
                assert_eq!(divisibility(&word, 4).index(), divisibility_brute_force(&word, 4), "{word}");
            }
        }
    }

    #[test]
    fn fold_confluence() {
        let gens = [w("xxyXY"), w("yyx"), w("XyyX"), w("xYxY")];
        let raw = StallingsGraph::wedge(2, &gens);
        let canon = raw.fold();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(raw.fold_randomly(&mut rng), canon);
        }
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        proptest::collection::vec((1usize..=2, prop_oneof![Just(-1i64), Just(1)]), 1..8)
            .prop_map(|p| Word::from_syllables(2, p).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn products_of_generators_are_members(
            gens in proptest::collection::vec(word_strategy(), 1..4),
            picks in proptest::collection::vec((0usize..4, any::<bool>()), 0..6),
        ) {
            let g = subgroup_graph(2, &gens);
            let mut prod = Word::identity(2);
            for (i, inv) in picks {
                let s = &gens[i % gens.len()];
                let s = if inv { s.invert() } else { s.clone() };
                prod = prod.multiply(&s).unwrap();
            }
            prop_assert!(g.contains(&prod));
        }

        #[test]
        fn random_folds_agree(gens in proptest::collection::vec(word_strategy(), 1..4), seed in any::<u64>()) {
            let raw = StallingsGraph::wedge(2, &gens);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            prop_assert_eq!(raw.fold_randomly(&mut rng), raw.fold());
        }

        #[test]
        fn divisibility_invariances(word in word_strategy()) {
            prop_assume!(!word.is_identity());
            let d = divisibility(&word, 8).index();
            prop_assert!(d.unwrap_or(9) >= 2);
            prop_assert_eq!(divisibility(&word.invert(), 8).index(), d);
            let swapped = Word::from_syllables(2, word.syllables().iter().map(|s| (3 - s.generator, s.exponent))).unwrap();
            prop_assert_eq!(divisibility(&swapped, 8).index(), d);
        }
    }
}
