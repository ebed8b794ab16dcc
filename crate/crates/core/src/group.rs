//! Concrete finite groups on dense element indices.
//!
//! Every [`FiniteGroup`] numbers its elements `0..order` with `0` the
//! identity. Groups of order at most [`TABLE_LIMIT`] carry a full
//! multiplication table; larger ones multiply through their realization
//! (permutations or 2×2 matrices) and look the product up.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use thiserror::Error;

use crate::matrix::{is_prime, Mat2};
use crate::perm::Perm;

/// Largest order for which a multiplication table is precomputed.
pub const TABLE_LIMIT: usize = 4096;
/// Default cap on the size of a permutation-group closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;
/// Largest prime for which `SL_2(F_p)` is enumerated element by element.
pub const MAX_MATRIX_PRIME: u32 = 23;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is not square (row {row} has {len} entries, expected {expected})")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row},{col}) = {value} out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not a two-sided identity (row/column {0})")]
    IdentityNotZero(usize),
    #[error("{line} {index} is not a permutation of the elements, so inverses fail")]
    NotLatin { line: &'static str, index: usize },
    #[error("associativity fails for ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("empty table")]
    Empty,
    #[error("invalid permutation for degree {0}")]
    InvalidPermutation(usize),
    #[error("closure exceeds the cap of {0} elements")]
    ClosureCap(usize),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime {0} above the enumeration cap {MAX_MATRIX_PRIME}")]
    PrimeTooLarge(u32),
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("element index {0} out of range")]
    ElementOutOfRange(usize),
    #[error("action is not transitive")]
    NotTransitive,
    #[error("action has degree 1")]
    DegreeOne,
}

#[derive(Debug, Clone)]
pub enum Realization {
    Cayley,
    Permutation {
        degree: usize,
        generators: Vec<Perm>,
        elements: Vec<Perm>,
        index: HashMap<Perm, u32>,
    },
    Matrix {
        p: u32,
        projective: bool,
        elements: Vec<Mat2>,
        /// `Mat2::code` to element index, `u32::MAX` when absent.
        index: Vec<u32>,
    },
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    realization: Realization,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    generators: Vec<usize>,
    element_orders: OnceLock<Vec<u64>>,
    class_reps: OnceLock<Vec<usize>>,
}

impl FiniteGroup {
    /// Validates a Cayley table whose row `a`, column `b` holds `a*b`.
    pub fn from_cayley_table(name: &str, table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { row, col, value });
                }
                flat.push(value as u32);
            }
        }
        FiniteGroup::from_flat_table(name, flat, n)
    }

    pub(crate) fn from_flat_table(name: &str, flat: Vec<u32>, n: usize) -> Result<FiniteGroup, GroupError> {
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        for i in 0..n {
            if at(0, i) != i || at(i, 0) != i {
                return Err(GroupError::IdentityNotZero(i));
            }
        }
        let mut seen = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                let v = at(a, b);
                if seen[v] == a + 1 {
                    return Err(GroupError::NotLatin { line: "row", index: a });
                }
                seen[v] = a + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for b in 0..n {
            for a in 0..n {
                let v = at(a, b);
                if seen[v] == b + 1 {
                    return Err(GroupError::NotLatin {
                        line: "column",
                        index: b,
                    });
                }
                seen[v] = b + 1;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            let b = (0..n).find(|&b| at(a, b) == 0).expect("latin row holds the identity");
            inverses[a] = b as u32;
        }
        let mut g = FiniteGroup {
            name: name.to_string(),
            order: n,
            realization: Realization::Cayley,
            table: Some(flat),
            inverses,
            generators: Vec::new(),
            element_orders: OnceLock::new(),
            class_reps: OnceLock::new(),
        };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    /// Closure of permutation generators, enumerated breadth first.
    pub fn from_perm_generators(name: &str, degree: usize, generators: &[Perm]) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::from_perm_generators_capped(name, degree, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn from_perm_generators_capped(
        name: &str,
        degree: usize,
        generators: &[Perm],
        cap: usize,
    ) -> Result<FiniteGroup, GroupError> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::InvalidPermutation(degree));
        }
        let identity = Perm::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Perm, u32> = HashMap::new();
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = elements[i].then(g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(GroupError::ClosureCap(cap));
                    }
                    index.insert(p.clone(), elements.len() as u32);
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let mut gens: Vec<usize> = generators.iter().map(|g| index[g] as usize).filter(|&i| i != 0).collect();
        gens.dedup();
        let mut g = FiniteGroup {
            name: name.to_string(),
            order: elements.len(),
            realization: Realization::Permutation {
                degree,
                generators: generators.to_vec(),
                elements,
                index,
            },
            table: None,
            inverses,
            generators: gens,
            element_orders: OnceLock::new(),
            class_reps: OnceLock::new(),
        };
        g.build_table();
        Ok(g)
    }

    /// `SL_2(F_p)`.
    pub fn sl2(p: u32) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::matrix_group(p, false)
    }

    /// `PSL_2(F_p) = SL_2(F_p) / {±I}`, each class represented by the
    /// lexicographically smaller of `M` and `-M`.
    pub fn psl2(p: u32) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::matrix_group(p, true)
    }

    fn matrix_group(p: u32, projective: bool) -> Result<FiniteGroup, GroupError> {
        if !is_prime(p as u64) {
            return Err(GroupError::NotPrime(p));
        }
        if p > MAX_MATRIX_PRIME {
            return Err(GroupError::PrimeTooLarge(p));
        }
        let mut elements = vec![Mat2::IDENTITY];
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let m = Mat2 { a, b, c, d };
                        if m.det(p) != 1 || m.is_identity() {
                            continue;
                        }
                        if projective && (m.projective_canonical(p) != m || m.is_projective_identity(p)) {
                            continue;
                        }
                        elements.push(m);
                    }
                }
            }
        }
        let size = (p as usize).pow(4);
        let mut index = vec![u32::MAX; size];
        for (i, m) in elements.iter().enumerate() {
            index[m.code(p)] = i as u32;
        }
        let lookup = |m: Mat2| -> u32 {
            let m = if projective { m.projective_canonical(p) } else { m };
            index[m.code(p)]
        };
        let inverses = elements.iter().map(|m| lookup(m.inverse_sl(p))).collect();
        let gens: Vec<usize> = [Mat2::new(1, 1, 0, 1, p), Mat2::new(1, 0, 1, 1, p)]
            .iter()
            .map(|&m| lookup(m) as usize)
            .collect();
        let name = format!("{}({})", if projective { "PSL2" } else { "SL2" }, p);
        let mut g = FiniteGroup {
            name,
            order: elements.len(),
            realization: Realization::Matrix {
                p,
                projective,
                elements,
                index,
            },
            table: None,
            inverses,
            generators: gens,
            element_orders: OnceLock::new(),
            class_reps: OnceLock::new(),
        };
        g.build_table();
        Ok(g)
    }

    fn build_table(&mut self) {
        if self.order > TABLE_LIMIT {
            return;
        }
        let n = self.order;
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.mul_slow(a, b) as u32;
            }
        }
        self.table = Some(t);
    }

    fn mul_slow(&self, a: usize, b: usize) -> usize {
        match &self.realization {
            Realization::Cayley => self.table.as_ref().expect("cayley groups carry a table")[a * self.order + b] as usize,
            Realization::Permutation { elements, index, .. } => index[&elements[a].then(&elements[b])] as usize,
            Realization::Matrix {
                p,
                projective,
                elements,
                index,
            } => {
                let m = elements[a].mul(&elements[b], *p);
                let m = if *projective { m.projective_canonical(*p) } else { m };
                index[m.code(*p)] as usize
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    /// Flat multiplication table, when precomputed.
    pub fn table(&self) -> Option<&[u32]> {
        self.table.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order + b] as usize,
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `a^e` for any integer `e`.
    pub fn pow(&self, a: usize, e: i64) -> usize {
        let mut base = if e < 0 { self.inverse(a) } else { a };
        let mut n = e.unsigned_abs();
        let mut acc = 0;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Generators used for coset actions and conjugation closures.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, g: usize) -> u64 {
        self.element_orders()[g]
    }

    pub fn element_orders(&self) -> &[u64] {
        self.element_orders.get_or_init(|| {
            (0..self.order)
                .map(|g| {
                    let mut t = 1;
                    let mut x = g;
                    while x != 0 {
                        x = self.mul(x, g);
                        t += 1;
                    }
                    t
                })
                .collect()
        })
    }

    /// Element orders sorted in descending order.
    pub fn order_profile(&self) -> Vec<u64> {
        let mut v = self.element_orders().to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for &g in gens {
                let p = self.mul(e, g);
                if !member[p] {
                    member[p] = true;
                    out.push(p);
                    queue.push_back(p);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let orders = self.element_orders().to_vec();
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut gens = Vec::new();
        let mut covered = 1;
        while covered < self.order {
            let next = (0..self.order)
                .filter(|&g| !member[g])
                .max_by(|&a, &b| orders[a].cmp(&orders[b]).then(b.cmp(&a)))
                .expect("uncovered element exists");
            gens.push(next);
            let sub = self.subgroup_generated(&gens);
            covered = sub.len();
            for s in sub {
                member[s] = true;
            }
        }
        gens
    }

    pub fn check_element(&self, g: usize) -> Result<(), GroupError> {
        if g < self.order {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange(g))
        }
    }

    fn membership(&self, set: &[usize]) -> Result<Vec<bool>, GroupError> {
        let mut member = vec![false; self.order];
        for &s in set {
            self.check_element(s)?;
            member[s] = true;
        }
        Ok(member)
    }

    /// Whether `set` is a subgroup: contains the identity and is closed under
    /// products (closure under inverses follows in a finite group).
    pub fn is_subgroup(&self, set: &[usize]) -> Result<bool, GroupError> {
        let member = self.membership(set)?;
        if !member[0] {
            return Ok(false);
        }
        Ok(set.iter().all(|&a| set.iter().all(|&b| member[self.mul(a, b)])))
    }

    pub fn is_normal(&self, set: &[usize]) -> Result<bool, GroupError> {
        if !self.is_subgroup(set)? {
            return Err(GroupError::NotSubgroup);
        }
        let member = self.membership(set)?;
        // conjugation by a generating set suffices
        Ok(self.generators.iter().all(|&g| {
            let gi = self.inverse(g);
            set.iter().all(|&s| member[self.mul(self.mul(gi, s), g)])
        }))
    }

    /// Sorted elements of `⟨x^ell⟩`.
    pub fn cyclic_subgroup(&self, x: usize, ell: u64) -> Vec<usize> {
        let y = self.pow(x, ell as i64);
        let mut out = vec![0];
        let mut cur = y;
        while cur != 0 {
            out.push(cur);
            cur = self.mul(cur, y);
        }
        out.sort_unstable();
        out
    }

    /// Smallest `ell ≥ 1` with `⟨x^ell⟩` normal.
    pub fn lucchini_ell(&self, x: usize) -> u64 {
        let n = self.element_order(x);
        (1..=n)
            .find(|&ell| self.is_normal(&self.cyclic_subgroup(x, ell)).expect("cyclic subgroups are subgroups"))
            .unwrap_or(n)
    }

    /// Smallest element index of every conjugacy class, ascending.
    pub fn class_representatives(&self) -> &[usize] {
        self.class_reps.get_or_init(|| {
            let mut assigned = vec![false; self.order];
            let mut reps = Vec::new();
            for a in 0..self.order {
                if assigned[a] {
                    continue;
                }
                reps.push(a);
                assigned[a] = true;
                let mut queue = VecDeque::from([a]);
                while let Some(c) = queue.pop_front() {
                    for &g in &self.generators {
                        let d = self.mul(self.mul(self.inverse(g), c), g);
                        if !assigned[d] {
                            assigned[d] = true;
                            queue.push_back(d);
                        }
                    }
                }
            }
            reps
        })
    }

    /// Action on the right cosets `Hg`, one permutation per generator.
    pub fn coset_action(&self, subgroup: &[usize]) -> Result<TransitiveAction, GroupError> {
        if !self.is_subgroup(subgroup)? {
            return Err(GroupError::NotSubgroup);
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &h in subgroup {
                coset_of[self.mul(h, g)] = c;
            }
        }
        let generators = self
            .generators
            .iter()
            .map(|&s| {
                let images = reps.iter().map(|&r| coset_of[self.mul(r, s)] as u32).collect();
                Perm::from_images(images).expect("right multiplication permutes cosets")
            })
            .collect();
        TransitiveAction::new(reps.len(), generators)
    }

    /// Human-readable form of element `g`.
    pub fn describe_element(&self, g: usize) -> String {
        match &self.realization {
            Realization::Cayley => format!("e{}", g),
            Realization::Permutation { elements, .. } => elements[g].to_string(),
            Realization::Matrix { elements, .. } => elements[g].to_string(),
        }
    }
}

/// A transitive permutation action with basepoint 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveAction {
    degree: usize,
    generators: Vec<Perm>,
}

impl TransitiveAction {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<TransitiveAction, GroupError> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::InvalidPermutation(degree));
        }
        let mut seen = vec![false; degree];
        if degree > 0 {
            seen[0] = true;
        }
        let mut stack = vec![0usize];
        let mut reached = usize::from(degree > 0);
        while let Some(p) = stack.pop() {
            for g in &generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    reached += 1;
                    stack.push(q);
                }
            }
        }
        if reached != degree {
            return Err(GroupError::NotTransitive);
        }
        Ok(TransitiveAction { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }
}

/// Outcome of checking a transitive action against Lucchini's bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LucchiniReport {
    pub degree: usize,
    pub group_order: usize,
    pub stabilizer_order: usize,
    pub stabilizer_cyclic: bool,
    /// `!stabilizer_cyclic || group_order <= degree^2 - degree`
    pub holds: bool,
}

/// Checks that a transitive group of degree `n > 1` with cyclic point
/// stabilizer has order at most `n^2 - n`.
pub fn verify_lucchini(action: &TransitiveAction) -> Result<LucchiniReport, GroupError> {
    let n = action.degree();
    if n <= 1 {
        return Err(GroupError::DegreeOne);
    }
    let group = FiniteGroup::from_perm_generators("action", n, action.generators())?;
    let Realization::Permutation { elements, .. } = group.realization() else {
        unreachable!("permutation closure");
    };
    let stabilizer: Vec<usize> = (0..group.order()).filter(|&g| elements[g].apply(0) == 0).collect();
    let cyclic = stabilizer.iter().any(|&g| group.element_order(g) as usize == stabilizer.len());
    let bound = n * n - n;
    Ok(LucchiniReport {
        degree: n,
        group_order: group.order(),
        stabilizer_order: stabilizer.len(),
        stabilizer_cyclic: cyclic,
        holds: !cyclic || group.order() <= bound,
    })
}

/// `Z/n` generated by an `n`-cycle.
pub fn cyclic(n: usize) -> FiniteGroup {
    let cycle: Vec<usize> = (0..n).collect();
    let g = Perm::from_cycles(n, &[cycle]).expect("valid cycle");
    FiniteGroup::from_perm_generators(&format!("Z{}", n), n, &[g]).expect("cyclic group")
}

/// `S_n` generated by a transposition and an `n`-cycle.
pub fn symmetric(n: usize) -> FiniteGroup {
    let cycle: Vec<usize> = (0..n).collect();
    let gens = if n < 2 {
        vec![Perm::identity(n)]
    } else {
        vec![
            Perm::from_cycles(n, &[vec![0, 1]]).expect("valid"),
            Perm::from_cycles(n, &[cycle]).expect("valid"),
        ]
    };
    FiniteGroup::from_perm_generators(&format!("S{}", n), n, &gens).expect("symmetric group")
}

/// Dihedral group of order `2n` acting on the `n`-gon (`n ≥ 3`).
pub fn dihedral(n: usize) -> FiniteGroup {
    let rotation = Perm::from_cycles(n, &[(0..n).collect()]).expect("valid");
    let reflection: Vec<Vec<usize>> = (1..n).filter(|&i| i < n - i).map(|i| vec![i, n - i]).collect();
    let reflection = Perm::from_cycles(n, &reflection).expect("valid");
    FiniteGroup::from_perm_generators(&format!("D{}", 2 * n), n, &[rotation, reflection]).expect("dihedral group")
}

/// Index of a permutation in a permutation group.
pub fn perm_index(group: &FiniteGroup, p: &Perm) -> Option<usize> {
    match group.realization() {
        Realization::Permutation { index, .. } => index.get(p).map(|&i| i as usize),
        _ => None,
    }
}

/// Index of a matrix in a matrix group (any sign in the projective case).
pub fn matrix_index(group: &FiniteGroup, m: Mat2) -> Option<usize> {
    match group.realization() {
        Realization::Matrix {
            p,
            projective,
            index,
            ..
        } => {
            let m = Mat2::new(m.a, m.b, m.c, m.d, *p);
            let m = if *projective { m.projective_canonical(*p) } else { m };
            match index[m.code(*p)] {
                u32::MAX => None,
                i => Some(i as usize),
            }
        }
        _ => None,
    }
}
