//! Explicit constructions of every group of order at most 16, one per
//! isomorphism class, as permutation groups.
//!
//! Most of them are metacyclic `⟨a, b | a^m, b^k = a^t, b⁻¹ab = a^r⟩` and are
//! realized through their right regular representation; the rest are direct
//! products, a semidirect product `(Z4 × Z2) ⋊ Z2`, and the Pauli group
//! acting on signed basis vectors.

use crate::group::FiniteGroup;
use crate::perm::Perm;

/// Number of groups of each order 1..=16 up to isomorphism.
pub const SMALL_GROUP_COUNTS: [usize; 16] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];

/// Largest order covered by [`SMALL_GROUP_COUNTS`].
pub const MAX_KNOWN_ORDER: usize = 16;

pub fn known_count(order: usize) -> Option<usize> {
    (1..=MAX_KNOWN_ORDER).contains(&order).then(|| SMALL_GROUP_COUNTS[order - 1])
}

/// Regular representation of a group given by its multiplication on
/// `0..size`, generated by `gens`.
fn regular(name: &str, size: usize, gens: &[usize], mul: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let perms: Vec<Perm> = gens
        .iter()
        .map(|&g| Perm::from_images((0..size).map(|x| mul(x, g) as u32).collect()).expect("regular action"))
        .collect();
    let group = FiniteGroup::from_perm_generators(name, size, &perms).expect("small closure");
    assert_eq!(group.order(), size, "{name}: presentation does not close up");
    group
}

/// `⟨a, b | a^m = 1, b^k = a^t, b⁻¹ a b = a^r⟩`, elements `a^i b^j`.
fn metacyclic(name: &str, m: usize, k: usize, r: usize, t: usize) -> FiniteGroup {
    // b^j a^i = a^(i r^-j) b^j, so (a^i b^j)(a^i' b^j') = a^(i + i' s^j) b^(j + j')
    // with s = r^-1 mod m; b⁻¹ab = a^r is the same as b a b⁻¹ = a^s.
    let s = (1..=m).find(|&s| (s * r) % m == 1 % m).unwrap_or(1);
    let spow = |j: usize| (0..j).fold(1 % m, |acc, _| acc * s % m);
    let mul = move |x: usize, y: usize| {
        let (i, j) = (x % m, x / m);
        let (i2, j2) = (y % m, y / m);
        let mut a = (i + i2 * spow(j)) % m;
        let mut b = j + j2;
        if b >= k {
            b -= k;
            a = (a + t) % m;
        }
        a + m * b
    };
    let gens: Vec<usize> = if k == 1 { vec![1 % (m * k)] } else { vec![1 % m, m] };
    regular(name, m * k, &gens, mul)
}

fn direct_product(name: &str, a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (pa, da) = perm_data(a);
    let (pb, db) = perm_data(b);
    let mut gens: Vec<Perm> = pa.iter().map(|p| p.direct_sum(&Perm::identity(db))).collect();
    gens.extend(pb.iter().map(|p| Perm::identity(da).direct_sum(p)));
    FiniteGroup::from_perm_generators(name, da + db, &gens).expect("direct product")
}

fn perm_data(g: &FiniteGroup) -> (Vec<Perm>, usize) {
    match g.realization() {
        crate::group::Realization::Permutation { degree, generators, .. } => (generators.clone(), *degree),
        _ => panic!("permutation group expected"),
    }
}

fn perms(name: &str, degree: usize, cycles: &[&str]) -> FiniteGroup {
    let gens: Vec<Perm> = cycles
        .iter()
        .map(|c| Perm::parse_cycles(degree, c).expect("valid cycle notation"))
        .collect();
    FiniteGroup::from_perm_generators(name, degree, &gens).expect("small closure")
}

fn cyclic(n: usize) -> FiniteGroup {
    if n == 1 {
        return perms("1", 1, &["()"]);
    }
    metacyclic(&format!("Z{}", n), n, 1, 1, 0)
}

fn dihedral(n: usize) -> FiniteGroup {
    metacyclic(&format!("D{}", 2 * n), n, 2, n - 1, 0)
}

/// `(Z4 × Z2) ⋊ Z2` where the involution `c` maps `a ↦ ab`, `b ↦ b`.
fn z4z2_by_z2() -> FiniteGroup {
    // element (i, j, l) = a^i b^j c^l, encoded i + 4j + 8l
    let phi = |i: usize, j: usize, l: usize| if l == 1 { (i, (j + i) % 2) } else { (i, j) };
    let mul = move |x: usize, y: usize| {
        let (i, j, l) = (x % 4, (x / 4) % 2, x / 8);
        let (i2, j2, l2) = (y % 4, (y / 4) % 2, y / 8);
        let (pi, pj) = phi(i2, j2, l);
        let (ni, nj, nl) = ((i + pi) % 4, (j + pj) % 2, (l + l2) % 2);
        ni + 4 * nj + 8 * nl
    };
    regular("(Z4xZ2):Z2", 16, &[1, 4, 8], mul)
}

/// The Pauli group `⟨X, Z, iI⟩` acting on the 8 points `i^e · basis_k`
/// (point `4k + e`).
fn pauli() -> FiniteGroup {
    perms(
        "Pauli",
        8,
        &["(0 4)(1 5)(2 6)(3 7)", "(4 6)(5 7)", "(0 1 2 3)(4 5 6 7)"],
    )
}

/// One representative per isomorphism class of groups of the given order,
/// for orders 1..=16.
pub fn classical_groups(order: usize) -> Vec<FiniteGroup> {
    let named = |mut g: FiniteGroup, name: &str| {
        g.set_name(name);
        g
    };
    match order {
        1 => vec![cyclic(1)],
        2 | 3 | 5 | 7 | 11 | 13 => vec![cyclic(order)],
        4 => vec![cyclic(4), direct_product("Z2xZ2", &cyclic(2), &cyclic(2))],
        6 => vec![cyclic(6), named(dihedral(3), "S3")],
        8 => vec![
            cyclic(8),
            direct_product("Z4xZ2", &cyclic(4), &cyclic(2)),
            direct_product("Z2^3", &direct_product("Z2xZ2", &cyclic(2), &cyclic(2)), &cyclic(2)),
            dihedral(4),
            metacyclic("Q8", 4, 2, 3, 2),
        ],
        9 => vec![cyclic(9), direct_product("Z3xZ3", &cyclic(3), &cyclic(3))],
        10 => vec![cyclic(10), dihedral(5)],
        12 => vec![
            cyclic(12),
            direct_product("Z6xZ2", &cyclic(6), &cyclic(2)),
            perms("A4", 4, &["(0 1 2)", "(0 1)(2 3)"]),
            dihedral(6),
            metacyclic("Dic12", 3, 4, 2, 0),
        ],
        14 => vec![cyclic(14), dihedral(7)],
        15 => vec![cyclic(15)],
        16 => {
            let z2 = cyclic(2);
            let z4 = cyclic(4);
            let z2xz2 = direct_product("Z2xZ2", &z2, &z2);
            vec![
                cyclic(16),
                direct_product("Z4xZ4", &z4, &z4),
                metacyclic("Z4:Z4", 4, 4, 3, 0),
                z4z2_by_z2(),
                direct_product("Z8xZ2", &cyclic(8), &z2),
                metacyclic("M16", 8, 2, 5, 0),
                dihedral(8),
                metacyclic("SD16", 8, 2, 3, 0),
                metacyclic("Q16", 8, 2, 7, 4),
                direct_product("Z4xZ2xZ2", &z4, &z2xz2),
                direct_product("D8xZ2", &dihedral(4), &z2),
                direct_product("Q8xZ2", &metacyclic("Q8", 4, 2, 3, 2), &z2),
                pauli(),
                direct_product("Z2^4", &direct_product("Z2^3", &z2xz2, &z2), &z2),
            ]
        }
        _ => Vec::new(),
    }
}
