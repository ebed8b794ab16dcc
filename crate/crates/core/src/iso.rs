//! Isomorphism testing by backtracking over generator images.

use std::collections::VecDeque;

use crate::group::FiniteGroup;

/// A spanning tree of `⟨g_1, ..., g_j⟩`: each entry is
/// `(element, parent, generator slot)` with `element = parent * g_slot`.
type Span = Vec<(usize, usize, usize)>;

fn spans(g: &FiniteGroup, gens: &[usize]) -> Vec<Span> {
    (1..=gens.len())
        .map(|j| {
            let mut seen = vec![false; g.order()];
            seen[0] = true;
            let mut span = Vec::new();
            let mut queue = VecDeque::from([0usize]);
            while let Some(e) = queue.pop_front() {
                for (slot, &s) in gens[..j].iter().enumerate() {
                    let p = g.mul(e, s);
                    if !seen[p] {
                        seen[p] = true;
                        span.push((p, e, slot));
                        queue.push_back(p);
                    }
                }
            }
            span
        })
        .collect()
}

/// An isomorphism `G -> H` as an image vector, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.order_profile() != h.order_profile() {
        return None;
    }
    if g.is_abelian() != h.is_abelian() || g.class_representatives().len() != h.class_representatives().len() {
        return None;
    }
    let gens: Vec<usize> = g.generators().to_vec();
    if gens.is_empty() {
        return Some(vec![0]);
    }
    let spans = spans(g, &gens);
    let g_orders = g.element_orders();
    let h_orders = h.element_orders();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (1..h.order()).filter(|&t| h_orders[t] == g_orders[s]).collect())
        .collect();
    let mut images = vec![0usize; gens.len()];
    let mut map = vec![usize::MAX; g.order()];
    if extend(g, h, &gens, &spans, &candidates, &mut images, &mut map, 0) {
        Some(map)
    } else {
        None
    }
}

pub fn isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    find_isomorphism(g, h).is_some()
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    spans: &[Span],
    candidates: &[Vec<usize>],
    images: &mut [usize],
    map: &mut [usize],
    j: usize,
) -> bool {
    if j == gens.len() {
        return true;
    }
    for &t in &candidates[j] {
        images[j] = t;
        if consistent(g, h, gens, &spans[j], images, j + 1, map) && extend(g, h, gens, spans, candidates, images, map, j + 1)
        {
            return true;
        }
    }
    false
}

/// Builds the map on `⟨g_1..g_k⟩` along the spanning tree and checks that it
/// is an injective homomorphism there.
fn consistent(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    span: &Span,
    images: &[usize],
    k: usize,
    map: &mut [usize],
) -> bool {
    map.iter_mut().for_each(|m| *m = usize::MAX);
    let mut used = vec![false; h.order()];
    map[0] = 0;
    used[0] = true;
    for &(e, parent, slot) in span {
        let v = h.mul(map[parent], images[slot]);
        if used[v] {
            return false;
        }
        used[v] = true;
        map[e] = v;
    }
    for &(e, _, _) in span.iter().chain(std::iter::once(&(0, 0, 0))) {
        for slot in 0..k {
            let target = map[g.mul(e, gens[slot])];
            if target != h.mul(map[e], images[slot]) {
                return false;
            }
        }
    }
    true
}
