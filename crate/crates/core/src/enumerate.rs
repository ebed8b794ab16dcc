//! Backtracking enumeration of Cayley tables.
//!
//! The identity is fixed at label 0 and cells are filled in the order
//! `(max(i, j), i, j)`. Labels are standardized by first appearance: a cell
//! whose product is not yet labelled must receive the next free label, and when
//! the labelled elements close up into a subgroup the next label is introduced
//! as a fresh element outside it. Every group therefore has only a handful of
//! standardized tables (one per choice of those fresh elements), which keeps
//! the search small while still reaching every isomorphism class.
//!
//! Pruning combines the Latin-square constraints with associativity
//! propagation: whenever three of the four products in `(ab)c = a(bc)` are
//! known, the fourth is forced.

const EMPTY: u8 = u8::MAX;

/// Largest order the enumerator accepts (labels fit in a `u32` bitmask).
pub const MAX_ENUMERATION_ORDER: usize = 31;

struct Search<'a> {
    n: usize,
    table: Vec<u8>,
    /// `col_of[a * n + v] = b` when `a * b = v`.
    col_of: Vec<u8>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    trail: Vec<usize>,
    queue: Vec<(usize, usize)>,
    cells: Vec<(usize, usize)>,
    seen: usize,
    emit: &'a mut dyn FnMut(&[u8]),
}

impl Search<'_> {
    #[inline]
    fn get(&self, a: usize, b: usize) -> u8 {
        self.table[a * self.n + b]
    }

    /// Sets `a * b = v`, queueing it for propagation. Returns false on a
    /// Latin-square conflict.
    fn set(&mut self, a: usize, b: usize, v: usize) -> bool {
        let n = self.n;
        let cur = self.table[a * n + b];
        if cur != EMPTY {
            return cur as usize == v;
        }
        if self.row_used[a] & (1 << v) != 0 || self.col_used[b] & (1 << v) != 0 {
            return false;
        }
        self.table[a * n + b] = v as u8;
        self.col_of[a * n + v] = b as u8;
        self.row_used[a] |= 1 << v;
        self.col_used[b] |= 1 << v;
        self.trail.push(a * n + b);
        self.queue.push((a, b));
        true
    }

    fn undo(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            let cell = self.trail.pop().expect("trail above mark");
            let (a, b) = (cell / n, cell % n);
            let v = self.table[cell] as usize;
            self.table[cell] = EMPTY;
            self.col_of[a * n + v] = EMPTY;
            self.row_used[a] &= !(1 << v);
            self.col_used[b] &= !(1 << v);
        }
        self.queue.clear();
    }

    /// Enforces `x * y = z` given `x, y` possibly unknown: returns false on
    /// conflict, otherwise sets the product if both factors are known.
    fn require(&mut self, lhs: (u8, u8), rhs: (u8, u8)) -> bool {
        // (p, q) stands for the product p*q; EMPTY means unknown
        let l = if lhs.0 == EMPTY || lhs.1 == EMPTY {
            EMPTY
        } else {
            self.get(lhs.0 as usize, lhs.1 as usize)
        };
        let r = if rhs.0 == EMPTY || rhs.1 == EMPTY {
            EMPTY
        } else {
            self.get(rhs.0 as usize, rhs.1 as usize)
        };
        match (l != EMPTY, r != EMPTY) {
            (true, true) => l == r,
            (true, false) if rhs.0 != EMPTY && rhs.1 != EMPTY => self.set(rhs.0 as usize, rhs.1 as usize, l as usize),
            (false, true) if lhs.0 != EMPTY && lhs.1 != EMPTY => self.set(lhs.0 as usize, lhs.1 as usize, r as usize),
            _ => true,
        }
    }

    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some((i, j)) = self.queue.pop() {
            let v = self.get(i, j);
            for x in 0..n {
                // (x i) j = x (i j)
                let xi = self.get(x, i);
                if xi != EMPTY && !self.require((xi, j as u8), (x as u8, v)) {
                    return false;
                }
                // (i j) x = i (j x)
                let jx = self.get(j, x);
                if jx != EMPTY && !self.require((v, x as u8), (i as u8, jx)) {
                    return false;
                }
                // i = x y  =>  (x y) j = x (y j)
                let y = self.col_of[x * n + i];
                if y != EMPTY {
                    let yj = self.get(y as usize, j);
                    if yj != EMPTY {
                        let xyj = self.get(x, yj as usize);
                        if xyj != EMPTY {
                            if xyj as usize != v as usize {
                                return false;
                            }
                        } else if !self.set(x, yj as usize, v as usize) {
                            return false;
                        }
                    } else {
                        // x (y j) = v forces y j = col_of[x][v]
                        let c = self.col_of[x * n + v as usize];
                        if c != EMPTY && !self.set(y as usize, j, c as usize) {
                            return false;
                        }
                    }
                }
                // j = y x  =>  i (y x) = (i y) x
                let yy = self.col_of[x * n + j];
                // here x plays the left factor y of j = x * yy
                if yy != EMPTY {
                    let ix = self.get(i, x);
                    if ix != EMPTY {
                        let ixyy = self.get(ix as usize, yy as usize);
                        if ixyy != EMPTY {
                            if ixyy != v {
                                return false;
                            }
                        } else if !self.set(ix as usize, yy as usize, v as usize) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, mut pos: usize) {
        while pos < self.cells.len() {
            let (i, j) = self.cells[pos];
            if i.max(j) >= self.seen || self.get(i, j) == EMPTY {
                break;
            }
            pos += 1;
        }
        if pos == self.cells.len() {
            if self.seen == self.n {
                (self.emit)(&self.table);
            }
            return;
        }
        let (i, j) = self.cells[pos];
        if i.max(j) >= self.seen {
            // labelled elements form a subgroup: introduce a fresh element
            self.seen += 1;
            self.run(pos);
            self.seen -= 1;
            return;
        }
        let limit = if self.seen < self.n { self.seen + 1 } else { self.seen };
        for v in 0..limit {
            let mark = self.trail.len();
            let old_seen = self.seen;
            if v == self.seen {
                self.seen += 1;
            }
            if self.set(i, j, v) && self.propagate() {
                self.run(pos + 1);
            }
            self.undo(mark);
            self.seen = old_seen;
        }
    }
}

/// Calls `emit` with every standardized Cayley table of order `n` (flat,
/// row-major). Tables of isomorphic groups repeat; callers deduplicate.
pub fn for_each_table(n: usize, emit: &mut dyn FnMut(&[u8])) {
    assert!((1..=MAX_ENUMERATION_ORDER).contains(&n));
    let mut s = Search {
        n,
        table: vec![EMPTY; n * n],
        col_of: vec![EMPTY; n * n],
        row_used: vec![0; n],
        col_used: vec![0; n],
        trail: Vec::new(),
        queue: Vec::new(),
        cells: Vec::new(),
        seen: 1,
        emit,
    };
    for x in 0..n {
        s.set(0, x, x);
        if x > 0 {
            s.set(x, 0, x);
        }
    }
    s.trail.clear();
    s.queue.clear();
    let mut cells: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..n).map(move |j| (i, j))).collect();
    cells.sort_by_key(|&(i, j)| (i.max(j), i, j));
    s.cells = cells;
    s.run(0);
}
