//! Permutations of `{0, ..., n-1}` in image form.
//!
//! Composition is left to right: `a.then(b)` first applies `a`, then `b`, so
//! points are acted on from the right (`i^(ab) = (i^a)^b`). Every group built
//! from permutations in this crate multiplies this way.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("malformed cycle notation at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("point {point} out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated")]
    Repeated(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    /// From an image vector; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(PermError::OutOfRange { point: p, degree });
                }
                if used[p] {
                    return Err(PermError::Repeated(p));
                }
                used[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Perm, PermError> {
        let mut cycles = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number = String::new();
        let flush = |number: &mut String, current: &mut Option<Vec<usize>>, column: usize| {
            if number.is_empty() {
                return Ok(());
            }
            let v: usize = number.parse().map_err(|_| PermError::Syntax {
                column,
                message: "bad number".into(),
            })?;
            number.clear();
            match current {
                Some(c) => {
                    c.push(v);
                    Ok(())
                }
                None => Err(PermError::Syntax {
                    column,
                    message: "number outside a cycle".into(),
                }),
            }
        };
        for (column, ch) in text.chars().enumerate() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(PermError::Syntax {
                            column,
                            message: "nested '('".into(),
                        });
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush(&mut number, &mut current, column)?;
                    match current.take() {
                        Some(c) => cycles.push(c),
                        None => {
                            return Err(PermError::Syntax {
                                column,
                                message: "unmatched ')'".into(),
                            })
                        }
                    }
                }
                c if c.is_ascii_digit() => number.push(c),
                c if c.is_whitespace() || c == ',' => flush(&mut number, &mut current, column)?,
                c => {
                    return Err(PermError::Syntax {
                        column,
                        message: format!("unexpected '{}'", c),
                    })
                }
            }
        }
        if current.is_some() {
            return Err(PermError::Syntax {
                column: text.chars().count(),
                message: "unterminated cycle".into(),
            });
        }
        Perm::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Nontrivial cycles in canonical form: each starts at its smallest
    /// point, cycles ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Disjoint union: `self` on the first points, `other` shifted after it.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let shift = self.0.len() as u32;
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&i| i + shift));
        Perm(v)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
