//! 2×2 matrices over a prime field `F_p`.

use std::fmt;

/// Entries `[[a, b], [c, d]]`, each reduced mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn new(a: u32, b: u32, c: u32, d: u32, p: u32) -> Mat2 {
        Mat2 {
            a: a % p,
            b: b % p,
            c: c % p,
            d: d % p,
        }
    }

    pub fn mul(&self, o: &Mat2, p: u32) -> Mat2 {
        let p = p as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (e, f, g, h) = (o.a as u64, o.b as u64, o.c as u64, o.d as u64);
        Mat2 {
            a: ((a * e + b * g) % p) as u32,
            b: ((a * f + b * h) % p) as u32,
            c: ((c * e + d * g) % p) as u32,
            d: ((c * f + d * h) % p) as u32,
        }
    }

    pub fn det(&self, p: u32) -> u32 {
        let p64 = p as u64;
        let ad = self.a as u64 * self.d as u64 % p64;
        let bc = self.b as u64 * self.c as u64 % p64;
        ((ad + p64 - bc) % p64) as u32
    }

    pub fn neg(&self, p: u32) -> Mat2 {
        let n = |x: u32| (p - x) % p;
        Mat2 {
            a: n(self.a),
            b: n(self.b),
            c: n(self.c),
            d: n(self.d),
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl(&self, p: u32) -> Mat2 {
        Mat2 {
            a: self.d,
            b: (p - self.b) % p,
            c: (p - self.c) % p,
            d: self.a,
        }
    }

    /// `self^e` for `e ≥ 0` by repeated squaring.
    pub fn pow(&self, mut e: u64, p: u32) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            base = base.mul(&base, p);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::IDENTITY
    }

    /// Trivial in `PSL_2`: equal to `±I`.
    pub fn is_projective_identity(&self, p: u32) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d && (self.a == 1 || self.a == p - 1)
    }

    /// Lexicographically smaller of `self` and `-self`.
    pub fn projective_canonical(&self, p: u32) -> Mat2 {
        let n = self.neg(p);
        if n < *self {
            n
        } else {
            *self
        }
    }

    /// Dense code `a p^3 + b p^2 + c p + d`.
    pub fn code(&self, p: u32) -> usize {
        let p = p as usize;
        ((self.a as usize * p + self.b as usize) * p + self.c as usize) * p + self.d as usize
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}
