//! Exhaustive-search oracles for isotropy and the Hilbert symbol.
//!
//! Nothing here uses Legendre symbols, reciprocity or the closed-form
//! Hilbert symbol. A diagonal form `sum c_i X_i^2` has a nontrivial zero over
//! `Q_p` iff it has one with some coordinate equal to 1; a point `X` modulo
//! `p^K` lifts to a true zero when `f(X) ≡ 0 (mod p^(2e+1))` with
//! `e = ord_p(2 c_j X_j)` for some `j` (Hensel). Coefficients are first
//! reduced to valuation 0 or 1 by removing `p^2` factors, and units to a
//! canonical square-class representative found by brute force, so a modest
//! fixed `K` suffices and results can be memoized.

use std::collections::HashMap;

use crate::arith::split_power;

/// Memoizing isotropy oracle.
#[derive(Debug, Default)]
pub struct IsotropyOracle {
    cache: HashMap<(u64, [i128; 3]), bool>,
    classes: HashMap<(u64, i128), i128>,
}

fn is_square_mod(u: i128, modulus: i128) -> bool {
    let u = u.rem_euclid(modulus);
    (0..modulus).any(|y| y * y % modulus == u)
}

impl IsotropyOracle {
    pub fn new() -> Self {
        Self::default()
    }

    // Canonical representative of the square class of a p-adic unit. A unit
    // is a square in Z_p iff it is a square mod p (odd p) or mod 8 (p = 2).
    fn unit_class(&mut self, p: u64, u: i128) -> i128 {
        let pi = p as i128;
        let key_mod = if p == 2 { 8 } else { pi };
        let r = u.rem_euclid(key_mod);
        if let Some(&c) = self.classes.get(&(p, r)) {
            return c;
        }
        let class = if p == 2 {
            r
        } else if is_square_mod(r, pi) {
            1
        } else {
            (2..pi).find(|&z| !is_square_mod(z, pi)).expect("odd primes have non-squares")
        };
        self.classes.insert((p, r), class);
        class
    }

    fn reduce(&mut self, p: u64, c: i128) -> i128 {
        let (e, u) = split_power(c, p);
        let unit = self.unit_class(p, u);
        if e % 2 == 1 {
            unit * p as i128
        } else {
            unit
        }
    }

    /// Whether `c_1 X^2 + c_2 Y^2 + c_3 Z^2` has a nontrivial zero over `Q_p`.
    pub fn is_isotropic(&mut self, p: u64, coeffs: [i128; 3]) -> bool {
        assert!(coeffs.iter().all(|&c| c != 0), "coefficients must be nonzero");
        let mut key = coeffs.map(|c| self.reduce(p, c));
        key.sort_unstable();
        if let Some(&hit) = self.cache.get(&(p, key)) {
            return hit;
        }
        let found = search(p, key);
        self.cache.insert((p, key), found);
        found
    }

    /// `(x, y)_p` as solvability of `z^2 = x w^2 + y t^2`.
    pub fn hilbert(&mut self, p: u64, x: i128, y: i128) -> i8 {
        if self.is_isotropic(p, [1, -x, -y]) {
            1
        } else {
            -1
        }
    }
}

fn ord(mut n: i128, p: i128, cap: u32) -> u32 {
    if n == 0 {
        return cap;
    }
    let mut e = 0;
    while e < cap && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

// Reduced coefficients have ord <= 1, so a primitive zero scaled to have a
// coordinate 1 has e <= ord(2) + 1 on that coordinate; K = 2e + 1 suffices.
fn search(p: u64, c: [i128; 3]) -> bool {
    let pi = p as i128;
    let ord2 = u32::from(p == 2);
    let k = 2 * (ord2 + 1) + 1;
    let modulus = pi.pow(k);
    for fixed in 0..3 {
        let (j, l) = ((fixed + 1) % 3, (fixed + 2) % 3);
        for y in 0..modulus {
            for z in 0..modulus {
                let mut x = [0i128; 3];
                x[fixed] = 1;
                x[j] = y;
                x[l] = z;
                let f = (0..3)
                    .map(|i| c[i] * (x[i] * x[i] % modulus))
                    .sum::<i128>()
                    .rem_euclid(modulus);
                let lifts = (0..3).any(|i| {
                    let e = ord(2 * c[i] * x[i] % modulus, pi, k);
                    2 * e < k && f % pi.pow(2 * e + 1) == 0
                });
                if lifts {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_forms() {
        let mut oracle = IsotropyOracle::new();
        assert!(!oracle.is_isotropic(2, [1, 1, 1]));
        assert!(!oracle.is_isotropic(2, [1, 2, 3]));
        assert!(oracle.is_isotropic(3, [1, 2, 3]));
        for p in [2, 3, 5, 7] {
            assert!(oracle.is_isotropic(p, [1, 1, -1]));
            // x^2 + y^2 + z^2 is isotropic at every odd prime
            assert_eq!(oracle.is_isotropic(p, [1, 1, 1]), p != 2);
        }
        // the norm form of Z_p[i] times p is anisotropic at p ≡ 3 (mod 4)
        assert!(!oracle.is_isotropic(3, [1, 1, 3]));
        assert!(oracle.is_isotropic(5, [1, 1, 5]));
    }

    #[test]
    fn hilbert_by_search_examples() {
        let mut oracle = IsotropyOracle::new();
        assert_eq!(oracle.hilbert(2, -1, -1), -1);
        assert_eq!(oracle.hilbert(2, 2, 3), -1);
        assert_eq!(oracle.hilbert(2, 2, 5), -1);
        assert_eq!(oracle.hilbert(2, 3, 5), 1);
        assert_eq!(oracle.hilbert(3, -1, 3), -1);
        for p in [3u64, 5, 7] {
            for u in 1..p as i128 {
                for w in 1..p as i128 {
                    assert_eq!(oracle.hilbert(p, u, w), 1);
                }
            }
        }
    }
}
