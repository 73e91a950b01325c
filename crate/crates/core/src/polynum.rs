//! Generalized polygonal numbers and the completing-the-square reduction.
//!
//! For `m >= 3` the generalized m-gonal numbers are
//! `P_m(x) = ((m-2)x^2 - (m-4)x) / 2` with `x` ranging over all integers.
//! A sum `P_a(x) + P_b(y) + P_c(z) = n` is equivalent, after multiplying by
//! `8(a-2)(b-2)(c-2)` and completing squares, to a representation of the
//! target `l_n + v` by a diagonal ternary form restricted to a coset of a
//! lattice. [`TripleInvariants`] carries every scalar that reduction needs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, isqrt};
use crate::error::{domain, Error, Result};

/// Order `m >= 3` of a generalized polygonal sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct PolygonalOrder(i64);

impl TryFrom<i64> for PolygonalOrder {
    type Error = Error;

    fn try_from(m: i64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<PolygonalOrder> for i64 {
    fn from(m: PolygonalOrder) -> i64 {
        m.0
    }
}

impl PolygonalOrder {
    pub fn new(m: i64) -> Result<Self> {
        if m < 3 {
            return domain(format!("polygonal order must be >= 3, got {m}"));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    fn lead(self) -> i128 {
        self.0 as i128 - 2
    }

    fn linear(self) -> i128 {
        self.0 as i128 - 4
    }

    /// `P_m(x)`, exactly. Errors only if the value leaves the 128-bit range.
    pub fn eval(self, x: i64) -> Result<i128> {
        let x = x as i128;
        let overflow = || Error::Overflow(format!("P_{}({x})", self.0));
        let quad = self.lead().checked_mul(x * x).ok_or_else(overflow)?;
        let lin = self.linear().checked_mul(x).ok_or_else(overflow)?;
        let twice = quad.checked_sub(lin).ok_or_else(overflow)?;
        Ok(twice / 2)
    }

    // Only for enumeration loops where |x| is already bounded by the range
    // computed from a 64-bit target.
    fn eval_small(self, x: i64) -> i128 {
        let x = x as i128;
        (self.lead() * x * x - self.linear() * x) / 2
    }

    /// Some `x` with `P_m(x) = k`, preferring the smaller `|x|` and then the
    /// nonnegative root.
    pub fn inverse(self, k: i128) -> Option<i64> {
        let (lead, lin) = (self.lead(), self.linear());
        let disc = lead.checked_mul(8)?.checked_mul(k)?.checked_add(lin * lin)?;
        let s = exact_sqrt(disc)?;
        let denom = 2 * lead;
        let mut roots: Vec<i128> = [lin + s, lin - s]
            .into_iter()
            .filter(|num| num % denom == 0)
            .map(|num| num / denom)
            .collect();
        roots.sort_by_key(|x| (x.abs(), *x < 0));
        roots.into_iter().find_map(|x| i64::try_from(x).ok())
    }

    /// Inclusive range of `x` with `P_m(x) <= n`, from the exact integer
    /// square root of the discriminant.
    pub fn range_up_to(self, n: u64) -> (i64, i64) {
        let (lead, lin) = (self.lead(), self.linear());
        let disc = lin * lin + 8 * lead * n as i128;
        let s = isqrt(disc).expect("discriminant is positive");
        let q = 2 * lead;
        // floor((lin + sqrt D) / q) and ceil((lin - sqrt D) / q)
        let hi = (lin + s).div_euclid(q);
        let lo = -(s - lin).div_euclid(q);
        debug_assert!(self.eval_small(hi as i64) <= n as i128);
        debug_assert!(self.eval_small(hi as i64 + 1) > n as i128);
        debug_assert!(self.eval_small(lo as i64) <= n as i128);
        debug_assert!(self.eval_small(lo as i64 - 1) > n as i128);
        (lo as i64, hi as i64)
    }

    /// Every `P_m(x) <= n`, one entry per `x` (so repeated values appear with
    /// their multiplicity).
    pub fn values_up_to(self, n: u64) -> Vec<u64> {
        let (lo, hi) = self.range_up_to(n);
        (lo..=hi).map(|x| self.eval_small(x) as u64).collect()
    }

    /// Distinct values `P_m(x) <= n`, ascending.
    pub fn distinct_values_up_to(self, n: u64) -> Vec<u64> {
        let mut v = self.values_up_to(n);
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// `P_m(x)` for an order `m` given as a plain integer.
pub fn eval_polygonal(m: PolygonalOrder, x: i64) -> Result<i128> {
    m.eval(x)
}

/// Inverse test: `Some(x)` with `P_m(x) = k`, or `None`.
pub fn is_generalized_polygonal(m: PolygonalOrder, k: i128) -> Option<i64> {
    m.inverse(k)
}

/// Admissible values of one completed-square variable: `u = coefficient`-weighted
/// and restricted to `u ≡ residue (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetAxis {
    pub order: i64,
    /// Weight of `u^2` in the diagonal form (product of the other two `m-2`).
    pub coefficient: i128,
    pub modulus: i128,
    pub residue: i128,
}

impl CosetAxis {
    /// Members of the residue class with `|u| <= bound`, ascending.
    fn members(&self, bound: i128) -> impl Iterator<Item = i128> {
        let modulus = self.modulus;
        let start = -bound + (self.residue + bound).rem_euclid(modulus);
        (0..)
            .map(move |k| start + k * modulus)
            .take_while(move |&u| u <= bound)
    }

    fn contains(&self, u: i128) -> bool {
        (u - self.residue).rem_euclid(self.modulus) == 0
    }
}

// Bounds keeping `l_coeff * n + shift` inside i128 for every n: u64.
const MAX_L_COEFF: i128 = 1 << 62;
const MAX_SHIFT: i128 = 1 << 125;

/// Scalars attached to a triple `(a, b, c)`.
///
/// The derived values are symmetric in `(a, b, c)`; `sorted` holds the
/// canonical ascending order and `original` the caller's order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleInvariants {
    pub original: [i64; 3],
    pub sorted: [i64; 3],
    /// 2 when a, b, c are all even, otherwise 0.
    pub delta: u8,
    /// `2^(3-delta) (a-2)(b-2)(c-2)`, the coefficient of `n` in the target.
    pub l_coeff: i128,
    /// `v_{a,b,c}`, the constant term of the target.
    pub shift: i128,
    /// `N = 2^((2-delta)/2) (a-2)(b-2)(c-2)`.
    pub level: i128,
    /// Coset data per axis, in `sorted` order.
    pub cosets: [CosetAxis; 3],
}

impl TripleInvariants {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let original = [a, b, c];
        for m in original {
            PolygonalOrder::new(m)?;
        }
        let mut sorted = original;
        sorted.sort_unstable();
        let overflow = || Error::Overflow(format!("invariants of ({a},{b},{c})"));

        let lead: [i128; 3] = sorted.map(|m| m as i128 - 2);
        let lin: [i128; 3] = sorted.map(|m| m as i128 - 4);
        let all_even = sorted.iter().all(|m| m % 2 == 0);
        let delta: u8 = if all_even { 2 } else { 0 };

        let product = lead[0]
            .checked_mul(lead[1])
            .and_then(|p| p.checked_mul(lead[2]))
            .ok_or_else(overflow)?;
        let (l_coeff, level) = if all_even {
            (product.checked_mul(2), Some(product))
        } else {
            (product.checked_mul(8), product.checked_mul(2))
        };
        let l_coeff = l_coeff.ok_or_else(overflow)?;
        let level = level.ok_or_else(overflow)?;

        let mut raw_shift: i128 = 0;
        let mut coefficients = [0i128; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            coefficients[i] = lead[j] * lead[k];
            let term = lin[i]
                .checked_mul(lin[i])
                .and_then(|sq| sq.checked_mul(coefficients[i]))
                .ok_or_else(overflow)?;
            raw_shift = raw_shift.checked_add(term).ok_or_else(overflow)?;
        }
        let shift = raw_shift >> delta;
        debug_assert_eq!(shift << delta, raw_shift);
        if l_coeff > MAX_L_COEFF || shift > MAX_SHIFT {
            return Err(overflow());
        }

        let cosets = std::array::from_fn(|i| {
            let (modulus, residue) = if all_even {
                (lead[i], (-lin[i] / 2).rem_euclid(lead[i]))
            } else {
                (2 * lead[i], (-lin[i]).rem_euclid(2 * lead[i]))
            };
            CosetAxis {
                order: sorted[i],
                coefficient: coefficients[i],
                modulus,
                residue,
            }
        });

        Ok(Self {
            original,
            sorted,
            delta,
            l_coeff,
            shift,
            level,
            cosets,
        })
    }

    pub fn orders(&self) -> [PolygonalOrder; 3] {
        self.sorted.map(PolygonalOrder)
    }

    /// `l_n + v_{a,b,c}`.
    pub fn target(&self, n: u64) -> i128 {
        self.l_coeff * n as i128 + self.shift
    }

    /// `a - 2`, `b - 2`, `c - 2` in sorted order.
    pub fn leads(&self) -> [i128; 3] {
        self.sorted.map(|m| m as i128 - 2)
    }

    pub fn all_divisible_by_four(&self) -> bool {
        self.sorted.iter().all(|m| m % 4 == 0)
    }
}

pub fn triple_invariants(a: i64, b: i64, c: i64) -> Result<TripleInvariants> {
    TripleInvariants::new(a, b, c)
}

pub fn target_number(t: &TripleInvariants, n: u64) -> i128 {
    t.target(n)
}

/// Number of `(x, y, z)` in `Z^3` with `P_a(x) + P_b(y) + P_c(z) = n`.
pub fn direct_representation_count(t: &TripleInvariants, n: u64) -> u64 {
    let [pa, pb, pc] = t.orders();
    let mut third: HashMap<u64, u64> = HashMap::new();
    for v in pc.values_up_to(n) {
        *third.entry(v).or_default() += 1;
    }
    let vb = pb.values_up_to(n);
    let mut count = 0;
    for x in pa.values_up_to(n) {
        for &y in &vb {
            if x + y <= n {
                count += third.get(&(n - x - y)).copied().unwrap_or(0);
            }
        }
    }
    count
}

/// Direct counts for every `n <= n_max`, by convolving the value
/// multiplicities of the three sequences.
pub fn direct_representation_counts(t: &TripleInvariants, n_max: u64) -> Vec<u64> {
    let len = n_max as usize + 1;
    let histogram = |m: PolygonalOrder| {
        let mut h = vec![0u64; len];
        for v in m.values_up_to(n_max) {
            h[v as usize] += 1;
        }
        h
    };
    let convolve = |f: &[u64], g: &[u64]| {
        let mut out = vec![0u64; len];
        for (i, &fi) in f.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &gj) in g[..len - i].iter().enumerate().filter(|(_, &c)| c != 0) {
                out[i + j] += fi * gj;
            }
        }
        out
    };
    let [pa, pb, pc] = t.orders();
    convolve(&convolve(&histogram(pa), &histogram(pb)), &histogram(pc))
}

/// Number of coset vectors `(u, w, s)` with
/// `C_1 u^2 + C_2 w^2 + C_3 s^2 = l_n + v_{a,b,c}` and each coordinate in its
/// residue class. Equal to [`direct_representation_count`] for every `n`.
pub fn coset_representation_count(t: &TripleInvariants, n: u64) -> u64 {
    let target = t.target(n);
    let [ca, cb, cc] = t.cosets;
    let mut count = 0;
    let bound_a = isqrt(target / ca.coefficient).unwrap_or(0);
    for u in ca.members(bound_a) {
        let rest = target - ca.coefficient * u * u;
        let bound_b = isqrt(rest / cb.coefficient).unwrap_or(0);
        for w in cb.members(bound_b) {
            let rem = rest - cb.coefficient * w * w;
            if rem % cc.coefficient != 0 {
                continue;
            }
            if let Some(s) = exact_sqrt(rem / cc.coefficient) {
                if cc.contains(s) {
                    count += 1;
                }
                if s != 0 && cc.contains(-s) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Coset counts for every `n <= n_max`, binning each lattice-coset vector by
/// the `n` its value corresponds to.
pub fn coset_representation_counts(t: &TripleInvariants, n_max: u64) -> Vec<u64> {
    let mut counts = vec![0u64; n_max as usize + 1];
    let top = t.target(n_max);
    let [ca, cb, cc] = t.cosets;
    let bound_a = isqrt(top / ca.coefficient).unwrap_or(0);
    for u in ca.members(bound_a) {
        let rest = top - ca.coefficient * u * u;
        let bound_b = isqrt(rest / cb.coefficient).unwrap_or(0);
        for w in cb.members(bound_b) {
            let partial = ca.coefficient * u * u + cb.coefficient * w * w;
            let bound_c = isqrt((top - partial) / cc.coefficient).unwrap_or(0);
            for s in cc.members(bound_c) {
                let value = partial + cc.coefficient * s * s;
                let offset = value - t.shift;
                if offset >= 0 && offset % t.l_coeff == 0 {
                    counts[(offset / t.l_coeff) as usize] += 1;
                }
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(m: i64) -> PolygonalOrder {
        PolygonalOrder::new(m).unwrap()
    }

    // Independent evaluation through the completed square:
    // 8(m-2) P_m(x) = (2(m-2)x - (m-4))^2 - (m-4)^2.
    fn completed_square(m: i64, x: i64) -> i128 {
        let (m, x) = (m as i128, x as i128);
        let u = 2 * (m - 2) * x - (m - 4);
        (u * u - (m - 4) * (m - 4)) / (8 * (m - 2))
    }

    #[test]
    fn eval_examples() {
        for m in 3..40 {
            assert_eq!(order(m).eval(1).unwrap(), 1);
            assert_eq!(order(m).eval(0).unwrap(), 0);
        }
        assert_eq!(order(4).eval(-2).unwrap(), 4);
        assert_eq!(order(5).eval(-1).unwrap(), 2);
        for m in 3..20 {
            for x in -50..50 {
                assert_eq!(order(m).eval(x).unwrap(), completed_square(m, x));
            }
        }
    }

    #[test]
    fn eval_is_exact_past_64_bits() {
        let m = order(1 << 40);
        let x = 1i64 << 40;
        let lead = (1i128 << 40) - 2;
        let lin = (1i128 << 40) - 4;
        let expected = (lead * (x as i128) * (x as i128) - lin * x as i128) / 2;
        assert_eq!(m.eval(x).unwrap(), expected);
        assert!(matches!(order(i64::MAX).eval(i64::MAX), Err(Error::Overflow(_))));
    }

    #[test]
    fn order_rejects_small() {
        assert!(PolygonalOrder::new(2).is_err());
        assert!(PolygonalOrder::new(-7).is_err());
        assert!(triple_invariants(2, 4, 5).is_err());
    }

    #[test]
    fn inverse_examples() {
        // enumerate P_5 over |x| <= 3: 0, 1, 5, 12, 2, 7, 15
        let brute: Vec<(i64, i128)> = (-3..=3).map(|x| (x, order(5).eval(x).unwrap())).collect();
        assert!(brute.contains(&(-1, 2)));
        assert_eq!(order(5).inverse(2), Some(-1));
        // triangular numbers near 5 are 3 and 6
        assert_eq!(order(3).inverse(5), None);
        assert_eq!(order(7).inverse(0), Some(0));
        assert_eq!(order(7).inverse(-3), None);
    }

    #[test]
    fn range_is_tight() {
        for m in 3..30 {
            for n in [0u64, 1, 2, 7, 100, 12345] {
                let (lo, hi) = order(m).range_up_to(n);
                let brute: Vec<i64> = (-500..=500)
                    .filter(|&x| order(m).eval(x).unwrap() <= n as i128)
                    .collect();
                assert_eq!((lo, hi), (brute[0], *brute.last().unwrap()), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn invariants_examples() {
        let t = triple_invariants(3, 4, 5).unwrap();
        assert_eq!((t.delta, t.l_coeff, t.shift, t.level), (0, 48, 8, 12));
        let t = triple_invariants(4, 4, 4).unwrap();
        assert_eq!((t.delta, t.l_coeff, t.shift, t.level), (2, 16, 0, 8));
        let t = triple_invariants(6, 8, 10).unwrap();
        assert_eq!((t.delta, t.l_coeff, t.shift, t.level), (2, 384, 392, 192));
    }

    #[test]
    fn invariants_keep_original_order() {
        let t = triple_invariants(5, 3, 4).unwrap();
        assert_eq!(t.original, [5, 3, 4]);
        assert_eq!(t.sorted, [3, 4, 5]);
        assert_eq!(t, TripleInvariants { original: [5, 3, 4], ..triple_invariants(3, 4, 5).unwrap() });
    }

    #[test]
    fn target_examples() {
        let t = triple_invariants(3, 4, 5).unwrap();
        assert_eq!(target_number(&t, 0), 8);
        assert_eq!(target_number(&t, 4), 200);
        assert_eq!(target_number(&triple_invariants(4, 4, 4).unwrap(), 1), 16);
    }

    // Plain triple loop over a box known to contain every solution.
    fn brute_count(a: i64, b: i64, c: i64, n: u64, r: i64) -> u64 {
        let mut count = 0;
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    let s = order(a).eval(x).unwrap() + order(b).eval(y).unwrap() + order(c).eval(z).unwrap();
                    if s == n as i128 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn direct_count_examples() {
        let t = triple_invariants(3, 4, 5).unwrap();
        assert_eq!(brute_count(3, 4, 5, 0, 2), 2);
        assert_eq!(direct_representation_count(&t, 0), 2);
        let t = triple_invariants(4, 4, 4).unwrap();
        assert_eq!(direct_representation_count(&t, 7), 0);
        assert_eq!(brute_count(3, 3, 3, 1, 3), 24);
        assert_eq!(direct_representation_count(&triple_invariants(3, 3, 3).unwrap(), 1), 24);
    }

    #[test]
    fn coset_count_examples() {
        let t = triple_invariants(3, 4, 5).unwrap();
        // target 8 = 6u^2 + 3w^2 + 2s^2, u odd, w ≡ 0 (mod 4), s ≡ 5 (mod 6)
        let mut brute = 0;
        for u in -3i128..=3 {
            for w in -3i128..=3 {
                for s in -3i128..=3 {
                    if 6 * u * u + 3 * w * w + 2 * s * s == 8
                        && u.rem_euclid(2) == 1
                        && w.rem_euclid(4) == 0
                        && s.rem_euclid(6) == 5
                    {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(brute, 2);
        assert_eq!(coset_representation_count(&t, 0), 2);
        assert_eq!(coset_representation_count(&t, 4), brute_count(3, 4, 5, 4, 4));

        let cube = triple_invariants(4, 4, 4).unwrap();
        for n in 0..60 {
            let squares = brute_count(4, 4, 4, n, 8);
            assert_eq!(coset_representation_count(&cube, n), squares, "n={n}");
        }
    }

    #[test]
    fn batch_counts_match_single() {
        for (a, b, c) in [(3, 4, 5), (6, 8, 10), (3, 3, 3), (5, 7, 12)] {
            let t = triple_invariants(a, b, c).unwrap();
            let direct = direct_representation_counts(&t, 150);
            let coset = coset_representation_counts(&t, 150);
            for n in 0..=150u64 {
                assert_eq!(direct[n as usize], direct_representation_count(&t, n));
                assert_eq!(coset[n as usize], coset_representation_count(&t, n));
            }
        }
    }
}
