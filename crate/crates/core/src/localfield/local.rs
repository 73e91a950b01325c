//! Local representability of `n` by `P_a(x) + P_b(y) + P_c(z)` over `Z_p`.
//!
//! Write `q_i(x) = (m_i - 2)x^2 - (m_i - 4)x = 2 P_{m_i}(x)` and
//! `g_i(x) = q_i'(x) = 2(m_i - 2)x - (m_i - 4)`. A `p`-adic solution of
//! `q_1 + q_2 + q_3 = 2n` exists iff for some `e` and some coordinate `i`
//! there is a point modulo `p^(2e+1)` with `ord_p(g_i) = e` and
//! `sum q ≡ 2n (mod p^(2e+1))` (Hensel's lemma, lifting coordinate `i`).
//! Since `g_i` is the completed-square coordinate (times 2 when all orders
//! are even), some solution has `e <= ord_p(l_n + v)/2 (+1 at p = 2 when all
//! orders are even)`, which bounds the search precision.
//!
//! For each `e` the set of attainable `sum q` residues is a cyclic sumset,
//! independent of `n`, so it is built once and cached.

use crate::arith;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::polynum::TripleInvariants;

use super::Prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalMode {
    /// Answer `true` immediately when some order is not divisible by 4
    /// (every such triple is locally universal); search otherwise.
    Shortcut,
    /// Always search.
    Verify,
}

/// Default ceiling on `p^(2e+1)`.
pub const DEFAULT_MAX_MODULUS: u64 = 1 << 22;

pub struct LocalRepresentationOracle {
    orders: [(i128, i128); 3],
    l_coeff: i128,
    shift: i128,
    all_even: bool,
    prime: u64,
    max_modulus: u64,
    levels: Vec<Option<BitSet>>,
}

impl LocalRepresentationOracle {
    pub fn new(t: &TripleInvariants, p: Prime) -> Self {
        Self {
            orders: t.sorted.map(|m| (m as i128 - 2, m as i128 - 4)),
            l_coeff: t.l_coeff,
            shift: t.shift,
            all_even: t.delta == 2,
            prime: p.get(),
            max_modulus: DEFAULT_MAX_MODULUS,
            levels: Vec::new(),
        }
    }

    pub fn with_max_modulus(mut self, max_modulus: u64) -> Self {
        self.max_modulus = max_modulus;
        self
    }

    fn modulus(&self, e: u32) -> Result<u64> {
        (self.prime as u128)
            .checked_pow(2 * e + 1)
            .filter(|&m| m <= self.max_modulus as u128)
            .map(|m| m as u64)
            .ok_or_else(|| Error::ResourceLimit {
                what: format!("local search at {}^{}", self.prime, 2 * e + 1),
                requested: (self.prime as u128).saturating_pow(2 * e + 1).min(u64::MAX as u128) as u64,
                cap: self.max_modulus,
            })
    }

    fn build_level(&self, e: u32) -> Result<BitSet> {
        let modulus = self.modulus(e)?;
        let md = modulus as i128;
        let len = modulus as usize;
        let mut full = Vec::with_capacity(3);
        let mut lifting = Vec::with_capacity(3);
        for &(lead, lin) in &self.orders {
            let mut all = BitSet::new(len);
            let mut lift = BitSet::new(len);
            for x in 0..md {
                let q = (lead * x % md * x - lin * x).rem_euclid(md) as usize;
                all.set(q);
                if arith::valuation(2 * lead * x - lin, self.prime) == Some(e) {
                    lift.set(q);
                }
            }
            full.push(all);
            lifting.push(lift);
        }
        let mut reachable = BitSet::new(len);
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let rest = cyclic_sumset(&full[j], &full[k]);
            reachable.or_assign(&cyclic_sumset(&lifting[i], &rest));
        }
        Ok(reachable)
    }

    fn level(&mut self, e: u32) -> Result<&BitSet> {
        let idx = e as usize;
        if self.levels.len() <= idx {
            self.levels.resize(idx + 1, None);
        }
        if self.levels[idx].is_none() {
            self.levels[idx] = Some(self.build_level(e)?);
        }
        Ok(self.levels[idx].as_ref().expect("just built"))
    }

    /// Whether `n` is represented over `Z_p`.
    pub fn represents(&mut self, n: u64) -> Result<bool> {
        if n == 0 {
            return Ok(true);
        }
        let target = self.l_coeff * n as i128 + self.shift;
        let ord = arith::valuation(target, self.prime).expect("target > 0");
        let extra = u32::from(self.prime == 2 && self.all_even);
        let e_max = ord / 2 + extra;
        for e in 0..=e_max {
            let modulus = self.modulus(e)? as u128;
            let want = ((2 * n as u128) % modulus) as usize;
            if self.level(e)?.get(want) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn cyclic_sumset(a: &BitSet, b: &BitSet) -> BitSet {
    let (small, large) = if a.count_ones() <= b.count_ones() { (a, b) } else { (b, a) };
    let mut out = BitSet::new(a.len());
    for s in small.iter_ones() {
        out.or_rotated(large, s);
    }
    out
}

/// Local representability of `l_n + v` by `L_p + v`, i.e. of `n` by the
/// polygonal sum over `Z_p`.
pub fn local_coset_represents(t: &TripleInvariants, p: Prime, n: u64, mode: LocalMode) -> Result<bool> {
    if mode == LocalMode::Shortcut && !t.all_divisible_by_four() {
        return Ok(true);
    }
    LocalRepresentationOracle::new(t, p).represents(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynum::triple_invariants;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn locally_universal_examples() {
        let t = triple_invariants(3, 4, 5).unwrap();
        let mut five = LocalRepresentationOracle::new(&t, prime(5));
        let t2 = triple_invariants(6, 8, 10).unwrap();
        let mut two = LocalRepresentationOracle::new(&t2, prime(2));
        for n in 0..=100 {
            assert!(five.represents(n).unwrap(), "n={n}");
            assert!(two.represents(n).unwrap(), "n={n}");
            assert!(local_coset_represents(&t, prime(5), n, LocalMode::Shortcut).unwrap());
        }
    }

    // n is a sum of three squares iff n is not 4^a (8b + 7); for squares the
    // local condition at 2 is the whole story.
    #[test]
    fn three_squares_at_two() {
        let cube = triple_invariants(4, 4, 4).unwrap();
        assert!(!local_coset_represents(&cube, prime(2), 7, LocalMode::Shortcut).unwrap());
        let mut oracle = LocalRepresentationOracle::new(&cube, prime(2));
        for n in 0..=300u64 {
            let mut m = n;
            while m > 0 && m % 4 == 0 {
                m /= 4;
            }
            let expected = !(n > 0 && m % 8 == 7);
            assert_eq!(oracle.represents(n).unwrap(), expected, "n={n}");
        }
    }

    #[test]
    fn precision_cap_is_reported() {
        let cube = triple_invariants(4, 4, 4).unwrap();
        let mut oracle = LocalRepresentationOracle::new(&cube, prime(2)).with_max_modulus(64);
        assert!(matches!(oracle.represents(1 << 20), Err(Error::ResourceLimit { .. })));
    }
}
