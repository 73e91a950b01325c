//! Exceptional square classes `S^t = { n : l_n + v = t r^2 }` for squarefree
//! `t | N`, and the congruence arguments that rule some of them out.

use serde::{Deserialize, Serialize};

use crate::arith::{self, exact_sqrt};
use crate::error::{domain, Result};
use crate::polynum::TripleInvariants;

/// Certificate `l_n + v = t r^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExceptionalWitness {
    pub t: u64,
    pub r: u128,
}

impl ExceptionalWitness {
    pub fn holds_for(&self, target: i128) -> bool {
        self.t as i128 * (self.r as i128) * (self.r as i128) == target
    }
}

/// Squarefree divisors of `n >= 1`, ascending.
pub fn squarefree_divisors(n: u64) -> Vec<u64> {
    let mut divisors = vec![1u64];
    for p in arith::prime_divisors(n) {
        let with_p: Vec<u64> = divisors.iter().map(|d| d * p).collect();
        divisors.extend(with_p);
    }
    divisors.sort_unstable();
    divisors
}

/// Distinct primes dividing the level `N`.
pub fn level_primes(t: &TripleInvariants) -> Vec<u64> {
    crate::localfield::bad_primes(t)
}

/// Squarefree divisors of the level, computed from the factorizations of
/// `a - 2`, `b - 2`, `c - 2` (the level itself may not fit in 64 bits).
pub fn level_squarefree_divisors(t: &TripleInvariants) -> Vec<u64> {
    let mut divisors = vec![1u64];
    for p in level_primes(t) {
        let with_p: Vec<u64> = divisors.iter().filter_map(|d| d.checked_mul(p)).collect();
        divisors.extend(with_p);
    }
    divisors.sort_unstable();
    divisors
}

fn is_squarefree(t: u64) -> bool {
    t > 0 && arith::factorize(t).iter().all(|&(_, e)| e == 1)
}

fn membership_unchecked(target: i128, t_div: u64) -> Option<ExceptionalWitness> {
    if target % t_div as i128 != 0 {
        return None;
    }
    let r = exact_sqrt(target / t_div as i128)?;
    let witness = ExceptionalWitness { t: t_div, r: r as u128 };
    debug_assert!(witness.holds_for(target));
    Some(witness)
}

/// Witness that `n` lies in `S^{t_div}`, if it does.
pub fn exceptional_membership(t: &TripleInvariants, t_div: u64, n: u64) -> Result<Option<ExceptionalWitness>> {
    if !is_squarefree(t_div) {
        return domain(format!("{t_div} is not squarefree"));
    }
    if t.level % t_div as i128 != 0 {
        return domain(format!("{t_div} does not divide the level {}", t.level));
    }
    let target = t.target(n);
    let witness = membership_unchecked(target, t_div);
    if let Some(w) = witness {
        assert!(w.holds_for(target), "witness re-check failed");
    }
    Ok(witness)
}

/// Precomputed divisor list for repeated union queries on one triple.
#[derive(Debug, Clone)]
pub struct ExceptionalSet {
    triple: TripleInvariants,
    divisors: Vec<u64>,
}

impl ExceptionalSet {
    pub fn new(t: &TripleInvariants) -> Self {
        Self {
            triple: t.clone(),
            divisors: level_squarefree_divisors(t),
        }
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn witnesses(&self, n: u64) -> Vec<ExceptionalWitness> {
        let target = self.triple.target(n);
        self.divisors
            .iter()
            .filter_map(|&d| membership_unchecked(target, d))
            .collect()
    }

    pub fn contains(&self, n: u64) -> bool {
        !self.witnesses(n).is_empty()
    }
}

/// All witnesses of `n ∈ S^t` over squarefree `t | N`; empty means `n ∉ S`.
pub fn exceptional_union(t: &TripleInvariants, n: u64) -> Vec<ExceptionalWitness> {
    ExceptionalSet::new(t).witnesses(n)
}

/// How the mod-3 argument excludes perfect squares from the targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mod3Exclusion {
    /// `a, b, c` distinct mod 3: every target is `≡ 2 (mod 3)`.
    Always,
    /// `a ≡ b ≡ c ≢ 2 (mod 3)`: targets with `n ≡ residue (mod 3)` are `≡ 2`.
    OnClass { residue: u8 },
    Never,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClassExclusion {
    /// Pairwise gcds of `a-2, b-2, c-2` are powers of two and no odd prime of
    /// the level divides any target, so only `t ∈ {1, 2}` can occur.
    pub odd_primes_clean: bool,
    pub mod3: Mod3Exclusion,
    /// No target has the form `2 r^2`.
    pub twice_squares_excluded: bool,
    /// `ord_2(l_n + v)` when it does not depend on `n`.
    pub constant_ord2: Option<u32>,
    pub details: Vec<String>,
}

/// The square-class exclusions available from the triple's congruence data.
pub fn square_class_exclusion(t: &TripleInvariants) -> SquareClassExclusion {
    let mut details = Vec::new();
    let leads = t.leads();

    let gcds_ok = pairwise_gcds_power_of_two(leads);
    let dirty: Vec<u64> = level_primes(t)
        .into_iter()
        .filter(|&p| p != 2 && t.shift % p as i128 == 0)
        .collect();
    let odd_primes_clean = gcds_ok && dirty.is_empty();
    if !gcds_ok {
        details.push("some pairwise gcd of a-2, b-2, c-2 has an odd prime factor".into());
    }
    if !dirty.is_empty() {
        details.push(format!("odd level primes dividing every target: {dirty:?}"));
    }

    let residues = t.sorted.map(|m| m.rem_euclid(3));
    let distinct = residues[0] != residues[1] && residues[1] != residues[2] && residues[0] != residues[2];
    let mod3 = if distinct {
        details.push("a, b, c distinct mod 3: targets are 2 mod 3".into());
        Mod3Exclusion::Always
    } else if residues[0] == residues[1] && residues[1] == residues[2] && residues[0] != 2 {
        let residue = ((t.sorted[0] + 1).rem_euclid(3)) as u8;
        details.push(format!("a ≡ b ≡ c mod 3: targets with n ≡ {residue} (mod 3) are 2 mod 3"));
        Mod3Exclusion::OnClass { residue }
    } else {
        Mod3Exclusion::Never
    };

    let (twice_squares_excluded, constant_ord2) = twice_square_exclusion(t, &mut details);

    SquareClassExclusion {
        odd_primes_clean,
        mod3,
        twice_squares_excluded,
        constant_ord2,
        details,
    }
}

pub fn pairwise_gcds_power_of_two(leads: [i128; 3]) -> bool {
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .all(|&(i, j)| arith::is_power_of_two(arith::gcd(leads[i], leads[j])))
}

// 2 r^2 has odd 2-adic order and odd part ≡ 1 (mod 8). When
// ord_2(v) < ord_2(l), every target has order ord_2(v); if that is even we
// are done, otherwise the odd part (l/2^s) n + v/2^s is examined mod 8.
fn twice_square_exclusion(t: &TripleInvariants, details: &mut Vec<String>) -> (bool, Option<u32>) {
    let ord_l = arith::valuation(t.l_coeff, 2).expect("l_coeff > 0");
    let Some(ord_v) = arith::valuation(t.shift, 2) else {
        details.push("v = 0: the target order at 2 is unbounded".into());
        return (false, None);
    };
    if ord_v >= ord_l {
        details.push(format!("ord_2 varies with n (ord_2 l = {ord_l}, ord_2 v = {ord_v})"));
        return (false, None);
    }
    if ord_v % 2 == 0 {
        details.push(format!("ord_2 of every target is {ord_v} (even)"));
        return (true, Some(ord_v));
    }
    let scale = 1i128 << ord_v;
    let (lc, sc) = ((t.l_coeff / scale).rem_euclid(8), (t.shift / scale).rem_euclid(8));
    let hits_one = (0..8).any(|n| (lc * n + sc).rem_euclid(8) == 1);
    if hits_one {
        details.push(format!("ord_2 of every target is {ord_v} (odd) and the odd part reaches 1 mod 8"));
        (false, Some(ord_v))
    } else {
        details.push(format!("ord_2 of every target is {ord_v} but the odd part is never 1 mod 8"));
        (true, Some(ord_v))
    }
}
